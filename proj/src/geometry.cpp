#include "rail/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rail::geometry {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

AABox square_around(const Point& c, double half) {
    return {c.x - half, c.x + half, c.y - half, c.y + half};
}

Ray::Ray(Point origin, double dx, double dy) : origin_(origin) {
    const double norm = std::hypot(dx, dy);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw GeometryError("ray direction must be a finite non-zero vector");
    }
    dx_ = dx / norm;
    dy_ = dy / norm;
}

MaybeBox intersect_boxes(std::span<const AABox> boxes) {
    if (boxes.empty()) {
        throw GeometryError("intersect_boxes needs at least one box");
    }
    AABox out = boxes.front();
    for (const auto& b : boxes.subspan(1)) {
        out.x_min = std::max(out.x_min, b.x_min);
        out.x_max = std::min(out.x_max, b.x_max);
        out.y_min = std::max(out.y_min, b.y_min);
        out.y_max = std::min(out.y_max, b.y_max);
    }
    if (out.x_min > out.x_max || out.y_min > out.y_max) {
        return std::nullopt;
    }
    return out;
}

std::optional<Point> ray_pair_intersection(const Ray& r1, const Ray& r2, double tol) {
    // o1 + t*d1 = o2 + s*d2  =>  [d1 -d2] [t s]^T = o2 - o1
    const double det = r1.dx() * (-r2.dy()) - r1.dy() * (-r2.dx());
    if (std::abs(det) <= tol) {
        return std::nullopt;
    }
    const double rx = r2.origin().x - r1.origin().x;
    const double ry = r2.origin().y - r1.origin().y;
    const double t = (rx * (-r2.dy()) - ry * (-r2.dx())) / det;
    const double s = (r1.dx() * ry - r1.dy() * rx) / det;
    if (t < -tol || s < -tol) {
        return std::nullopt;
    }
    return r1.at(t);
}

bool contains(const AABox& box, const Point& p, double tol) {
    return p.x >= box.x_min - tol && p.x <= box.x_max + tol && p.y >= box.y_min - tol &&
           p.y <= box.y_max + tol;
}

double distance_to_box(const AABox& box, const Point& p) {
    const double cx = std::clamp(p.x, box.x_min, box.x_max);
    const double cy = std::clamp(p.y, box.y_min, box.y_max);
    return std::hypot(p.x - cx, p.y - cy);
}

Point project_onto_box(const AABox& box, const Point& p) {
    if (p.x > box.x_min && p.x < box.x_max && p.y > box.y_min && p.y < box.y_max) {
        throw GeometryError("project_onto_box: point is strictly inside the box");
    }
    // Outside (or on) the box the clamp is already the nearest boundary point.
    return {std::clamp(p.x, box.x_min, box.x_max), std::clamp(p.y, box.y_min, box.y_max)};
}

Point box_center(const AABox& box) {
    return {(box.x_min + box.x_max) / 2.0, (box.y_min + box.y_max) / 2.0};
}

Point box_center(const MaybeBox& box) {
    if (!box) {
        throw GeometryError("box_center of an empty box");
    }
    return box_center(*box);
}

Point centroid(std::span<const Point> points) {
    if (points.empty()) {
        throw GeometryError("centroid of an empty point set");
    }
    Point sum;
    for (const auto& p : points) {
        sum.x += p.x;
        sum.y += p.y;
    }
    const auto n = static_cast<double>(points.size());
    return {sum.x / n, sum.y / n};
}

}  // namespace rail::geometry
