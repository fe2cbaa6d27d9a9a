#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>

namespace rail::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

/// Axis-aligned box. Empty boxes are represented as std::nullopt by the
/// operations that can produce them.
struct AABox {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    friend bool operator==(const AABox&, const AABox&) = default;
};

using MaybeBox = std::optional<AABox>;

/// Square of half-width `half` around `c`.
AABox square_around(const Point& c, double half);

/// Direction is normalized on construction; a zero vector throws.
class Ray {
public:
    Ray(Point origin, double dx, double dy);

    const Point& origin() const { return origin_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    Point at(double t) const { return {origin_.x + t * dx_, origin_.y + t * dy_}; }

private:
    Point origin_;
    double dx_;
    double dy_;
};

struct GeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kDefaultTol = 1e-9;

// Component-wise max of lower bounds / min of upper bounds. nullopt when an
// axis inverts.
MaybeBox intersect_boxes(std::span<const AABox> boxes);

/// Forward intersection of two rays: both ray parameters must be >= -tol and
/// the system determinant must exceed tol in magnitude.
std::optional<Point> ray_pair_intersection(const Ray& r1, const Ray& r2,
                                           double tol = kDefaultTol);

bool contains(const AABox& box, const Point& p, double tol = kDefaultTol);

/// Euclidean distance from p to the box (0 when inside).
double distance_to_box(const AABox& box, const Point& p);

/// Closest boundary point of `box` to an outside point `p`.
/// Throws GeometryError when p is strictly inside.
Point project_onto_box(const AABox& box, const Point& p);

Point box_center(const AABox& box);
Point box_center(const MaybeBox& box);

/// Mean of 1..3 points (midpoint for two, triangle centroid for three).
Point centroid(std::span<const Point> points);

}  // namespace rail::geometry
