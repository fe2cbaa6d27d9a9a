#include "rail/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rail::baselines {

BaselineEstimate min_max(std::span<const AnchorHops> anchors, double comm_range) {
    if (anchors.empty()) throw std::invalid_argument("min_max needs at least one anchor");
    double x_lo = -std::numeric_limits<double>::infinity();
    double y_lo = x_lo;
    double x_hi = std::numeric_limits<double>::infinity();
    double y_hi = x_hi;
    for (const auto& a : anchors) {
        const double half = a.hops * comm_range;
        x_lo = std::max(x_lo, a.position.x - half);
        x_hi = std::min(x_hi, a.position.x + half);
        y_lo = std::max(y_lo, a.position.y - half);
        y_hi = std::min(y_hi, a.position.y + half);
    }
    return {Algorithm::MinMax, {(x_lo + x_hi) / 2.0, (y_lo + y_hi) / 2.0},
            x_lo > x_hi || y_lo > y_hi};
}

BaselineEstimate rssi_dv_hop(std::span<const AnchorRange, 3> anchors) {
    // (x - x_i)^2 + (y - y_i)^2 = d_i^2, minus the third equation:
    // 2(x_3 - x_i) x + 2(y_3 - y_i) y = d_i^2 - d_3^2 - x_i^2 + x_3^2 - y_i^2 + y_3^2
    const auto& p3 = anchors[2].position;
    const double d3 = anchors[2].distance;
    std::array<double, 2> a{}, b{}, rhs{};
    for (int i = 0; i < 2; ++i) {
        const auto& p = anchors[i].position;
        const double d = anchors[i].distance;
        a[i] = 2.0 * (p3.x - p.x);
        b[i] = 2.0 * (p3.y - p.y);
        rhs[i] = d * d - d3 * d3 - p.x * p.x + p3.x * p3.x - p.y * p.y + p3.y * p3.y;
    }
    const double det = a[0] * b[1] - a[1] * b[0];
    if (std::abs(det) < 1e-9) {
        const std::array<Point, 3> pts{anchors[0].position, anchors[1].position, p3};
        return {Algorithm::RssiDvHop, geometry::centroid(pts), true};
    }
    const double x = (rhs[0] * b[1] - rhs[1] * b[0]) / det;
    const double y = (a[0] * rhs[1] - a[1] * rhs[0]) / det;
    return {Algorithm::RssiDvHop, {x, y}, false};
}

}  // namespace rail::baselines
