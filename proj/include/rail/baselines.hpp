#pragma once

#include <span>

#include "rail/geometry.hpp"

namespace rail::baselines {

using geometry::Point;

enum class Algorithm { MinMax, RssiDvHop };

struct BaselineEstimate {
    Algorithm algorithm;
    Point position;
    bool degenerate = false;
};

struct AnchorHops {
    Point position;
    int hops = 1;
};

struct AnchorRange {
    Point position;
    double distance = 0.0;
};

/// Min-Max: intersect squares of half-width hops * comm_range and take the
/// center. An inverted intersection is still centered and flagged degenerate.
BaselineEstimate min_max(std::span<const AnchorHops> anchors, double comm_range);

/// RSSI-based DV-hop: multi-hop RSSI distances fed to a linearized
/// three-circle least-squares solve. Falls back to the anchor centroid (and
/// flags degenerate) when |det| < 1e-9.
BaselineEstimate rssi_dv_hop(std::span<const AnchorRange, 3> anchors);

}  // namespace rail::baselines
