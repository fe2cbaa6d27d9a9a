#pragma once

#include <string>
#include <vector>

#include "rail/localizer.hpp"
#include "rail/network.hpp"

namespace rail::svg {

/// Deployment with one target's bounding box, rays, ray intersections, true
/// position and estimate. Elements carry class attributes (node, anchor, box,
/// ray, intersection, truth, estimate) so they can be counted.
std::string scene_svg(const network::Deployment& dep, const localizer::TargetEstimate& target);

struct Series {
    std::string name;
    std::vector<double> values;  // y values at x = 0, 1, 2, ...
};

/// Self-contained line chart with axes, ticks and a legend. Series with a
/// single point are drawn as markers only.
std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series);

}  // namespace rail::svg
