#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "rail/geometry.hpp"
#include "rail/network.hpp"

// Angle-inferred localization: bounding box from multi-hop ranges, angle
// estimates at each anchor corrected by the system per-hop error, one ray per
// anchor, and a four-case decision over the ray intersections.
namespace rail::localizer {

using geometry::AABox;
using geometry::MaybeBox;
using geometry::Point;
using geometry::Ray;
using network::NodeId;
using network::RangingResult;

struct DegenerateGeometry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Three anchors plus their pairwise ranging, ordered (0,1), (0,2), (1,2).
struct AnchorTriple {
    std::array<NodeId, 3> ids{};
    std::array<Point, 3> positions{};
    std::array<double, 3> pairwise_true_distances{};
    std::array<RangingResult, 3> pairwise_ranging{};
};

AnchorTriple make_anchor_triple(const network::Deployment& dep, const network::NetworkGraph& g,
                                const std::array<NodeId, 3>& ids);

/// Intersection of the per-anchor squares [x_i +- SD_i] x [y_i +- SD_i].
/// `ranging[i]` must belong to `anchors.ids[i]`.
MaybeBox bounding_box(const AnchorTriple& anchors, std::span<const RangingResult, 3> ranging);

/// (sum of pairwise SD - sum of pairwise true distance) / sum of pairwise
/// hops, floored at 0. Throws DegenerateGeometry if a pairwise hop count is 0.
double per_hop_error(const AnchorTriple& anchors);

/// One triangle sample: side lengths with the hop count each side spans.
struct SideSample {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    int hops_a = 1;
    int hops_b = 1;
    int hops_c = 1;
};

inline constexpr double kMinCorrectedSide = 0.01;

/// Subtracts e * hops when hops >= 2; result floored at kMinCorrectedSide.
double corrected_side(double length, int hops, double e);

/// Law-of-cosines angle opposite c after per-hop correction, in [0, pi].
double angle_from_sides(const SideSample& s, double e);

struct AngleEstimate {
    NodeId at_anchor = 0;
    NodeId reference_anchor = 0;
    double theta = 0.0;  // rad, [0, pi]
    int samples_used = 0;
};

/// Which hop-indexed triangles feed the angle at an anchor.
///   DeepestHop: the single triangle whose a and b edges end at hop K.
///   MeanOfHops: mean over the triangles at hops 1..K.
/// K = min(3, hops to the reference anchor, hops to the target).
enum class AngleSampling { DeepestHop, MeanOfHops };

/// Caches shortest-path trees rooted at anchors and at the first few hops of
/// every anchor-to-anchor path so that many angle queries share them.
/// Read-only after construction.
class AngleEstimator {
public:
    static constexpr int kMaxSamples = 3;

    AngleEstimator(const network::NetworkGraph& g, std::span<const NodeId> anchors,
                   AngleSampling sampling = AngleSampling::DeepestHop);

    /// Angle at `at` between the directions to `ref` and to `target`.
    /// Throws DegenerateGeometry if no sample exists or target is an anchor.
    AngleEstimate estimate(double e, NodeId at, NodeId ref, NodeId target) const;

    const network::ShortestPathTree& tree(NodeId root) const;
    const network::NetworkGraph& graph() const { return *graph_; }

private:
    const network::NetworkGraph* graph_;
    AngleSampling sampling_;
    std::vector<NodeId> anchors_;
    std::unordered_map<NodeId, network::ShortestPathTree> trees_;
};

/// Single-shot form; builds the trees it needs.
AngleEstimate estimate_angle(const network::NetworkGraph& g, double e, NodeId at, NodeId ref,
                             NodeId target,
                             AngleSampling sampling = AngleSampling::DeepestHop);

/// Angles measured at one anchor toward the target: relative to the next
/// anchor in the triple (reference) and to the one after (disambiguator).
struct AnchorAngles {
    AngleEstimate to_reference;
    AngleEstimate to_disambiguator;
};

/// Anchor i references anchor (i+1)%3 and disambiguates with (i+2)%3.
std::array<Ray, 3> build_rays(const AnchorTriple& anchors,
                              const std::array<AnchorAngles, 3>& angles);

enum class LocationCase { MultiIntersection, SingleIntersection, AllOutside, NoIntersection };

const char* to_string(LocationCase c);

struct RailDiagnostics {
    LocationCase case_fired = LocationCase::NoIntersection;
    AABox box;
    bool empty_box_fallback = false;
    std::vector<Ray> rays;
    std::vector<Point> intersections;
    std::array<NodeId, 3> anchors{};
    double per_hop_error = 0.0;
};

/// Four-case decision over the pairwise forward intersections of `rays`.
std::pair<Point, RailDiagnostics> precise_location(const AABox& box,
                                                   std::span<const Ray, 3> rays);

/// Replaces an empty box with the square of the anchor whose SD is smallest.
AABox resolve_box(const MaybeBox& box, const AnchorTriple& anchors,
                  std::span<const RangingResult, 3> ranging);

struct TargetEstimate {
    NodeId target = 0;
    Point position;
    RailDiagnostics diagnostics;
};

/// Per-run state: shortest-path trees from every anchor plus the angle
/// estimator. All queries are const and safe to call concurrently.
class Localizer {
public:
    Localizer(const network::Deployment& dep, const network::NetworkGraph& g,
              AngleSampling sampling = AngleSampling::DeepestHop);

    /// Three anchors with the smallest SD to `target` (ties by id), sorted by id.
    std::array<NodeId, 3> select_anchors(NodeId target) const;
    const AnchorTriple& triple(const std::array<NodeId, 3>& ids) const;
    const network::ShortestPathTree& anchor_tree(NodeId anchor) const;

    TargetEstimate locate(NodeId target) const;

private:
    const network::Deployment* dep_;
    AngleEstimator angles_;
    std::vector<std::array<NodeId, 3>> triple_keys_;
    std::vector<AnchorTriple> triples_;
    std::vector<double> triple_errors_;

    std::size_t triple_index(const std::array<NodeId, 3>& ids) const;
};

/// Serial reference: every unknown node in id order.
std::vector<TargetEstimate> localize_all_serial(
    const network::Deployment& dep, const network::NetworkGraph& g,
    AngleSampling sampling = AngleSampling::DeepestHop);

/// OpenMP over targets; output identical to localize_all_serial.
std::vector<TargetEstimate> localize_all(const network::Deployment& dep,
                                         const network::NetworkGraph& g,
                                         AngleSampling sampling = AngleSampling::DeepestHop);

}  // namespace rail::localizer
