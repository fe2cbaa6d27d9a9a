#include "rail/localizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace rail::localizer {

using network::NetworkGraph;
using network::ShortestPathTree;

namespace {

AnchorTriple assemble_triple(const network::Deployment& dep, const std::array<NodeId, 3>& ids,
                             const ShortestPathTree& from0, const ShortestPathTree& from1) {
    AnchorTriple t;
    t.ids = ids;
    for (int i = 0; i < 3; ++i) t.positions[i] = dep.position(ids[i]);
    t.pairwise_ranging = {from0.ranging_to(ids[1]), from0.ranging_to(ids[2]),
                          from1.ranging_to(ids[2])};
    t.pairwise_true_distances = {geometry::distance(t.positions[0], t.positions[1]),
                                 geometry::distance(t.positions[0], t.positions[2]),
                                 geometry::distance(t.positions[1], t.positions[2])};
    return t;
}

}  // namespace

AnchorTriple make_anchor_triple(const network::Deployment& dep, const NetworkGraph& g,
                                const std::array<NodeId, 3>& ids) {
    return assemble_triple(dep, ids, ShortestPathTree(g, ids[0]), ShortestPathTree(g, ids[1]));
}

MaybeBox bounding_box(const AnchorTriple& anchors, std::span<const RangingResult, 3> ranging) {
    std::array<AABox, 3> squares;
    for (int i = 0; i < 3; ++i) {
        squares[i] = geometry::square_around(anchors.positions[i], ranging[i].shortest_distance);
    }
    return geometry::intersect_boxes(squares);
}

double per_hop_error(const AnchorTriple& anchors) {
    double sd_sum = 0.0;
    double true_sum = 0.0;
    int hop_sum = 0;
    for (int i = 0; i < 3; ++i) {
        const auto& r = anchors.pairwise_ranging[i];
        if (r.hop_count <= 0) throw DegenerateGeometry("anchor pair with zero hops");
        sd_sum += r.shortest_distance;
        true_sum += anchors.pairwise_true_distances[i];
        hop_sum += r.hop_count;
    }
    return std::max(0.0, (sd_sum - true_sum) / hop_sum);
}

double corrected_side(double length, int hops, double e) {
    const double corrected = hops >= 2 ? length - e * hops : length;
    return std::max(corrected, kMinCorrectedSide);
}

double angle_from_sides(const SideSample& s, double e) {
    const double a = corrected_side(s.a, s.hops_a, e);
    const double b = corrected_side(s.b, s.hops_b, e);
    const double c = corrected_side(s.c, s.hops_c, e);
    const double cosine = (a * a + b * b - c * c) / (2.0 * a * b);
    return std::acos(std::clamp(cosine, -1.0, 1.0));
}

AngleEstimator::AngleEstimator(const NetworkGraph& g, std::span<const NodeId> anchors,
                               AngleSampling sampling)
    : graph_(&g), sampling_(sampling), anchors_(anchors.begin(), anchors.end()) {
    for (NodeId a : anchors_) trees_.try_emplace(a, g, a);
    for (NodeId a : anchors_) {
        const auto& from_a = trees_.at(a);
        for (NodeId b : anchors_) {
            if (a == b || !from_a.reachable(b)) continue;
            const auto path = from_a.path_to(b);
            const std::size_t last = std::min<std::size_t>(kMaxSamples, path.size() - 1);
            for (std::size_t k = 1; k <= last; ++k) trees_.try_emplace(path[k], g, path[k]);
        }
    }
}

const ShortestPathTree& AngleEstimator::tree(NodeId root) const {
    auto it = trees_.find(root);
    if (it == trees_.end()) throw std::out_of_range("no cached shortest-path tree for node");
    return it->second;
}

AngleEstimate AngleEstimator::estimate(double e, NodeId at, NodeId ref, NodeId target) const {
    if (target == at || target == ref ||
        std::find(anchors_.begin(), anchors_.end(), target) != anchors_.end()) {
        throw DegenerateGeometry("angle target coincides with an anchor");
    }
    const auto& from_at = tree(at);
    const auto to_ref = from_at.path_to(ref);
    const auto to_target = from_at.path_to(target);
    const int samples = std::min({kMaxSamples, static_cast<int>(to_ref.size()) - 1,
                                  static_cast<int>(to_target.size()) - 1});
    if (samples <= 0) throw DegenerateGeometry("no triangle samples available");

    const int first = sampling_ == AngleSampling::DeepestHop ? samples : 1;
    double theta_sum = 0.0;
    for (int k = first; k <= samples; ++k) {
        const NodeId on_ref = to_ref[k];
        const NodeId on_target = to_target[k];
        SideSample s;
        s.a = from_at.distance(on_ref);
        s.b = from_at.distance(on_target);
        s.hops_a = k;
        s.hops_b = k;
        if (on_ref == on_target) {
            s.c = 0.0;
            s.hops_c = 0;
        } else if (auto direct = graph_->edge(on_ref, on_target)) {
            s.c = *direct;
            s.hops_c = 1;
        } else {
            const auto& bridge = tree(on_ref);
            if (!bridge.reachable(on_target)) throw network::Unreachable(on_target);
            s.c = bridge.distance(on_target);
            s.hops_c = bridge.hops(on_target);
        }
        theta_sum += angle_from_sides(s, e);
    }
    const int used = samples - first + 1;
    return {at, ref, theta_sum / used, used};
}

AngleEstimate estimate_angle(const NetworkGraph& g, double e, NodeId at, NodeId ref,
                             NodeId target, AngleSampling sampling) {
    const std::array<NodeId, 2> anchors{at, ref};
    return AngleEstimator(g, anchors, sampling).estimate(e, at, ref, target);
}

namespace {

struct Vec {
    double x;
    double y;
};

Vec unit_towards(const Point& from, const Point& to) {
    const double len = geometry::distance(from, to);
    if (!(len > 0.0)) throw DegenerateGeometry("coincident anchors");
    return {(to.x - from.x) / len, (to.y - from.y) / len};
}

Vec rotate(const Vec& v, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {v.x * c - v.y * s, v.x * s + v.y * c};
}

double angle_between(const Vec& u, const Vec& v) {
    return std::acos(std::clamp(u.x * v.x + u.y * v.y, -1.0, 1.0));
}

}  // namespace

std::array<Ray, 3> build_rays(const AnchorTriple& anchors,
                              const std::array<AnchorAngles, 3>& angles) {
    std::vector<Ray> rays;
    rays.reserve(3);
    for (int i = 0; i < 3; ++i) {
        const Point& origin = anchors.positions[i];
        const Vec to_ref = unit_towards(origin, anchors.positions[(i + 1) % 3]);
        const Vec to_dis = unit_towards(origin, anchors.positions[(i + 2) % 3]);
        const double theta_ref = angles[i].to_reference.theta;
        const double theta_dis = angles[i].to_disambiguator.theta;
        const Vec ccw = rotate(to_ref, theta_ref);
        const Vec cw = rotate(to_ref, -theta_ref);
        const double miss_ccw = std::abs(angle_between(ccw, to_dis) - theta_dis);
        const double miss_cw = std::abs(angle_between(cw, to_dis) - theta_dis);
        const Vec chosen = miss_ccw <= miss_cw ? ccw : cw;
        rays.emplace_back(origin, chosen.x, chosen.y);
    }
    return {rays[0], rays[1], rays[2]};
}

const char* to_string(LocationCase c) {
    switch (c) {
        case LocationCase::MultiIntersection: return "MultiIntersection";
        case LocationCase::SingleIntersection: return "SingleIntersection";
        case LocationCase::AllOutside: return "AllOutside";
        case LocationCase::NoIntersection: return "NoIntersection";
    }
    return "?";
}

std::pair<Point, RailDiagnostics> precise_location(const AABox& box,
                                                   std::span<const Ray, 3> rays) {
    RailDiagnostics diag;
    diag.box = box;
    diag.rays.assign(rays.begin(), rays.end());
    constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};
    for (const auto& [i, j] : kPairs) {
        if (auto p = geometry::ray_pair_intersection(rays[i], rays[j])) {
            diag.intersections.push_back(*p);
        }
    }

    std::vector<Point> inside;
    for (const auto& p : diag.intersections) {
        if (geometry::contains(box, p)) inside.push_back(p);
    }

    Point estimate;
    if (inside.size() >= 2) {
        diag.case_fired = LocationCase::MultiIntersection;
        estimate = geometry::centroid(inside);
    } else if (inside.size() == 1) {
        diag.case_fired = LocationCase::SingleIntersection;
        estimate = inside.front();
    } else if (!diag.intersections.empty()) {
        diag.case_fired = LocationCase::AllOutside;
        const auto nearest = std::min_element(
            diag.intersections.begin(), diag.intersections.end(),
            [&](const Point& l, const Point& r) {
                return geometry::distance_to_box(box, l) < geometry::distance_to_box(box, r);
            });
        estimate = geometry::project_onto_box(box, *nearest);
    } else {
        diag.case_fired = LocationCase::NoIntersection;
        estimate = geometry::box_center(box);
    }
    return {estimate, std::move(diag)};
}

AABox resolve_box(const MaybeBox& box, const AnchorTriple& anchors,
                  std::span<const RangingResult, 3> ranging) {
    if (box) return *box;
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (ranging[i].shortest_distance < ranging[best].shortest_distance) best = i;
    }
    return geometry::square_around(anchors.positions[best], ranging[best].shortest_distance);
}

Localizer::Localizer(const network::Deployment& dep, const NetworkGraph& g,
                     AngleSampling sampling)
    : dep_(&dep), angles_(g, dep.anchor_ids, sampling) {
    const auto& ids = dep.anchor_ids;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            for (std::size_t k = j + 1; k < ids.size(); ++k) {
                std::array<NodeId, 3> key{ids[i], ids[j], ids[k]};
                std::sort(key.begin(), key.end());
                AnchorTriple t =
                    assemble_triple(dep, key, angles_.tree(key[0]), angles_.tree(key[1]));
                triple_errors_.push_back(per_hop_error(t));
                triple_keys_.push_back(key);
                triples_.push_back(std::move(t));
            }
        }
    }
}

std::size_t Localizer::triple_index(const std::array<NodeId, 3>& ids) const {
    auto key = ids;
    std::sort(key.begin(), key.end());
    const auto it = std::find(triple_keys_.begin(), triple_keys_.end(), key);
    if (it == triple_keys_.end()) throw std::out_of_range("unknown anchor triple");
    return static_cast<std::size_t>(it - triple_keys_.begin());
}

const AnchorTriple& Localizer::triple(const std::array<NodeId, 3>& ids) const {
    return triples_[triple_index(ids)];
}

const ShortestPathTree& Localizer::anchor_tree(NodeId anchor) const { return angles_.tree(anchor); }

std::array<NodeId, 3> Localizer::select_anchors(NodeId target) const {
    std::vector<std::pair<double, NodeId>> by_range;
    for (NodeId a : dep_->anchor_ids) {
        const auto& t = anchor_tree(a);
        if (!t.reachable(target)) throw network::Unreachable(target);
        by_range.emplace_back(t.distance(target), a);
    }
    std::partial_sort(by_range.begin(), by_range.begin() + 3, by_range.end());
    std::array<NodeId, 3> out{by_range[0].second, by_range[1].second, by_range[2].second};
    std::sort(out.begin(), out.end());
    return out;
}

TargetEstimate Localizer::locate(NodeId target) const {
    const auto ids = select_anchors(target);
    const auto index = triple_index(ids);
    const AnchorTriple& anchors = triples_[index];
    const double e = triple_errors_[index];

    const std::array<RangingResult, 3> ranging{anchor_tree(ids[0]).ranging_to(target),
                                               anchor_tree(ids[1]).ranging_to(target),
                                               anchor_tree(ids[2]).ranging_to(target)};
    const MaybeBox raw_box = bounding_box(anchors, ranging);
    const AABox box = resolve_box(raw_box, anchors, ranging);

    std::array<AnchorAngles, 3> angles;
    for (int i = 0; i < 3; ++i) {
        angles[i].to_reference = angles_.estimate(e, ids[i], ids[(i + 1) % 3], target);
        angles[i].to_disambiguator = angles_.estimate(e, ids[i], ids[(i + 2) % 3], target);
    }
    const auto rays = build_rays(anchors, angles);
    auto [position, diag] = precise_location(box, rays);
    diag.empty_box_fallback = !raw_box.has_value();
    diag.anchors = ids;
    diag.per_hop_error = e;
    return {target, position, std::move(diag)};
}

std::vector<TargetEstimate> localize_all_serial(const network::Deployment& dep,
                                                const NetworkGraph& g, AngleSampling sampling) {
    const Localizer loc(dep, g, sampling);
    std::vector<TargetEstimate> out;
    for (NodeId t : dep.unknown_ids()) out.push_back(loc.locate(t));
    return out;
}

std::vector<TargetEstimate> localize_all(const network::Deployment& dep, const NetworkGraph& g,
                                         AngleSampling sampling) {
    const Localizer loc(dep, g, sampling);
    const auto targets = dep.unknown_ids();
    std::vector<TargetEstimate> out(targets.size());
    const auto n = static_cast<std::ptrdiff_t>(targets.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = loc.locate(targets[i]);
        } catch (...) {
#pragma omp critical(rail_localize_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace rail::localizer
