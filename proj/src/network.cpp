#include "rail/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

namespace rail::network {

namespace {

double triangle_area(const Point& a, const Point& b, const Point& c) {
    return std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) / 2.0;
}

// Connectivity over true distances, used during generation before any
// ranging takes place.
bool all_reach_first_anchor(const Deployment& dep) {
    const std::size_t n = dep.node_count();
    const double r2 = dep.comm_range * dep.comm_range;
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{dep.anchor_ids.front()};
    seen[dep.anchor_ids.front()] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        const Point& pu = dep.nodes[u];
        for (NodeId v = 0; v < n; ++v) {
            if (seen[v]) continue;
            const double dx = dep.nodes[v].x - pu.x;
            const double dy = dep.nodes[v].y - pu.y;
            if (dx * dx + dy * dy <= r2) {
                seen[v] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == n;
}

}  // namespace

bool Deployment::is_anchor(NodeId id) const {
    return std::find(anchor_ids.begin(), anchor_ids.end(), id) != anchor_ids.end();
}

std::vector<NodeId> Deployment::unknown_ids() const {
    std::vector<NodeId> out;
    out.reserve(nodes.size() - anchor_ids.size());
    for (NodeId i = 0; i < nodes.size(); ++i) {
        if (!is_anchor(i)) out.push_back(i);
    }
    return out;
}

std::optional<std::string> check_deployment(const Deployment& dep, double min_anchor_area) {
    if (dep.anchor_ids.size() < 3) return "fewer than 3 anchors";
    for (NodeId a : dep.anchor_ids) {
        if (a >= dep.node_count()) return "anchor id out of range";
    }
    for (const auto& p : dep.nodes) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.x > dep.width ||
            p.y < 0.0 || p.y > dep.height) {
            return "node outside the deployment area";
        }
    }
    const auto& ids = dep.anchor_ids;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (ids[i] == ids[j]) return "duplicate anchor id";
            if (geometry::distance(dep.nodes[ids[i]], dep.nodes[ids[j]]) <= dep.comm_range) {
                return "anchors within one hop of each other";
            }
            for (std::size_t k = j + 1; k < ids.size(); ++k) {
                if (triangle_area(dep.nodes[ids[i]], dep.nodes[ids[j]], dep.nodes[ids[k]]) <=
                    min_anchor_area) {
                    return "anchor triangle too thin";
                }
            }
        }
    }
    if (!all_reach_first_anchor(dep)) return "network is not connected";
    return std::nullopt;
}

Deployment generate_deployment(const DeploymentConfig& cfg) {
    if (cfg.n_anchors < 3) throw std::invalid_argument("need at least 3 anchors");
    if (!(cfg.width > 0.0 && cfg.height > 0.0 && cfg.comm_range > 0.0)) {
        throw std::invalid_argument("area and communication range must be positive");
    }
    Rng rng(cfg.seed);
    Deployment dep;
    dep.width = cfg.width;
    dep.height = cfg.height;
    dep.comm_range = cfg.comm_range;
    for (NodeId i = 0; i < cfg.n_anchors; ++i) dep.anchor_ids.push_back(i);
    const std::size_t total = cfg.n_anchors + cfg.n_unknown;
    dep.nodes.resize(total);
    std::string last_reason = "no attempts made";
    for (std::size_t attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        for (auto& p : dep.nodes) {
            p.x = rng.uniform(0.0, cfg.width);
            p.y = rng.uniform(0.0, cfg.height);
        }
        auto violation = check_deployment(dep, cfg.min_anchor_area);
        if (!violation) return dep;
        last_reason = *violation;
    }
    throw GenerationFailed("no valid deployment after " + std::to_string(cfg.max_attempts) +
                           " attempts (last rejection: " + last_reason + ")");
}

std::optional<double> NetworkGraph::edge(NodeId u, NodeId v) const {
    for (const auto& e : adjacency_.at(u)) {
        if (e.to == v) return e.distance;
    }
    return std::nullopt;
}

std::size_t NetworkGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& adj : adjacency_) twice += adj.size();
    return twice / 2;
}

void NetworkGraph::add_edge(NodeId u, NodeId v, double distance) {
    if (u == v) throw std::invalid_argument("self loop");
    if (u >= node_count() || v >= node_count()) throw std::invalid_argument("node id out of range");
    if (!(distance > 0.0) || !std::isfinite(distance)) {
        throw std::invalid_argument("edge length must be finite and positive");
    }
    if (edge(u, v)) throw std::invalid_argument("duplicate edge");
    adjacency_[u].push_back({v, distance});
    adjacency_[v].push_back({u, distance});
}

NetworkGraph build_graph(const Deployment& dep, const radio::PathLossModel& model, Rng& noise) {
    model.validate();
    NetworkGraph g(dep.node_count());
    const auto n = static_cast<NodeId>(dep.node_count());
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            const double d = geometry::distance(dep.nodes[u], dep.nodes[v]);
            if (d > dep.comm_range) continue;
            // Coincident nodes cannot be ranged; treat them as a tiny separation.
            const double true_d = std::max(d, 1e-6);
            const double draw = model.sigma > 0.0 ? noise.normal(0.0, model.sigma) : 0.0;
            g.add_edge(u, v, radio::estimate_distance(model, radio::rssi_at(model, true_d, draw)));
        }
    }
    return g;
}

ShortestPathTree::ShortestPathTree(const NetworkGraph& g, NodeId source)
    : source_(source),
      dist_(g.node_count(), std::numeric_limits<double>::infinity()),
      pred_(g.node_count(), kNone),
      hops_(g.node_count(), -1) {
    if (source >= g.node_count()) throw std::invalid_argument("source out of range");
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    std::vector<char> settled(g.node_count(), 0);
    dist_[source] = 0.0;
    hops_[source] = 0;
    queue.emplace(0.0, source);
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        for (const auto& e : g.neighbors(u)) {
            if (settled[e.to]) continue;
            const double candidate = d + e.distance;
            if (candidate < dist_[e.to] || (candidate == dist_[e.to] && u < pred_[e.to])) {
                const bool improved = candidate < dist_[e.to];
                dist_[e.to] = candidate;
                pred_[e.to] = u;
                hops_[e.to] = hops_[u] + 1;
                if (improved) queue.emplace(candidate, e.to);
            }
        }
    }
}

std::vector<NodeId> ShortestPathTree::path_to(NodeId v) const {
    if (v >= pred_.size() || !reachable(v)) throw Unreachable(v);
    std::vector<NodeId> path;
    for (NodeId cur = v; cur != source_; cur = pred_[cur]) path.push_back(cur);
    path.push_back(source_);
    std::reverse(path.begin(), path.end());
    return path;
}

RangingResult ShortestPathTree::ranging_to(NodeId v) const {
    RangingResult r;
    r.anchor_id = source_;
    r.target_id = v;
    r.path = path_to(v);
    r.shortest_distance = dist_[v];
    r.hop_count = hops_[v];
    return r;
}

std::vector<RangingResult> shortest_ranging(const NetworkGraph& g, NodeId source,
                                            std::span<const NodeId> targets) {
    const ShortestPathTree tree(g, source);
    std::vector<RangingResult> out;
    out.reserve(targets.size());
    for (NodeId t : targets) out.push_back(tree.ranging_to(t));
    return out;
}

std::vector<int> min_hops(const NetworkGraph& g, NodeId source) {
    if (source >= g.node_count()) throw std::invalid_argument("source out of range");
    std::vector<int> hops(g.node_count(), -1);
    std::deque<NodeId> frontier{source};
    hops[source] = 0;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop_front();
        for (const auto& e : g.neighbors(u)) {
            if (hops[e.to] < 0) {
                hops[e.to] = hops[u] + 1;
                frontier.push_back(e.to);
            }
        }
    }
    for (NodeId v = 0; v < hops.size(); ++v) {
        if (hops[v] < 0) throw Unreachable(v);
    }
    return hops;
}

}  // namespace rail::network
