#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rail/geometry.hpp"
#include "rail/radio.hpp"
#include "rail/rng.hpp"

namespace rail::network {

using geometry::Point;
using NodeId = std::uint32_t;

struct GenerationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Unreachable : std::runtime_error {
    explicit Unreachable(NodeId target)
        : std::runtime_error("node " + std::to_string(target) + " is unreachable"), target(target) {}
    NodeId target;
};

struct DeploymentConfig {
    double width = 50.0;
    double height = 50.0;
    std::size_t n_unknown = 100;
    std::size_t n_anchors = 3;
    double comm_range = 10.0;
    std::uint64_t seed = 1;
    std::size_t max_attempts = 1000;
    // Minimum triangle area over every anchor triple, m^2.
    double min_anchor_area = 25.0;
};

/// Ground truth of one simulated world. Anchors occupy ids [0, n_anchors).
struct Deployment {
    double width = 0.0;
    double height = 0.0;
    std::vector<Point> nodes;
    std::vector<NodeId> anchor_ids;
    double comm_range = 0.0;

    std::size_t node_count() const { return nodes.size(); }
    bool is_anchor(NodeId id) const;
    std::vector<NodeId> unknown_ids() const;
    const Point& position(NodeId id) const { return nodes.at(id); }
};

/// Describes the first violated Deployment invariant, or nullopt if valid.
std::optional<std::string> check_deployment(const Deployment& dep, double min_anchor_area);

/// Rejection-samples whole deployments until every invariant holds.
/// Throws GenerationFailed after cfg.max_attempts tries.
Deployment generate_deployment(const DeploymentConfig& cfg);

struct Edge {
    NodeId to;
    double distance;  // RSSI-estimated, m
};

/// Symmetric one-hop graph carrying estimated edge lengths.
class NetworkGraph {
public:
    explicit NetworkGraph(std::size_t node_count) : adjacency_(node_count) {}

    std::size_t node_count() const { return adjacency_.size(); }
    std::span<const Edge> neighbors(NodeId u) const { return adjacency_.at(u); }
    std::optional<double> edge(NodeId u, NodeId v) const;
    std::size_t edge_count() const;

    /// Adds u-v in both directions. Throws std::invalid_argument on self loops,
    /// duplicates or non-positive lengths.
    void add_edge(NodeId u, NodeId v, double distance);

private:
    std::vector<std::vector<Edge>> adjacency_;
};

/// One edge per pair within comm_range; each edge's length is the RSSI
/// inversion of one noisy measurement drawn from `noise`.
NetworkGraph build_graph(const Deployment& dep, const radio::PathLossModel& model, Rng& noise);

struct RangingResult {
    NodeId anchor_id = 0;
    NodeId target_id = 0;
    double shortest_distance = 0.0;
    int hop_count = 0;
    std::vector<NodeId> path;  // anchor_id ... target_id
};

/// Single-source shortest paths under estimated edge lengths. On equal
/// distances the predecessor with the smaller id wins.
class ShortestPathTree {
public:
    ShortestPathTree(const NetworkGraph& g, NodeId source);

    NodeId source() const { return source_; }
    bool reachable(NodeId v) const { return pred_.at(v) != kNone || v == source_; }
    double distance(NodeId v) const { return dist_.at(v); }
    int hops(NodeId v) const { return hops_.at(v); }

    /// Throws Unreachable.
    std::vector<NodeId> path_to(NodeId v) const;
    RangingResult ranging_to(NodeId v) const;

private:
    static constexpr NodeId kNone = static_cast<NodeId>(-1);
    NodeId source_;
    std::vector<double> dist_;
    std::vector<NodeId> pred_;
    std::vector<int> hops_;
};

std::vector<RangingResult> shortest_ranging(const NetworkGraph& g, NodeId source,
                                            std::span<const NodeId> targets);

/// Unweighted BFS hop counts from source to every node. Throws Unreachable.
std::vector<int> min_hops(const NetworkGraph& g, NodeId source);

}  // namespace rail::network
