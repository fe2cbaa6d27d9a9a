#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rail/network.hpp"
#include "rail/radio.hpp"
#include "rail/rng.hpp"

using namespace rail::network;
using rail::Rng;
using rail::radio::PathLossModel;

namespace {

Deployment line_deployment(std::vector<Point> nodes, double range) {
    Deployment dep;
    dep.width = 50;
    dep.height = 50;
    dep.comm_range = range;
    dep.nodes = std::move(nodes);
    return dep;
}

double triangle_area(const Point& a, const Point& b, const Point& c) {
    return std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y)) / 2.0;
}

}  // namespace

TEST_SUITE("deployment") {

TEST_CASE("500-node deployment satisfies every invariant") {
    DeploymentConfig cfg;
    cfg.n_unknown = 500;
    cfg.seed = 1;
    const auto dep = generate_deployment(cfg);
    CHECK(dep.node_count() == 503);
    CHECK(dep.anchor_ids == std::vector<NodeId>{0, 1, 2});
    CHECK_FALSE(check_deployment(dep, cfg.min_anchor_area).has_value());
    for (const auto& p : dep.nodes) {
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 50.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 50.0);
    }
    const auto& a = dep.nodes;
    CHECK(triangle_area(a[0], a[1], a[2]) > 25.0);
    CHECK(distance(a[0], a[1]) > 10.0);
    CHECK(distance(a[0], a[2]) > 10.0);
    CHECK(distance(a[1], a[2]) > 10.0);
    CHECK(dep.unknown_ids().size() == 500);
    CHECK(dep.unknown_ids().front() == 3);
}

TEST_CASE("invariants hold across seeds and anchor counts") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        DeploymentConfig cfg;
        cfg.n_unknown = 100;
        cfg.n_anchors = 3 + seed % 3;
        cfg.seed = seed;
        const auto dep = generate_deployment(cfg);
        CHECK_FALSE(check_deployment(dep, cfg.min_anchor_area).has_value());
        CHECK(dep.anchor_ids.size() == cfg.n_anchors);
    }
}

TEST_CASE("unsatisfiable anchor spacing fails") {
    DeploymentConfig cfg;
    cfg.n_unknown = 0;
    cfg.comm_range = 80;
    cfg.seed = 1;
    CHECK_THROWS_AS(generate_deployment(cfg), GenerationFailed);
}

TEST_CASE("same seed gives the same deployment") {
    DeploymentConfig cfg;
    cfg.seed = 77;
    const auto a = generate_deployment(cfg);
    const auto b = generate_deployment(cfg);
    CHECK(a.nodes == b.nodes);
    cfg.seed = 78;
    CHECK(generate_deployment(cfg).nodes != a.nodes);
}

TEST_CASE("check_deployment reports violations") {
    auto dep = line_deployment({{0, 0}, {20, 0}, {0, 20}, {5, 5}}, 10);
    dep.anchor_ids = {0, 1, 2};
    // Node 3 reaches only anchor 0; anchors 1 and 2 are isolated.
    CHECK(check_deployment(dep, 25).has_value());

    dep = line_deployment({{0, 0}, {20, 0}, {0, 20}, {5, 5}, {12, 2}, {2, 12}}, 10);
    dep.anchor_ids = {0, 1, 2};
    CHECK_FALSE(check_deployment(dep, 25).has_value());

    dep.nodes[2] = {40, 0};  // collinear anchors
    CHECK(check_deployment(dep, 25).has_value());
}

}

TEST_SUITE("graph") {

TEST_CASE("edges carry the exact distance without noise") {
    const auto dep = line_deployment({{0, 0}, {5, 0}}, 10);
    Rng noise(1);
    const auto g = build_graph(dep, PathLossModel{}, noise);
    REQUIRE(g.edge(0, 1).has_value());
    CHECK(*g.edge(0, 1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(*g.edge(1, 0) == *g.edge(0, 1));
}

TEST_CASE("no edge beyond range") {
    const auto dep = line_deployment({{0, 0}, {10.01, 0}}, 10);
    Rng noise(1);
    CHECK(build_graph(dep, PathLossModel{}, noise).edge_count() == 0);
}

TEST_CASE("collinear chain links only neighbours") {
    const auto dep = line_deployment({{0, 0}, {6, 0}, {12, 0}}, 10);
    Rng noise(1);
    const auto g = build_graph(dep, PathLossModel{}, noise);
    CHECK(g.edge_count() == 2);
    CHECK(g.edge(0, 1).has_value());
    CHECK(g.edge(1, 2).has_value());
    CHECK_FALSE(g.edge(0, 2).has_value());
}

TEST_CASE("noise perturbs edges and stays symmetric") {
    const auto dep = line_deployment({{0, 0}, {5, 0}, {5, 5}}, 10);
    PathLossModel m;
    m.sigma = 2.0;
    Rng noise(3);
    const auto g = build_graph(dep, m, noise);
    REQUIRE(g.edge(0, 1).has_value());
    CHECK(*g.edge(0, 1) != doctest::Approx(5.0));
    CHECK(*g.edge(0, 1) > 0.0);
    CHECK(*g.edge(1, 0) == *g.edge(0, 1));
}

TEST_CASE("add_edge rejects bad input") {
    NetworkGraph g(3);
    CHECK_THROWS_AS(g.add_edge(0, 0, 1.0), std::invalid_argument);
    g.add_edge(0, 1, 1.0);
    CHECK_THROWS_AS(g.add_edge(1, 0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(1, 2, 0.0), std::invalid_argument);
}

}

TEST_SUITE("shortest paths") {

TEST_CASE("path graph") {
    NetworkGraph g(3);
    g.add_edge(0, 1, 4);
    g.add_edge(1, 2, 3);
    const std::array<NodeId, 1> targets{2};
    const auto r = shortest_ranging(g, 0, targets).front();
    CHECK(r.shortest_distance == 7.0);
    CHECK(r.hop_count == 2);
    CHECK(r.path == std::vector<NodeId>{0, 1, 2});
    CHECK(r.anchor_id == 0);
    CHECK(r.target_id == 2);
    CHECK(min_hops(g, 0)[2] == 2);
    CHECK(min_hops(g, 0)[1] == 1);
}

TEST_CASE("direct edge beats the detour") {
    NetworkGraph g(3);
    g.add_edge(0, 1, 5);
    g.add_edge(1, 2, 5);
    g.add_edge(0, 2, 9);
    const ShortestPathTree t(g, 0);
    CHECK(t.distance(2) == 9.0);
    CHECK(t.hops(2) == 1);
    CHECK(t.path_to(2) == std::vector<NodeId>{0, 2});
}

TEST_CASE("ties go to the smaller predecessor") {
    // 0-1-3 and 0-2-3 both cost 2.
    NetworkGraph g(4);
    g.add_edge(0, 2, 1);
    g.add_edge(2, 3, 1);
    g.add_edge(0, 1, 1);
    g.add_edge(1, 3, 1);
    CHECK(ShortestPathTree(g, 0).path_to(3) == std::vector<NodeId>{0, 1, 3});
    CHECK(ShortestPathTree(g, 3).path_to(0) == std::vector<NodeId>{3, 1, 0});
}

TEST_CASE("unreachable nodes") {
    NetworkGraph g(3);
    g.add_edge(0, 1, 1);
    const ShortestPathTree t(g, 0);
    CHECK_FALSE(t.reachable(2));
    CHECK(t.reachable(0));
    CHECK_THROWS_AS(t.path_to(2), Unreachable);
    CHECK_THROWS_AS(min_hops(g, 0), Unreachable);
}

TEST_CASE("Dijkstra matches exhaustive simple-path enumeration") {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<std::size_t> size(2, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = size(gen);
        const auto g = oracle::random_connected_graph(gen, n, 4, 0.35);
        for (NodeId s = 0; s < n; ++s) {
            const ShortestPathTree tree(g, s);
            const auto dist = oracle::all_simple_paths_distance(g, s);
            const auto hops = oracle::tie_broken_hops(g, s, dist);
            for (NodeId v = 0; v < n; ++v) {
                CHECK(tree.distance(v) == doctest::Approx(dist[v]).epsilon(1e-12));
                CHECK(tree.hops(v) == hops[v]);
                const auto path = tree.path_to(v);
                CHECK(path.front() == s);
                CHECK(path.back() == v);
                CHECK(static_cast<int>(path.size()) - 1 == tree.hops(v));
            }
        }
    }
}

TEST_CASE("Dijkstra matches Bellman-Ford on real-valued weights") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 30;
        NetworkGraph g(n);
        std::uniform_real_distribution<double> w(0.1, 10.0);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        for (NodeId v = 1; v < n; ++v) g.add_edge(v - 1, v, w(gen));
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = u + 2; v < n; ++v) {
                if (coin(gen) < 0.15) g.add_edge(u, v, w(gen));
            }
        }
        const ShortestPathTree tree(g, 0);
        const auto bf = oracle::bellman_ford(g, 0);
        for (NodeId v = 0; v < n; ++v) CHECK(tree.distance(v) == doctest::Approx(bf[v]));
    }
}

TEST_CASE("min_hops matches a level-set BFS") {
    std::mt19937_64 gen(17);
    std::uniform_int_distribution<std::size_t> size(2, 10);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = size(gen);
        const auto g = oracle::random_connected_graph(gen, n, 9, 0.3);
        for (NodeId s = 0; s < n; ++s) CHECK(min_hops(g, s) == oracle::bfs_levels(g, s));
    }
}

}
