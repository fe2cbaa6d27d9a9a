#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rail/geometry.hpp"
#include "rail/localizer.hpp"
#include "rail/network.hpp"
#include "rail/radio.hpp"

namespace rail::experiment {

using geometry::Point;
using network::NodeId;

enum class AlgorithmId { Rail, MinMax, RssiDvHop };

inline constexpr std::array<AlgorithmId, 3> kAllAlgorithms{AlgorithmId::Rail, AlgorithmId::MinMax,
                                                           AlgorithmId::RssiDvHop};

std::string_view to_string(AlgorithmId id);
/// Accepts "RAIL", "MinMax", "RssiDvHop" (case-insensitive). Throws std::invalid_argument.
AlgorithmId parse_algorithm(std::string_view name);

struct ExperimentConfig {
    double width = 50.0;
    double height = 50.0;
    std::vector<std::size_t> densities{100, 200, 500};
    std::size_t n_anchors = 3;
    double comm_range = 10.0;
    radio::PathLossModel path_loss;  // sigma lives here
    std::size_t runs_per_density = 50;
    std::uint64_t base_seed = 20250101;
    std::vector<AlgorithmId> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
    std::size_t max_attempts = 1000;
    double min_anchor_area = 25.0;
    localizer::AngleSampling angle_sampling = localizer::AngleSampling::DeepestHop;

    /// Throws std::invalid_argument.
    void validate() const;
    bool runs(AlgorithmId id) const;
};

/// base_seed XOR a hash of (density, run_index).
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t density, std::size_t run_index);

/// Euclidean distance between true and estimated coordinates.
double localization_error(const Point& truth, const Point& estimate);

struct AlgorithmRun {
    std::vector<Point> estimates;  // aligned with RunRecord::node_ids
    std::vector<double> errors;
    double mean_error = 0.0;
};

struct RailRunStats {
    std::array<std::size_t, 4> cases{};  // indexed by localizer::LocationCase
    std::size_t box_misses = 0;          // truth outside the (resolved) box
    std::size_t empty_boxes = 0;
};

struct RunRecord {
    std::size_t density = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    std::vector<NodeId> node_ids;
    std::vector<Point> truth;
    std::map<AlgorithmId, AlgorithmRun> results;
    RailRunStats rail;
};

struct Summary {
    AlgorithmId algorithm;
    std::size_t density;
    double mean_error;
    double std_error;  // population std over pooled per-node errors
    std::size_t samples;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<Summary> summaries;  // ordered by (algorithm, density)
    std::vector<RunRecord> runs;     // ordered by (density, run_index)

    const Summary& summary(AlgorithmId algorithm, std::size_t density) const;
};

/// Thrown when a run cannot produce a deployment; carries its coordinates.
struct RunGenerationFailed : network::GenerationFailed {
    RunGenerationFailed(std::size_t density, std::size_t run_index, const std::string& what);
    std::size_t density;
    std::size_t run_index;
};

/// Deployment and graph of one seeded world.
struct Scenario {
    network::Deployment deployment;
    network::NetworkGraph graph{0};
};

/// Deployment sampled from the run seed's "deployment" stream and ranged with
/// its "noise" stream. Throws network::GenerationFailed.
Scenario make_scenario(const ExperimentConfig& cfg, std::size_t density, std::uint64_t seed);

/// One seeded run: deployment, graph and every configured algorithm on every
/// unknown node, all sharing the same deployment and graph.
RunRecord run_single(const ExperimentConfig& cfg, std::size_t density, std::size_t run_index);

enum class Execution { Serial, Parallel };

/// Bit-identical for both execution modes.
ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                Execution execution = Execution::Parallel);

/// Pooled mean/std per (algorithm, density). Throws std::invalid_argument on
/// empty input.
ExperimentReport aggregate(std::vector<RunRecord> records, const ExperimentConfig& cfg);

}  // namespace rail::experiment
