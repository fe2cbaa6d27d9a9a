#include "rail/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "rail/baselines.hpp"
#include "rail/localizer.hpp"
#include "rail/rng.hpp"

namespace rail::experiment {

std::string_view to_string(AlgorithmId id) {
    switch (id) {
        case AlgorithmId::Rail: return "RAIL";
        case AlgorithmId::MinMax: return "MinMax";
        case AlgorithmId::RssiDvHop: return "RssiDvHop";
    }
    return "?";
}

AlgorithmId parse_algorithm(std::string_view name) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return out;
    };
    const auto wanted = lower(name);
    for (auto id : kAllAlgorithms) {
        if (lower(to_string(id)) == wanted) return id;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    if (!(width > 0.0 && height > 0.0)) throw std::invalid_argument("area must be positive");
    if (densities.empty()) throw std::invalid_argument("densities must not be empty");
    if (n_anchors < 3) throw std::invalid_argument("n_anchors must be >= 3");
    if (!(comm_range > 0.0)) throw std::invalid_argument("comm_range must be positive");
    if (runs_per_density < 1) throw std::invalid_argument("runs_per_density must be >= 1");
    if (algorithms.empty()) throw std::invalid_argument("algorithms must not be empty");
    path_loss.validate();
}

bool ExperimentConfig::runs(AlgorithmId id) const {
    return std::find(algorithms.begin(), algorithms.end(), id) != algorithms.end();
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t density, std::size_t run_index) {
    return base_seed ^ mix64((static_cast<std::uint64_t>(density) << 32) ^
                             static_cast<std::uint64_t>(run_index));
}

double localization_error(const Point& truth, const Point& estimate) {
    return std::sqrt((truth.x - estimate.x) * (truth.x - estimate.x) +
                     (truth.y - estimate.y) * (truth.y - estimate.y));
}

const Summary& ExperimentReport::summary(AlgorithmId algorithm, std::size_t density) const {
    for (const auto& s : summaries) {
        if (s.algorithm == algorithm && s.density == density) return s;
    }
    throw std::out_of_range("no summary for " + std::string(to_string(algorithm)) + "/" +
                            std::to_string(density));
}

RunGenerationFailed::RunGenerationFailed(std::size_t density, std::size_t run_index,
                                         const std::string& what)
    : network::GenerationFailed("density " + std::to_string(density) + ", run " +
                                std::to_string(run_index) + ": " + what),
      density(density),
      run_index(run_index) {}

Scenario make_scenario(const ExperimentConfig& cfg, std::size_t density, std::uint64_t seed) {
    const Rng root(seed);
    network::DeploymentConfig dcfg;
    dcfg.width = cfg.width;
    dcfg.height = cfg.height;
    dcfg.n_unknown = density;
    dcfg.n_anchors = cfg.n_anchors;
    dcfg.comm_range = cfg.comm_range;
    dcfg.seed = root.derive_seed("deployment");
    dcfg.max_attempts = cfg.max_attempts;
    dcfg.min_anchor_area = cfg.min_anchor_area;

    Scenario out;
    out.deployment = network::generate_deployment(dcfg);
    Rng noise = root.fork("noise");
    out.graph = network::build_graph(out.deployment, cfg.path_loss, noise);
    return out;
}

RunRecord run_single(const ExperimentConfig& cfg, std::size_t density, std::size_t run_index) {
    RunRecord rec;
    rec.density = density;
    rec.run_index = run_index;
    rec.seed = run_seed(cfg.base_seed, density, run_index);
    Scenario scenario;
    try {
        scenario = make_scenario(cfg, density, rec.seed);
    } catch (const network::GenerationFailed& e) {
        throw RunGenerationFailed(density, run_index, e.what());
    }
    const auto& dep = scenario.deployment;
    const auto& graph = scenario.graph;
    const localizer::Localizer loc(dep, graph, cfg.angle_sampling);

    std::map<NodeId, std::vector<int>> hops;
    if (cfg.runs(AlgorithmId::MinMax)) {
        for (NodeId a : dep.anchor_ids) hops.emplace(a, network::min_hops(graph, a));
    }

    rec.node_ids = dep.unknown_ids();
    for (auto id : cfg.algorithms) rec.results[id];
    for (NodeId target : rec.node_ids) {
        const Point& truth = dep.position(target);
        rec.truth.push_back(truth);
        const auto ids = loc.select_anchors(target);
        for (auto& [algorithm, run] : rec.results) {
            Point estimate;
            switch (algorithm) {
                case AlgorithmId::Rail: {
                    const auto r = loc.locate(target);
                    estimate = r.position;
                    const auto& d = r.diagnostics;
                    ++rec.rail.cases[static_cast<std::size_t>(d.case_fired)];
                    if (d.empty_box_fallback) ++rec.rail.empty_boxes;
                    if (!geometry::contains(d.box, truth)) ++rec.rail.box_misses;
                    break;
                }
                case AlgorithmId::MinMax: {
                    std::array<baselines::AnchorHops, 3> in;
                    for (int i = 0; i < 3; ++i) {
                        in[i] = {dep.position(ids[i]), hops.at(ids[i])[target]};
                    }
                    estimate = baselines::min_max(in, cfg.comm_range).position;
                    break;
                }
                case AlgorithmId::RssiDvHop: {
                    std::array<baselines::AnchorRange, 3> in;
                    for (int i = 0; i < 3; ++i) {
                        in[i] = {dep.position(ids[i]), loc.anchor_tree(ids[i]).distance(target)};
                    }
                    estimate = baselines::rssi_dv_hop(in).position;
                    break;
                }
            }
            run.estimates.push_back(estimate);
            run.errors.push_back(localization_error(truth, estimate));
        }
    }
    for (auto& [algorithm, run] : rec.results) {
        double sum = 0.0;
        for (double e : run.errors) sum += e;
        run.mean_error = run.errors.empty() ? 0.0 : sum / static_cast<double>(run.errors.size());
    }
    return rec;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, Execution execution) {
    cfg.validate();
    struct Job {
        std::size_t density;
        std::size_t run_index;
    };
    std::vector<Job> jobs;
    for (auto d : cfg.densities) {
        for (std::size_t r = 0; r < cfg.runs_per_density; ++r) jobs.push_back({d, r});
    }
    std::vector<RunRecord> records(jobs.size());

    if (execution == Execution::Serial) {
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            records[i] = run_single(cfg, jobs[i].density, jobs[i].run_index);
        }
    } else {
        const auto n = static_cast<std::ptrdiff_t>(jobs.size());
        std::vector<std::exception_ptr> failures(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            try {
                records[i] = run_single(cfg, jobs[i].density, jobs[i].run_index);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
        // Report the same failure the serial path would hit first.
        for (const auto& f : failures) {
            if (f) std::rethrow_exception(f);
        }
    }
    return aggregate(std::move(records), cfg);
}

ExperimentReport aggregate(std::vector<RunRecord> records, const ExperimentConfig& cfg) {
    if (records.empty()) throw std::invalid_argument("aggregate: no run records");
    std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        return a.density != b.density ? a.density < b.density : a.run_index < b.run_index;
    });

    std::vector<std::size_t> densities;
    for (const auto& r : records) {
        if (densities.empty() || densities.back() != r.density) densities.push_back(r.density);
    }

    ExperimentReport report;
    report.config = cfg;
    for (auto algorithm : kAllAlgorithms) {
        for (auto density : densities) {
            double sum = 0.0;
            std::size_t count = 0;
            for (const auto& r : records) {
                if (r.density != density) continue;
                auto it = r.results.find(algorithm);
                if (it == r.results.end()) continue;
                for (double e : it->second.errors) sum += e;
                count += it->second.errors.size();
            }
            if (count == 0) continue;
            const double mean = sum / static_cast<double>(count);
            double sq = 0.0;
            for (const auto& r : records) {
                if (r.density != density) continue;
                auto it = r.results.find(algorithm);
                if (it == r.results.end()) continue;
                for (double e : it->second.errors) sq += (e - mean) * (e - mean);
            }
            report.summaries.push_back(
                {algorithm, density, mean, std::sqrt(sq / static_cast<double>(count)), count});
        }
    }
    report.runs = std::move(records);
    return report;
}

}  // namespace rail::experiment
