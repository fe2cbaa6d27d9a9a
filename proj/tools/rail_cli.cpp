// rail: run localization experiments, draw a single scenario, plot run series.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rail/experiment.hpp"
#include "rail/io.hpp"
#include "rail/localizer.hpp"
#include "rail/svg.hpp"

namespace fs = std::filesystem;
using namespace rail;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitGeneration = 2;

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("rail");
    spdlog::set_default_logger(logger);
    const char* env = std::getenv("RAIL_LOG");
    const std::string level = env ? env : "off";
    if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else {
        spdlog::set_level(spdlog::level::off);
    }
}

std::string summary_table(const experiment::ExperimentReport& report) {
    const auto& cfg = report.config;
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    auto block = [&](const char* label, bool mean) {
        os << label << '\n';
        os << std::setw(8) << "Nodes";
        for (auto a : cfg.algorithms) os << std::setw(14) << experiment::to_string(a);
        os << '\n';
        for (auto d : cfg.densities) {
            os << std::setw(8) << d;
            for (auto a : cfg.algorithms) {
                const auto& s = report.summary(a, d);
                os << std::setw(14) << (mean ? s.mean_error : s.std_error);
            }
            os << '\n';
        }
    };
    block("Mean Error (m)", true);
    block("Standard Deviation Error (m)", false);
    return os.str();
}

std::optional<experiment::ExperimentConfig> load_or_report(const std::string& path) {
    try {
        return io::load_config(path);
    } catch (const io::FormatError& e) {
        std::cerr << "rail: cannot load config: " << e.what() << '\n';
        return std::nullopt;
    }
}

int cmd_run(const std::string& config_path, const fs::path& out_dir,
            std::optional<std::uint64_t> seed) {
    auto cfg = load_or_report(config_path);
    if (!cfg) return kExitBadInput;
    if (seed) cfg->base_seed = *seed;
    spdlog::info("running {} densities x {} runs, base seed {}", cfg->densities.size(),
                 cfg->runs_per_density, cfg->base_seed);
    experiment::ExperimentReport report;
    try {
        report = experiment::run_experiment(*cfg);
    } catch (const network::GenerationFailed& e) {
        std::cerr << "rail: deployment generation failed: " << e.what() << '\n';
        return kExitGeneration;
    }
    for (const auto& r : report.runs) {
        spdlog::debug("density {} run {} seed {}: box misses {}, empty boxes {}", r.density,
                      r.run_index, r.seed, r.rail.box_misses, r.rail.empty_boxes);
    }
    fs::create_directories(out_dir);
    io::write_file_atomic(out_dir / "report.csv", io::report_csv(report));
    io::write_file_atomic(out_dir / "runs.csv", io::runs_csv(report));
    io::write_file_atomic(out_dir / "errors.csv", io::errors_csv(report));
    std::cout << summary_table(report);
    spdlog::info("wrote report.csv, runs.csv, errors.csv to {}", out_dir.string());
    return kExitOk;
}

int cmd_demo(const std::string& config_path, std::uint64_t seed,
             std::optional<network::NodeId> target, const fs::path& out_dir) {
    auto cfg = load_or_report(config_path);
    if (!cfg) return kExitBadInput;
    const auto density = cfg->densities.front();
    experiment::Scenario scenario;
    try {
        scenario = experiment::make_scenario(*cfg, density,
                                             experiment::run_seed(seed, density, 0));
    } catch (const network::GenerationFailed& e) {
        std::cerr << "rail: deployment generation failed: " << e.what() << '\n';
        return kExitGeneration;
    }
    const auto& dep = scenario.deployment;
    const auto unknown = dep.unknown_ids();
    const network::NodeId selected = target.value_or(unknown.front());
    if (selected >= dep.node_count() || dep.is_anchor(selected)) {
        std::cerr << "rail: --target " << selected << " is not an unknown node (valid: "
                  << unknown.front() << ".." << unknown.back() << ")\n";
        return kExitBadInput;
    }
    const auto estimates = localizer::localize_all(dep, scenario.graph, cfg->angle_sampling);
    const auto& chosen = *std::find_if(estimates.begin(), estimates.end(),
                                       [&](const auto& e) { return e.target == selected; });

    fs::create_directories(out_dir);
    io::write_file_atomic(out_dir / "scene.json",
                          io::scene_to_json(dep, estimates, selected).dump(2) + "\n");
    io::write_file_atomic(out_dir / "scene.svg", svg::scene_svg(dep, chosen));
    std::cout << "target " << selected << ": case " << localizer::to_string(chosen.diagnostics.case_fired)
              << ", error " << std::fixed << std::setprecision(4)
              << experiment::localization_error(dep.position(selected), chosen.position) << " m\n";
    return kExitOk;
}

int cmd_plot(const std::string& runs_path, const fs::path& out_dir) {
    std::vector<io::RunsRow> rows;
    try {
        rows = io::parse_runs_csv(io::read_file(runs_path));
    } catch (const io::FormatError& e) {
        std::cerr << "rail: " << e.what() << '\n';
        return kExitBadInput;
    }
    // density -> algorithm -> run_index -> value
    std::map<std::size_t, std::map<std::string, std::map<std::size_t, double>>> grouped;
    for (const auto& r : rows) grouped[r.density][r.algorithm][r.run_index] = r.run_mean_error;

    fs::create_directories(out_dir);
    for (const auto& [density, by_algorithm] : grouped) {
        std::vector<svg::Series> series;
        auto add = [&](const std::string& name, const std::map<std::size_t, double>& values) {
            svg::Series s{name, {}};
            for (const auto& [run, v] : values) s.values.push_back(v);
            series.push_back(std::move(s));
        };
        for (auto a : experiment::kAllAlgorithms) {
            const std::string name(experiment::to_string(a));
            if (auto it = by_algorithm.find(name); it != by_algorithm.end()) add(name, it->second);
        }
        for (const auto& [name, values] : by_algorithm) {
            bool known = false;
            for (auto a : experiment::kAllAlgorithms) known |= experiment::to_string(a) == name;
            if (!known) add(name, values);
        }
        const auto file = out_dir / ("errors_" + std::to_string(density) + ".svg");
        io::write_file_atomic(file, svg::line_chart_svg(std::to_string(density) + " unknown nodes",
                                                        "Run index", "Mean localization error (m)",
                                                        series));
        spdlog::info("wrote {}", file.string());
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();
    CLI::App app{"RSSI angle-inferred localization simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<network::NodeId> target;
    std::string runs_path;

    auto* run = app.add_subcommand("run", "Run the Monte Carlo experiment and write CSV reports");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--seed", seed, "Override base_seed");

    std::uint64_t demo_seed = 0;
    auto* demo = app.add_subcommand("demo", "Localize one seeded deployment and draw a target");
    demo->add_option("--config", config_path, "Experiment config (JSON)")->required();
    demo->add_option("--seed", demo_seed, "Scenario seed")->required();
    demo->add_option("--target", target, "Unknown node id to draw");
    demo->add_option("--out", out_dir, "Output directory");

    auto* plot = app.add_subcommand("plot", "Draw per-run mean error charts from runs.csv");
    plot->add_option("--runs", runs_path, "runs.csv produced by 'rail run'")->required();
    plot->add_option("--out", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitBadInput;
    }

    try {
        if (*run) return cmd_run(config_path, out_dir, seed);
        if (*demo) return cmd_demo(config_path, demo_seed, target, out_dir);
        if (*plot) return cmd_plot(runs_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "rail: " << e.what() << '\n';
        return kExitBadInput;
    }
    return kExitBadInput;
}
