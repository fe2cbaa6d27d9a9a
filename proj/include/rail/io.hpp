#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rail/experiment.hpp"
#include "rail/localizer.hpp"
#include "rail/network.hpp"

namespace rail::io {

using nlohmann::json;

/// Malformed or unreadable input (config, deployment, CSV).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Deployment: {"width", "height", "comm_range", "anchor_ids": [...],
//              "nodes": [[x, y], ...]}. Extra keys are ignored on load.
json deployment_to_json(const network::Deployment& dep);
network::Deployment deployment_from_json(const json& j);

/// Every key is optional and falls back to the ExperimentConfig default.
experiment::ExperimentConfig config_from_json(const json& j);
json config_to_json(const experiment::ExperimentConfig& cfg);
experiment::ExperimentConfig load_config(const std::filesystem::path& path);

json ray_to_json(const geometry::Ray& r);
json diagnostics_to_json(const localizer::RailDiagnostics& d);

/// Deployment keys plus "selected_target" and per-target "targets" entries.
json scene_to_json(const network::Deployment& dep,
                   const std::vector<localizer::TargetEstimate>& estimates,
                   network::NodeId selected);

std::string report_csv(const experiment::ExperimentReport& report);
std::string runs_csv(const experiment::ExperimentReport& report);
std::string errors_csv(const experiment::ExperimentReport& report);

struct RunsRow {
    std::string algorithm;
    std::size_t density = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    double run_mean_error = 0.0;
};

/// Parses runs.csv. Throws FormatError on a bad header, bad row or no rows.
std::vector<RunsRow> parse_runs_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace rail::io
