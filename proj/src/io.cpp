#include "rail/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rail::io {

namespace {

std::string fixed4(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << v;
    return os.str();
}

json point_to_json(const geometry::Point& p) { return json::array({p.x, p.y}); }

json box_to_json(const geometry::AABox& b) {
    return {{"x_min", b.x_min}, {"x_max", b.x_max}, {"y_min", b.y_min}, {"y_max", b.y_max}};
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

json deployment_to_json(const network::Deployment& dep) {
    json nodes = json::array();
    for (const auto& p : dep.nodes) nodes.push_back(point_to_json(p));
    return {{"width", dep.width},
            {"height", dep.height},
            {"comm_range", dep.comm_range},
            {"anchor_ids", dep.anchor_ids},
            {"nodes", std::move(nodes)}};
}

network::Deployment deployment_from_json(const json& j) {
    try {
        network::Deployment dep;
        dep.width = j.at("width").get<double>();
        dep.height = j.at("height").get<double>();
        dep.comm_range = j.at("comm_range").get<double>();
        dep.anchor_ids = j.at("anchor_ids").get<std::vector<network::NodeId>>();
        for (const auto& n : j.at("nodes")) {
            if (!n.is_array() || n.size() != 2) throw FormatError("node must be [x, y]");
            dep.nodes.push_back({n[0].get<double>(), n[1].get<double>()});
        }
        for (auto a : dep.anchor_ids) {
            if (a >= dep.nodes.size()) throw FormatError("anchor id out of range");
        }
        return dep;
    } catch (const json::exception& e) {
        throw FormatError(std::string("invalid deployment JSON: ") + e.what());
    }
}

experiment::ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw FormatError("config must be a JSON object");
    experiment::ExperimentConfig cfg;
    if (j.contains("area")) {
        const auto& area = j.at("area");
        cfg.width = get_or(area, "width", cfg.width);
        cfg.height = get_or(area, "height", cfg.height);
    }
    cfg.densities = get_or(j, "densities", cfg.densities);
    cfg.n_anchors = get_or(j, "n_anchors", cfg.n_anchors);
    cfg.comm_range = get_or(j, "comm_range", cfg.comm_range);
    cfg.path_loss.sigma = get_or(j, "sigma", cfg.path_loss.sigma);
    if (j.contains("path_loss")) {
        const auto& pl = j.at("path_loss");
        cfg.path_loss.rssi_d0 = get_or(pl, "rssi_d0", cfg.path_loss.rssi_d0);
        cfg.path_loss.d0 = get_or(pl, "d0", cfg.path_loss.d0);
        cfg.path_loss.n_exp = get_or(pl, "n_exp", cfg.path_loss.n_exp);
    }
    cfg.runs_per_density = get_or(j, "runs_per_density", cfg.runs_per_density);
    cfg.base_seed = get_or(j, "base_seed", cfg.base_seed);
    if (j.contains("algorithms")) {
        cfg.algorithms.clear();
        for (const auto& name : get_or(j, "algorithms", std::vector<std::string>{})) {
            try {
                cfg.algorithms.push_back(experiment::parse_algorithm(name));
            } catch (const std::invalid_argument& e) {
                throw FormatError(e.what());
            }
        }
    }
    cfg.max_attempts = get_or(j, "max_attempts", cfg.max_attempts);
    cfg.min_anchor_area = get_or(j, "min_anchor_area", cfg.min_anchor_area);
    if (j.contains("angle_sampling")) {
        const auto mode = get_or(j, "angle_sampling", std::string{});
        if (mode == "deepest") {
            cfg.angle_sampling = localizer::AngleSampling::DeepestHop;
        } else if (mode == "mean") {
            cfg.angle_sampling = localizer::AngleSampling::MeanOfHops;
        } else {
            throw FormatError("angle_sampling must be \"deepest\" or \"mean\"");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid config: ") + e.what());
    }
    return cfg;
}

json config_to_json(const experiment::ExperimentConfig& cfg) {
    json algorithms = json::array();
    for (auto a : cfg.algorithms) algorithms.push_back(std::string(experiment::to_string(a)));
    return {{"area", {{"width", cfg.width}, {"height", cfg.height}}},
            {"densities", cfg.densities},
            {"n_anchors", cfg.n_anchors},
            {"comm_range", cfg.comm_range},
            {"sigma", cfg.path_loss.sigma},
            {"path_loss",
             {{"rssi_d0", cfg.path_loss.rssi_d0},
              {"d0", cfg.path_loss.d0},
              {"n_exp", cfg.path_loss.n_exp}}},
            {"runs_per_density", cfg.runs_per_density},
            {"base_seed", cfg.base_seed},
            {"algorithms", std::move(algorithms)},
            {"max_attempts", cfg.max_attempts},
            {"min_anchor_area", cfg.min_anchor_area},
            {"angle_sampling",
             cfg.angle_sampling == localizer::AngleSampling::DeepestHop ? "deepest" : "mean"}};
}

experiment::ExperimentConfig load_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

json ray_to_json(const geometry::Ray& r) {
    return {{"origin", point_to_json(r.origin())}, {"direction", {r.dx(), r.dy()}}};
}

json diagnostics_to_json(const localizer::RailDiagnostics& d) {
    json rays = json::array();
    for (const auto& r : d.rays) rays.push_back(ray_to_json(r));
    json intersections = json::array();
    for (const auto& p : d.intersections) intersections.push_back(point_to_json(p));
    return {{"case", localizer::to_string(d.case_fired)},
            {"box", box_to_json(d.box)},
            {"empty_box_fallback", d.empty_box_fallback},
            {"anchors", d.anchors},
            {"per_hop_error", d.per_hop_error},
            {"rays", std::move(rays)},
            {"intersections", std::move(intersections)}};
}

json scene_to_json(const network::Deployment& dep,
                   const std::vector<localizer::TargetEstimate>& estimates,
                   network::NodeId selected) {
    json scene = deployment_to_json(dep);
    scene["selected_target"] = selected;
    json targets = json::array();
    for (const auto& t : estimates) {
        targets.push_back({{"id", t.target},
                           {"true", point_to_json(dep.position(t.target))},
                           {"estimate", point_to_json(t.position)},
                           {"error_m", experiment::localization_error(dep.position(t.target),
                                                                      t.position)},
                           {"diagnostics", diagnostics_to_json(t.diagnostics)}});
    }
    scene["targets"] = std::move(targets);
    return scene;
}

std::string report_csv(const experiment::ExperimentReport& report) {
    std::ostringstream os;
    os << "algorithm,density,mean_error_m,std_error_m\n";
    for (const auto& s : report.summaries) {
        os << experiment::to_string(s.algorithm) << ',' << s.density << ',' << fixed4(s.mean_error)
           << ',' << fixed4(s.std_error) << '\n';
    }
    return os.str();
}

std::string runs_csv(const experiment::ExperimentReport& report) {
    std::ostringstream os;
    os << "algorithm,density,run_index,seed,run_mean_error_m\n";
    for (auto algorithm : experiment::kAllAlgorithms) {
        for (const auto& r : report.runs) {
            auto it = r.results.find(algorithm);
            if (it == r.results.end()) continue;
            os << experiment::to_string(algorithm) << ',' << r.density << ',' << r.run_index << ','
               << r.seed << ',' << fixed4(it->second.mean_error) << '\n';
        }
    }
    return os.str();
}

std::string errors_csv(const experiment::ExperimentReport& report) {
    std::ostringstream os;
    os << "algorithm,density,run_index,node_id,true_x,true_y,est_x,est_y,error_m\n";
    for (auto algorithm : experiment::kAllAlgorithms) {
        for (const auto& r : report.runs) {
            auto it = r.results.find(algorithm);
            if (it == r.results.end()) continue;
            const auto& run = it->second;
            for (std::size_t i = 0; i < r.node_ids.size(); ++i) {
                os << experiment::to_string(algorithm) << ',' << r.density << ',' << r.run_index
                   << ',' << r.node_ids[i] << ',' << fixed4(r.truth[i].x) << ','
                   << fixed4(r.truth[i].y) << ',' << fixed4(run.estimates[i].x) << ','
                   << fixed4(run.estimates[i].y) << ',' << fixed4(run.errors[i]) << '\n';
            }
        }
    }
    return os.str();
}

std::vector<RunsRow> parse_runs_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw FormatError("runs.csv is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "algorithm,density,run_index,seed,run_mean_error_m") {
        throw FormatError("runs.csv: unexpected header '" + line + "'");
    }
    std::vector<RunsRow> rows;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 5 || f[0].empty()) {
            throw FormatError("runs.csv line " + std::to_string(line_no) + ": expected 5 fields");
        }
        try {
            std::size_t used = 0;
            RunsRow row;
            row.algorithm = f[0];
            row.density = std::stoull(f[1], &used);
            if (used != f[1].size()) throw std::invalid_argument("density");
            row.run_index = std::stoull(f[2], &used);
            if (used != f[2].size()) throw std::invalid_argument("run_index");
            row.seed = std::stoull(f[3], &used);
            if (used != f[3].size()) throw std::invalid_argument("seed");
            row.run_mean_error = std::stod(f[4], &used);
            if (used != f[4].size()) throw std::invalid_argument("run_mean_error_m");
            rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            throw FormatError("runs.csv line " + std::to_string(line_no) + ": bad field (" +
                              e.what() + ")");
        }
    }
    if (rows.empty()) throw FormatError("runs.csv has no data rows");
    return rows;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rail::io
