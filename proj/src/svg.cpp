#include "rail/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace rail::svg {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Rounds a raw step up to 1, 2 or 5 times a power of ten.
double nice_step(double raw) {
    if (!(raw > 0.0)) return 1.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

constexpr std::array<const char*, 6> kPalette{"#d62728", "#1f77b4", "#2ca02c",
                                              "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string scene_svg(const network::Deployment& dep, const localizer::TargetEstimate& target) {
    constexpr double kScale = 12.0;
    constexpr double kMargin = 30.0;
    const double w = dep.width * kScale + 2 * kMargin;
    const double h = dep.height * kScale + 2 * kMargin;
    auto sx = [&](double x) { return kMargin + x * kScale; };
    auto sy = [&](double y) { return kMargin + (dep.height - y) * kScale; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
       << num(h) << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n";
    os << "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" "
          "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" "
          "fill=\"#1f77b4\"/></marker></defs>\n";
    os << "<rect class=\"area\" x=\"" << num(sx(0)) << "\" y=\"" << num(sy(dep.height))
       << "\" width=\"" << num(dep.width * kScale) << "\" height=\"" << num(dep.height * kScale)
       << "\" fill=\"white\" stroke=\"#999\"/>\n";

    for (network::NodeId i = 0; i < dep.node_count(); ++i) {
        if (dep.is_anchor(i) || i == target.target) continue;
        const auto& p = dep.nodes[i];
        os << "<circle class=\"node\" cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y))
           << "\" r=\"2\" fill=\"#bbb\"/>\n";
    }

    const auto& d = target.diagnostics;
    const auto& b = d.box;
    os << "<rect class=\"box\" x=\"" << num(sx(b.x_min)) << "\" y=\"" << num(sy(b.y_max))
       << "\" width=\"" << num((b.x_max - b.x_min) * kScale) << "\" height=\""
       << num((b.y_max - b.y_min) * kScale) << "\" fill=\"none\" stroke=\"#d62728\" "
       << "stroke-width=\"2\"/>\n";

    const double ray_len = std::hypot(dep.width, dep.height);
    for (const auto& r : d.rays) {
        const auto end = r.at(ray_len);
        os << "<line class=\"ray\" x1=\"" << num(sx(r.origin().x)) << "\" y1=\""
           << num(sy(r.origin().y)) << "\" x2=\"" << num(sx(end.x)) << "\" y2=\""
           << num(sy(end.y)) << "\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
           << "marker-end=\"url(#arrow)\"/>\n";
    }

    for (auto a : dep.anchor_ids) {
        const auto& p = dep.nodes[a];
        os << "<rect class=\"anchor\" x=\"" << num(sx(p.x) - 5) << "\" y=\"" << num(sy(p.y) - 5)
           << "\" width=\"10\" height=\"10\" fill=\"#000\"/>\n";
        os << "<text x=\"" << num(sx(p.x) + 7) << "\" y=\"" << num(sy(p.y) - 7)
           << "\" font-size=\"12\">A" << a << "</text>\n";
    }
    for (const auto& p : d.intersections) {
        os << "<circle class=\"intersection\" cx=\"" << num(sx(p.x)) << "\" cy=\"" << num(sy(p.y))
           << "\" r=\"5\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\"/>\n";
    }
    const auto& truth = dep.position(target.target);
    os << "<circle class=\"truth\" cx=\"" << num(sx(truth.x)) << "\" cy=\"" << num(sy(truth.y))
       << "\" r=\"4\" fill=\"#ff7f0e\"/>\n";
    const auto& e = target.position;
    os << "<path class=\"estimate\" transform=\"translate(" << num(sx(e.x)) << ',' << num(sy(e.y))
       << ")\" d=\"M0,-7 L2,-2 L7,-2 L3,1 L4,6 L0,3 L-4,6 L-3,1 L-7,-2 L-2,-2 z\" "
       << "fill=\"#2ca02c\"/>\n";
    os << "<text x=\"" << num(kMargin) << "\" y=\"18\" font-size=\"13\">target " << target.target
       << " (" << localizer::to_string(d.case_fired) << ")</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
    constexpr double kWidth = 800.0;
    constexpr double kHeight = 450.0;
    constexpr double kLeft = 70.0;
    constexpr double kRight = 150.0;
    constexpr double kTop = 40.0;
    constexpr double kBottom = 60.0;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    std::size_t n_points = 1;
    double y_max = 0.0;
    for (const auto& s : series) {
        n_points = std::max(n_points, s.values.size());
        for (double v : s.values) y_max = std::max(y_max, v);
    }
    const double y_step = nice_step(y_max > 0.0 ? y_max / 5.0 : 1.0);
    const double y_top = std::max(y_step, std::ceil(y_max / y_step) * y_step);
    const double x_span = n_points > 1 ? static_cast<double>(n_points - 1) : 1.0;
    auto px = [&](double i) {
        return n_points > 1 ? kLeft + i / x_span * plot_w : kLeft + plot_w / 2.0;
    };
    auto py = [&](double v) { return kTop + (1.0 - v / y_top) * plot_h; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
       << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"24\" font-size=\"16\" "
       << "text-anchor=\"middle\">" << escape(title) << "</text>\n";

    // Axes and grid.
    os << "<g class=\"axes\" stroke=\"#000\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\""
       << num(kLeft + plot_w) << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
    os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
       << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
    os << "</g>\n";
    for (double v = 0.0; v <= y_top + 1e-9; v += y_step) {
        os << "<line class=\"grid\" x1=\"" << num(kLeft) << "\" y1=\"" << num(py(v)) << "\" x2=\""
           << num(kLeft + plot_w) << "\" y2=\"" << num(py(v)) << "\" stroke=\"#eee\"/>\n";
        os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(v) + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
    const double x_step = n_points > 1 ? std::max(1.0, nice_step(x_span / 10.0)) : 1.0;
    for (double i = 0.0; i <= x_span + 1e-9 && (n_points > 1 || i == 0.0); i += x_step) {
        os << "<text x=\"" << num(px(i)) << "\" y=\"" << num(kTop + plot_h + 16)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << static_cast<long>(i) << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 16)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << num(kTop + plot_h / 2) << ") rotate(-90)\" "
       << "font-size=\"13\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % kPalette.size()];
        if (s.values.size() >= 2) {
            os << "<polyline class=\"series\" data-name=\"" << escape(s.name)
               << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.values.size(); ++i) {
                if (i) os << ' ';
                os << num(px(static_cast<double>(i))) << ',' << num(py(s.values[i]));
            }
            os << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            os << "<circle class=\"marker\" cx=\"" << num(px(static_cast<double>(i))) << "\" cy=\""
               << num(py(s.values[i])) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        }
        const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
        os << "<line class=\"legend\" x1=\"" << num(kLeft + plot_w + 15) << "\" y1=\"" << num(ly)
           << "\" x2=\"" << num(kLeft + plot_w + 40) << "\" y2=\"" << num(ly) << "\" stroke=\""
           << color << "\" stroke-width=\"3\"/>\n";
        os << "<text x=\"" << num(kLeft + plot_w + 46) << "\" y=\"" << num(ly + 4)
           << "\" font-size=\"12\">" << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace rail::svg
