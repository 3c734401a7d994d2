#pragma once

// Minimal line charts rendered straight to SVG text. Fixed canvas, palette
// and number formatting, so identical data gives identical bytes.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "idtrack/harness.hpp"

namespace idtrack::svg {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct Chart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    double y_min = 0.0;
    double y_max = 1.0;
};

namespace detail {

inline constexpr int kWidth = 720;
inline constexpr int kHeight = 440;
inline constexpr int kLeft = 70;
inline constexpr int kRight = 170;
inline constexpr int kTop = 40;
inline constexpr int kBottom = 60;

inline constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                                           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939"};

inline std::string num(double v) {
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, r.ptr);
}

inline std::string escape(const std::string& s) {
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

inline std::string tick_label(double v) {
    std::string s = format_fixed(v, 2);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

}  // namespace detail

inline std::string render(const Chart& chart) {
    using namespace detail;
    double x_min = 0.0, x_max = 1.0;
    bool first = true;
    for (const auto& s : chart.series)
        for (const auto& [x, y] : s.points) {
            x_min = first ? x : std::min(x_min, x);
            x_max = first ? x : std::max(x_max, x);
            first = false;
        }
    if (x_max <= x_min) x_max = x_min + 1.0;
    const double y_lo = chart.y_min;
    const double y_hi = chart.y_max > chart.y_min ? chart.y_max : chart.y_min + 1.0;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(chart.title)
       << "</text>\n";

    for (int k = 0; k <= 5; ++k) {
        const double fy = y_lo + (y_hi - y_lo) * k / 5.0;
        const double fx = x_min + (x_max - x_min) * k / 5.0;
        os << "<line x1=\"" << kLeft << "\" y1=\"" << num(sy(fy)) << "\" x2=\"" << kLeft + pw << "\" y2=\""
           << num(sy(fy)) << "\" stroke=\"#e0e0e0\"/>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(sy(fy) + 4) << "\" text-anchor=\"end\">"
           << tick_label(fy) << "</text>\n";
        os << "<text x=\"" << num(sx(fx)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
           << tick_label(fx) << "</text>\n";
    }
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">"
       << escape(chart.x_label) << "</text>\n";
    os << "<text x=\"18\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << num(kTop + ph / 2) << ")\">" << escape(chart.y_label) << "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const Series& s = chart.series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        std::vector<std::pair<double, double>> pts = s.points;
        std::sort(pts.begin(), pts.end());
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t p = 0; p < pts.size(); ++p)
            os << (p ? " " : "") << num(sx(pts[p].first)) << ',' << num(sy(pts[p].second));
        os << "\"/>\n";
        for (const auto& [x, y] : pts)
            os << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"2.5\" fill=\"" << color
               << "\"/>\n";
        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << kLeft + pw + 32
           << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << num(ly) << "\">" << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

/// Accuracy against rotation SD, one series per (scene, translation band).
inline Chart rotation_chart(const std::vector<BandSummary>& rows) {
    Chart c{"Accuracy vs rotation noise SD", "rotation SD (deg)", "mean accuracy", {}, 0.0, 1.0};
    for (const auto& r : rows) {
        const std::string name = r.scene + " " + to_string(r.band);
        auto it = std::find_if(c.series.begin(), c.series.end(), [&](const Series& s) { return s.name == name; });
        if (it == c.series.end()) {
            c.series.push_back({name, {}});
            it = std::prev(c.series.end());
        }
        it->points.push_back({r.b, r.accuracy});
    }
    return c;
}

/// Accuracy against translation SD, one series per scene.
inline Chart translation_chart(const std::vector<TranslationSummary>& rows) {
    Chart c{"Accuracy vs translation noise SD", "translation SD (m)", "mean accuracy", {}, 0.0, 1.0};
    for (const auto& r : rows) {
        auto it = std::find_if(c.series.begin(), c.series.end(), [&](const Series& s) { return s.name == r.scene; });
        if (it == c.series.end()) {
            c.series.push_back({r.scene, {}});
            it = std::prev(c.series.end());
        }
        it->points.push_back({r.a, r.accuracy});
    }
    return c;
}

/// Accuracy and solve time against threshold; time is relative to the
/// unpruned (threshold 1) time of the same scene.
inline Chart threshold_chart(const std::vector<ThresholdSummary>& rows) {
    Chart c{"Accuracy and time cost vs threshold", "threshold", "accuracy / relative time", {}, 0.0, 1.0};
    std::map<std::string, double> full_time;
    for (const auto& r : rows)
        if (r.threshold == 1.0) full_time[r.scene] = r.solve_ms;
    std::map<std::string, std::pair<Series, Series>> by_scene;
    for (const auto& r : rows) {
        auto& [acc, time] = by_scene[r.scene];
        acc.name = r.scene + " accuracy";
        time.name = r.scene + " time";
        acc.points.push_back({r.threshold, r.accuracy});
        const double ref = full_time.contains(r.scene) ? full_time[r.scene] : 0.0;
        if (ref > 0.0) time.points.push_back({r.threshold, r.solve_ms / ref});
    }
    for (auto& [scene, pair] : by_scene) {
        for (const auto& p : pair.second.points) c.y_max = std::max(c.y_max, std::ceil(p.second * 10.0) / 10.0);
        c.series.push_back(std::move(pair.first));
        c.series.push_back(std::move(pair.second));
    }
    return c;
}

}  // namespace idtrack::svg
