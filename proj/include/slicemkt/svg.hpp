#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "slicemkt/errors.hpp"

namespace slicemkt::svg {

/// Parsed CSV table (header + numeric-or-token cells).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

inline Table read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("svg: cannot read " + path);
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

namespace detail_svg {

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

}  // namespace detail_svg

/// Line plot of y(x), one polyline per group label.
inline void write_line_svg(const std::string& path, const Table& t, const std::string& xcol,
                           const std::string& ycol,
                           const std::vector<std::string>& group_cols) {
    const int xi = t.column(xcol);
    const int yi = t.column(ycol);
    if (xi < 0 || yi < 0) throw InvalidConfig("svg: missing column " + xcol + "/" + ycol);

    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& row : t.rows) {
        std::string key;
        for (const std::string& g : group_cols) {
            const int gi = t.column(g);
            if (gi >= 0) key += g + "=" + row[static_cast<std::size_t>(gi)] + " ";
        }
        const double x = std::strtod(row[static_cast<std::size_t>(xi)].c_str(), nullptr);
        const double y = std::strtod(row[static_cast<std::size_t>(yi)].c_str(), nullptr);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        series[key].push_back({x, y});
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (series.empty()) throw InvalidConfig("svg: no finite data to plot");
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    const double W = 720, H = 480, L = 70, R = 20, T = 30, B = 50;
    const auto X = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    const auto Y = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ofstream out(path);
    if (!out) throw InvalidConfig("svg: cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
        << "' stroke='black'/>\n";
    out << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
        << "' stroke='black'/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        out << "<text x='" << X(xv) << "' y='" << H - B + 18
            << "' font-size='11' text-anchor='middle'>" << xv << "</text>\n";
        out << "<text x='" << L - 6 << "' y='" << Y(yv) + 4
            << "' font-size='11' text-anchor='end'>" << yv << "</text>\n";
    }
    out << "<text x='" << (L + W - R) / 2 << "' y='" << H - 12
        << "' font-size='13' text-anchor='middle'>" << xcol << "</text>\n";
    out << "<text x='" << (L + W - R) / 2 << "' y='" << 18
        << "' font-size='13' text-anchor='middle'>" << ycol << "</text>\n";

    std::size_t idx = 0;
    double legend_y = T + 10;
    for (const auto& [key, pts] : series) {
        std::vector<std::pair<double, double>> sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        out << "<polyline fill='none' stroke='" << detail_svg::palette(idx)
            << "' stroke-width='1.5' points='";
        for (const auto& [x, y] : sorted) out << X(x) << "," << Y(y) << " ";
        out << "'/>\n";
        if (!key.empty()) {
            out << "<text x='" << W - R - 180 << "' y='" << legend_y
                << "' font-size='11' fill='" << detail_svg::palette(idx) << "'>" << key
                << "</text>\n";
            legend_y += 14;
        }
        ++idx;
    }
    out << "</svg>\n";
}

/// Heat map of the region-map CSV: one colored cell per (p2, p1) grid point.
inline void write_region_svg(const std::string& path, const Table& t) {
    const int i1 = t.column("p1"), i2 = t.column("p2"), ic = t.column("case");
    if (i1 < 0 || i2 < 0 || ic < 0) throw InvalidConfig("svg: not a regionmap CSV");
    std::vector<double> p1s, p2s;
    for (const auto& row : t.rows) {
        p1s.push_back(std::strtod(row[static_cast<std::size_t>(i1)].c_str(), nullptr));
        p2s.push_back(std::strtod(row[static_cast<std::size_t>(i2)].c_str(), nullptr));
    }
    std::vector<double> u1 = p1s, u2 = p2s;
    std::sort(u1.begin(), u1.end());
    u1.erase(std::unique(u1.begin(), u1.end()), u1.end());
    std::sort(u2.begin(), u2.end());
    u2.erase(std::unique(u2.begin(), u2.end()), u2.end());
    if (u1.size() < 2 || u2.size() < 2) throw InvalidConfig("svg: degenerate region grid");

    const double W = 640, H = 640, L = 60, B = 50, T = 20, R = 20;
    const double cw = (W - L - R) / static_cast<double>(u2.size());
    const double ch = (H - T - B) / static_cast<double>(u1.size());
    const auto color = [](const std::string& c) {
        if (c == "I") return "#2ca02c";
        if (c == "II") return "#1f77b4";
        if (c == "III") return "#d62728";
        return "#cccccc";
    };
    const auto col_of = [&](double v, const std::vector<double>& u) {
        return static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), v) - u.begin());
    };

    std::ofstream out(path);
    if (!out) throw InvalidConfig("svg: cannot write " + path);
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    for (const auto& row : t.rows) {
        const std::size_t j = col_of(std::strtod(row[static_cast<std::size_t>(i2)].c_str(), nullptr), u2);
        const std::size_t i = col_of(std::strtod(row[static_cast<std::size_t>(i1)].c_str(), nullptr), u1);
        const double x = L + static_cast<double>(j) * cw;
        const double y = H - B - static_cast<double>(i + 1) * ch;
        out << "<rect x='" << x << "' y='" << y << "' width='" << cw + 0.5 << "' height='"
            << ch + 0.5 << "' fill='" << color(row[static_cast<std::size_t>(ic)]) << "'/>\n";
    }
    out << "<text x='" << (L + W - R) / 2 << "' y='" << H - 14
        << "' font-size='13' text-anchor='middle'>p2</text>\n";
    out << "<text x='18' y='" << (T + H - B) / 2 << "' font-size='13'>p1</text>\n";
    out << "<text x='" << L << "' y='" << H - B + 16 << "' font-size='11'>" << u2.front()
        << "</text>\n<text x='" << W - R - 20 << "' y='" << H - B + 16 << "' font-size='11'>"
        << u2.back() << "</text>\n";
    out << "</svg>\n";
}

}  // namespace slicemkt::svg
