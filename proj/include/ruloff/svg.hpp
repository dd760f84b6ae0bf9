#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ruloff/curve_io.hpp"
#include "ruloff/vec3.hpp"

namespace ruloff {

struct SvgPolyline {
    std::vector<Vec2> points;
    std::string stroke = "#1f4f9f";
};

struct SvgMarker {
    Vec2 at;
    std::string label;
};

struct SvgPlot {
    std::vector<SvgPolyline> polylines;
    std::vector<SvgMarker> markers;
    std::string title;
};

// Deterministic fixed-viewport SVG; marker elements carry the data-space
// coordinates as data-x/data-y attributes so plots are machine-checkable.
inline std::string render_svg(const SvgPlot& plot) {
    const double w = 800, h = 600, margin = 50;
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    auto grow = [&](const Vec2& p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    };
    for (const auto& pl : plot.polylines)
        for (const auto& p : pl.points) grow(p);
    for (const auto& m : plot.markers) grow(m.at);
    const bool empty = lo.x > hi.x;
    if (empty) {
        lo = {0, 0};
        hi = {1, 1};
    }
    if (hi.x - lo.x < 1e-12) hi.x = lo.x + 1;
    if (hi.y - lo.y < 1e-12) hi.y = lo.y + 1;
    const double sx = (w - 2 * margin) / (hi.x - lo.x);
    const double sy = (h - 2 * margin) / (hi.y - lo.y);
    const double s = std::min(sx, sy);
    auto X = [&](double x) { return margin + (x - lo.x) * s; };
    auto Y = [&](double y) { return h - margin - (y - lo.y) * s; };

    std::ostringstream os;
    auto num = [&](double v) { return fmt_double(std::round(v * 1e6) / 1e6); };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    if (!plot.title.empty())
        os << "  <text x=\"" << margin << "\" y=\"30\" font-size=\"16\">" << plot.title
           << "</text>\n";
    // axes frame
    os << "  <line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin
       << "\" y2=\"" << h - margin << "\" stroke=\"#888\"/>\n";
    os << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
       << h - margin << "\" stroke=\"#888\"/>\n";
    for (const auto& pl : plot.polylines) {
        if (pl.points.empty()) continue;
        os << "  <polyline fill=\"none\" stroke=\"" << pl.stroke << "\" points=\"";
        for (size_t i = 0; i < pl.points.size(); ++i) {
            if (i) os << ' ';
            os << num(X(pl.points[i].x)) << ',' << num(Y(pl.points[i].y));
        }
        os << "\"/>\n";
    }
    for (const auto& m : plot.markers) {
        os << "  <circle cx=\"" << num(X(m.at.x)) << "\" cy=\"" << num(Y(m.at.y))
           << "\" r=\"4\" fill=\"#d33\" data-x=\"" << fmt_double(m.at.x) << "\" data-y=\""
           << fmt_double(m.at.y) << "\"";
        if (!m.label.empty()) os << " data-label=\"" << m.label << "\"";
        os << "/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline void write_svg_file(const std::string& path, const SvgPlot& plot) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write SVG file: " + path);
    out << render_svg(plot);
}

} // namespace ruloff
