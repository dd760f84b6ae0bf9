#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ruloff/nurbs.hpp"

namespace ruloff {

// Shortest decimal that round-trips to the same double.
inline std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

namespace detail {

inline double parse_double(std::string_view tok, const std::string& where) {
    double v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw parse_error("bad number '" + std::string(tok) + "' in " + where);
    return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

} // namespace detail

// Line-oriented curve text: header `curve3 degree=<p> closed=<0|1>`, one
// `knots:` line, then one `cp: x y z w` line per control point. Blank lines and
// `#` comments are ignored.
inline NurbsCurve3 parse_curve(std::istream& in) {
    NurbsCurve3 c;
    std::string line;
    bool have_header = false, have_knots = false;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        if (!have_header) {
            if (toks[0] != "curve3")
                throw parse_error("expected 'curve3' header, got '" + std::string(toks[0]) + "'");
            bool deg = false, clo = false;
            for (size_t i = 1; i < toks.size(); ++i) {
                std::string_view t = toks[i];
                if (t.starts_with("degree=")) {
                    c.degree = static_cast<int>(detail::parse_double(t.substr(7), "degree"));
                    deg = true;
                } else if (t.starts_with("closed=")) {
                    double v = detail::parse_double(t.substr(7), "closed");
                    if (v != 0 && v != 1) throw parse_error("closed must be 0 or 1");
                    c.closed = v == 1;
                    clo = true;
                } else
                    throw parse_error("unknown header field '" + std::string(t) + "'");
            }
            if (!deg || !clo) throw parse_error("header needs degree= and closed=");
            have_header = true;
        } else if (toks[0] == "knots:") {
            if (have_knots) throw parse_error("duplicate knots line");
            for (size_t i = 1; i < toks.size(); ++i)
                c.knots.push_back(detail::parse_double(toks[i], "knots"));
            have_knots = true;
        } else if (toks[0] == "cp:") {
            if (toks.size() != 5) throw parse_error("cp line needs exactly x y z w");
            Point3 p{detail::parse_double(toks[1], "cp"), detail::parse_double(toks[2], "cp"),
                     detail::parse_double(toks[3], "cp")};
            c.control_points.push_back(p);
            c.weights.push_back(detail::parse_double(toks[4], "cp"));
        } else
            throw parse_error("unexpected line '" + line + "'");
    }
    if (!have_header) throw parse_error("empty curve document");
    if (!have_knots) throw parse_error("missing knots line");
    try {
        validate(c);
    } catch (const geometry_error& e) {
        throw parse_error(std::string("invalid curve: ") + e.what());
    }
    return c;
}

inline std::string serialize_curve(const NurbsCurve3& c) {
    std::ostringstream os;
    os << "curve3 degree=" << c.degree << " closed=" << (c.closed ? 1 : 0) << "\n";
    os << "knots:";
    for (double k : c.knots) os << ' ' << fmt_double(k);
    os << "\n";
    for (size_t i = 0; i < c.control_points.size(); ++i) {
        const Point3& p = c.control_points[i];
        os << "cp: " << fmt_double(p.x) << ' ' << fmt_double(p.y) << ' ' << fmt_double(p.z) << ' '
           << fmt_double(c.weights[i]) << "\n";
    }
    return os.str();
}

inline NurbsCurve3 read_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open curve file: " + path);
    return parse_curve(in);
}

inline void write_curve_file(const std::string& path, const NurbsCurve3& c) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write curve file: " + path);
    out << serialize_curve(c);
}

} // namespace ruloff
