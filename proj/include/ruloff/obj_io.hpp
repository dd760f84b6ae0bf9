#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ruloff/curve_io.hpp"
#include "ruloff/surface.hpp"

namespace ruloff {

namespace detail {
inline std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}
} // namespace detail

// Wavefront OBJ with v/f/l records, 1-based indices, LF endings, 9 significant
// digits. Polylines become `l` elements appended after the mesh vertices.
inline void write_obj(std::ostream& out, const RuledMesh& mesh,
                      const std::vector<std::vector<Point3>>& polylines = {}) {
    auto emit_vertex = [&](const Point3& p) {
        out << "v " << detail::fmt_g9(p.x) << ' ' << detail::fmt_g9(p.y) << ' '
            << detail::fmt_g9(p.z) << "\n";
    };
    for (const Point3& p : mesh.vertices) emit_vertex(p);
    for (const auto& q : mesh.quads)
        out << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << "\n";
    for (const auto& t : mesh.tris)
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
    int base = static_cast<int>(mesh.vertices.size());
    for (const auto& pl : polylines) {
        for (const Point3& p : pl) emit_vertex(p);
        out << "l";
        for (size_t i = 0; i < pl.size(); ++i) out << ' ' << base + 1 + static_cast<int>(i);
        out << "\n";
        base += static_cast<int>(pl.size());
    }
}

inline void write_obj_file(const std::string& path, const RuledMesh& mesh,
                           const std::vector<std::vector<Point3>>& polylines = {}) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw parse_error("cannot write OBJ file: " + path);
    write_obj(out, mesh, polylines);
}

struct ObjContent {
    std::vector<Point3> vertices;
    std::vector<std::vector<int>> faces; // 0-based
    std::vector<std::vector<int>> lines; // 0-based
};

inline ObjContent read_obj(std::istream& in) {
    ObjContent obj;
    std::string line;
    while (std::getline(in, line)) {
        auto toks = detail::split_ws(line);
        if (toks.empty() || toks[0].front() == '#') continue;
        if (toks[0] == "v") {
            if (toks.size() < 4) throw parse_error("OBJ vertex needs 3 coordinates");
            obj.vertices.push_back({detail::parse_double(toks[1], "v"),
                                    detail::parse_double(toks[2], "v"),
                                    detail::parse_double(toks[3], "v")});
        } else if (toks[0] == "f" || toks[0] == "l") {
            std::vector<int> idx;
            for (size_t i = 1; i < toks.size(); ++i) {
                int v = static_cast<int>(detail::parse_double(toks[i], "face index"));
                if (v < 1 || v > static_cast<int>(obj.vertices.size()))
                    throw parse_error("OBJ index out of range");
                idx.push_back(v - 1);
            }
            if (idx.size() < 2) throw parse_error("OBJ element needs at least 2 indices");
            (toks[0] == "f" ? obj.faces : obj.lines).push_back(std::move(idx));
        }
        // other record types ignored
    }
    return obj;
}

inline ObjContent read_obj_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open OBJ file: " + path);
    return read_obj(in);
}

} // namespace ruloff
