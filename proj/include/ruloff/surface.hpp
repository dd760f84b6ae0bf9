#pragma once

#include <array>
#include <vector>

#include "ruloff/nurbs.hpp"

namespace ruloff {

// Ruled surface R(u,v) = (1-v) P(u) + v Q(u) between two curves sharing the
// normalized parameter u in [0,1].
struct RuledPatch {
    NurbsCurve3 p, q;

    static double to_domain(const NurbsCurve3& c, double u) {
        return c.domain_start() + (c.domain_end() - c.domain_start()) * u;
    }
    Point3 at_p(double u) const { return evaluate(p, to_domain(p, u)); }
    Point3 at_q(double u) const { return evaluate(q, to_domain(q, u)); }
};

inline Point3 ruled_point(const RuledPatch& patch, double u, double v) {
    if (u < -1e-12 || u > 1 + 1e-12 || v < -1e-12 || v > 1 + 1e-12)
        throw geometry_error("ruled surface parameters must lie in [0,1]");
    u = std::clamp(u, 0.0, 1.0);
    v = std::clamp(v, 0.0, 1.0);
    return (1.0 - v) * patch.at_p(u) + v * patch.at_q(u);
}

struct RuledMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<int, 4>> quads;
    std::vector<std::array<int, 3>> tris;

    void append(const RuledMesh& other) {
        const int base = static_cast<int>(vertices.size());
        vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
        for (auto q : other.quads) {
            for (int& i : q) i += base;
            quads.push_back(q);
        }
        for (auto t : other.tris) {
            for (int& i : t) i += base;
            tris.push_back(t);
        }
    }
};

// (nu+1) x (nv+1) grid of ruled points, row-major in u; v-isolines are exact
// straight rulings because the evaluation is affine in v.
inline RuledMesh tessellate(const RuledPatch& patch, int nu, int nv) {
    if (nu < 1 || nv < 1) throw geometry_error("tessellation needs nu, nv >= 1");
    RuledMesh m;
    m.vertices.reserve(size_t(nu + 1) * (nv + 1));
    for (int i = 0; i <= nu; ++i)
        for (int j = 0; j <= nv; ++j)
            m.vertices.push_back(ruled_point(patch, double(i) / nu, double(j) / nv));
    auto idx = [nv](int i, int j) { return i * (nv + 1) + j; };
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j)
            m.quads.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)});
    return m;
}

// Triangle fan covering a convex gap: rulings from the co-vertex to nu+1
// samples of the transition curve. Zero-length transitions yield an empty mesh.
inline RuledMesh gap_fan(const Point3& apex, const NurbsCurve3& transition, int nu) {
    if (nu < 1) throw geometry_error("gap fan needs nu >= 1");
    std::vector<Point3> rim(nu + 1);
    double len = 0;
    for (int i = 0; i <= nu; ++i) {
        rim[i] = evaluate(transition, RuledPatch::to_domain(transition, double(i) / nu));
        if (i) len += distance(rim[i - 1], rim[i]);
    }
    RuledMesh m;
    if (len < 1e-12) return m;
    m.vertices.push_back(apex);
    m.vertices.insert(m.vertices.end(), rim.begin(), rim.end());
    for (int i = 0; i < nu; ++i) m.tris.push_back({0, i + 1, i + 2});
    return m;
}

} // namespace ruloff
