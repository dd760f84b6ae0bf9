#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "ruloff/offset.hpp"

namespace ruloff {

// Orthonormal basis of the plane perpendicular to k. The in-plane axes are seeded
// from the coordinate axis least aligned with k, so k=(0,0,1) projects to (x,y)
// and k=(1,0,0) to (y,z).
struct ProjectionBasis {
    Vec3 u, v, k;
    Vec2 project(const Point3& p) const { return {dot(p, u), dot(p, v)}; }
};

inline ProjectionBasis projection_basis(const Vec3& k_in) {
    Vec3 k = normalized(k_in);
    Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    Vec3 seed = axes[0];
    double best = std::abs(dot(k, axes[0]));
    for (int i = 1; i < 3; ++i) {
        double a = std::abs(dot(k, axes[i]));
        if (a < best) {
            best = a;
            seed = axes[i];
        }
    }
    Vec3 u = normalized(seed - dot(seed, k) * k);
    return {u, cross(k, u), k};
}

struct ProjectedPolyline {
    std::vector<Vec2> points; // index-parallel with the source polyline
    ProjectionBasis basis;
};

inline ProjectedPolyline project(const RawOffsetPolyline& poly, const Vec3& k) {
    ProjectedPolyline out;
    out.basis = projection_basis(k);
    out.points.reserve(poly.entries.size());
    for (const auto& e : poly.entries) out.points.push_back(out.basis.project(e.offset_point));
    return out;
}

enum class SegCross { none, proper, collinear_overlap };

struct Intersection2D {
    SegCross kind = SegCross::none;
    Vec2 point{};
    double s = 0, t = 0; // fractions along segment a and segment b
};

inline Intersection2D segment_intersect_2d(const Vec2& a1, const Vec2& a2, const Vec2& b1,
                                           const Vec2& b2) {
    const Vec2 r = a2 - a1, q = b2 - b1;
    const double lr = norm(r), lq = norm(q);
    if (lr <= 1e-12 || lq <= 1e-12)
        throw geometry_error("degenerate segment in intersection test");
    const Vec2 diff = b1 - a1;
    const double denom = cross(r, q);
    if (std::abs(denom) <= 1e-12 * lr * lq) {
        // parallel; collinear iff b1 lies on a's line
        if (std::abs(cross(diff, r)) > 1e-9 * lr * std::max(lr, norm(diff)))
            return {};
        double inv = 1.0 / dot(r, r);
        double t0 = dot(diff, r) * inv;
        double t1 = dot(b2 - a1, r) * inv;
        if (t0 > t1) std::swap(t0, t1);
        double lo = std::max(0.0, t0), hi = std::min(1.0, t1);
        if (hi - lo <= 1e-12) return {};
        Intersection2D res;
        res.kind = SegCross::collinear_overlap;
        res.s = 0.5 * (lo + hi);
        res.point = a1 + r * res.s;
        res.t = dot(res.point - b1, q) / dot(q, q);
        return res;
    }
    double s = cross(diff, q) / denom;
    double t = cross(diff, r) / denom;
    if (s < -1e-12 || s > 1 + 1e-12 || t < -1e-12 || t > 1 + 1e-12) return {};
    Intersection2D res;
    res.kind = SegCross::proper;
    res.s = std::clamp(s, 0.0, 1.0);
    res.t = std::clamp(t, 0.0, 1.0);
    res.point = a1 + r * res.s;
    return res;
}

// A gap between two chains left by loop elimination; the two 3D endpoints project
// to the same 2D crossing but generally differ in 3D.
struct OverlapJoint {
    Point3 a, b;             // end of the chain before, start of the chain after
    double param_a, param_b; // source-curve parameters carried through elimination
    Vec2 crossing;           // shared projected crossing point
    int chain_before = -1, chain_after = -1;
};

struct ChainVertex {
    Point3 p;
    double source_param = 0;
};

struct TrimmedChains {
    std::vector<std::vector<ChainVertex>> chains;
    std::vector<OverlapJoint> joints;
    bool closed_loop = false; // chain sequence wraps around (closed input)
};

namespace detail {

struct LoopNode {
    Point3 p;
    double param;
    bool gap_after = false; // joint between this node and the next
    Vec2 crossing{};        // valid when gap_after
};

inline bool interior_hit(double frac, double seg_len, double eps) {
    double d = frac * seg_len;
    return d > eps && seg_len - d > eps;
}

} // namespace detail

// Remove invalid loops: walk segments in order, and whenever a segment crosses a
// later one in projection, cut out everything between the crossing parameters,
// leaving two inserted vertices separated by a recorded gap. Repeats until the
// projection is simple.
inline TrimmedChains eliminate_loops(const RawOffsetPolyline& poly, const Vec3& k) {
    using detail::LoopNode;
    if (poly.entries.size() < 3)
        throw geometry_error("loop elimination needs at least 2 segments");

    std::vector<LoopNode> nodes;
    for (const auto& e : poly.entries) nodes.push_back({e.offset_point, e.source.parameter});

    bool closed = poly.closed;
    if (closed && distance(nodes.front().p, nodes.back().p) < 1e-12)
        nodes.pop_back(); // seam vertex stored once for cyclic processing

    const ProjectionBasis basis = projection_basis(k);
    const size_t guard_limit = nodes.size() * nodes.size() + 64;
    size_t eliminations = 0;

    while (true) {
        const size_t n = nodes.size();
        const size_t nseg = closed ? n : n - 1;
        std::vector<Vec2> pr(n);
        Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
        for (size_t i = 0; i < n; ++i) {
            pr[i] = basis.project(nodes[i].p);
            lo = {std::min(lo.x, pr[i].x), std::min(lo.y, pr[i].y)};
            hi = {std::max(hi.x, pr[i].x), std::max(hi.y, pr[i].y)};
        }
        const double eps = 1e-9 * norm(hi - lo);

        auto seg = [&](size_t i) { return std::pair<size_t, size_t>{i, (i + 1) % n}; };
        auto seg_len = [&](size_t i) {
            auto [u, v] = seg(i);
            return norm(pr[v] - pr[u]);
        };

        bool found = false;
        size_t fa = 0, fb = 0;
        Intersection2D hit;
        for (size_t a = 0; a < nseg && !found; ++a) {
            if (nodes[a].gap_after || seg_len(a) <= eps) continue;
            for (size_t b = a + 2; b < nseg; ++b) {
                if (closed && a == 0 && b == nseg - 1) continue; // wrap-adjacent
                if (nodes[b].gap_after || seg_len(b) <= eps) continue;
                auto [a1, a2] = seg(a);
                auto [b1, b2] = seg(b);
                Intersection2D res = segment_intersect_2d(pr[a1], pr[a2], pr[b1], pr[b2]);
                if (res.kind == SegCross::none) continue;
                // count only interior-interior contacts; endpoint touches are not loops
                if (!detail::interior_hit(res.s, seg_len(a), eps) ||
                    !detail::interior_hit(res.t, seg_len(b), eps))
                    continue;
                found = true;
                fa = a;
                fb = b;
                hit = res;
                break;
            }
        }
        if (!found) break;

        if (++eliminations > guard_limit)
            throw geometry_error("loop elimination failed to converge");

        // cut vertices fa+1 .. fb, insert the two recovered 3D points with a gap
        LoopNode pic, pjc;
        auto [a1, a2] = seg(fa);
        auto [b1, b2] = seg(fb);
        pic.p = lerp(nodes[a1].p, nodes[a2].p, hit.s);
        pic.param = nodes[a1].param + (nodes[a2].param - nodes[a1].param) * hit.s;
        pic.gap_after = true;
        pic.crossing = hit.point;
        pjc.p = lerp(nodes[b1].p, nodes[b2].p, hit.t);
        pjc.param = nodes[b1].param + (nodes[b2].param - nodes[b1].param) * hit.t;

        std::vector<LoopNode> next(nodes.begin(), nodes.begin() + fa + 1);
        next.push_back(pic);
        next.push_back(pjc);
        next.insert(next.end(), nodes.begin() + fb + 1, nodes.end());
        nodes = std::move(next);

        size_t real = 0;
        for (const auto& nd : nodes) real += !nd.gap_after;
        if (nodes.size() < (closed ? 3u : 2u) || real < 2)
            throw geometry_error("loop elimination removed the entire curve");
    }

    // Assemble chains between gaps. For closed inputs the chain list is cyclic,
    // so rotate a gap (if any) to the seam first.
    TrimmedChains out;
    out.closed_loop = closed;
    if (closed) {
        size_t first_gap = nodes.size();
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].gap_after) {
                first_gap = i;
                break;
            }
        if (first_gap < nodes.size())
            std::rotate(nodes.begin(), nodes.begin() + first_gap + 1, nodes.end());
    }

    std::vector<ChainVertex> cur;
    std::vector<std::pair<size_t, LoopNode>> gap_after_chain;
    for (size_t i = 0; i < nodes.size(); ++i) {
        cur.push_back({nodes[i].p, nodes[i].param});
        if (nodes[i].gap_after) {
            gap_after_chain.emplace_back(out.chains.size(), nodes[i]);
            out.chains.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.chains.push_back(std::move(cur));
    if (closed && out.chains.size() == 1 && gap_after_chain.empty()) {
        // still a single closed loop; re-append the seam vertex for round-trip shape
        out.chains[0].push_back(out.chains[0].front());
    }

    for (auto& [ci, node] : gap_after_chain) {
        OverlapJoint j;
        j.a = node.p;
        j.param_a = node.param;
        j.crossing = node.crossing;
        j.chain_before = static_cast<int>(ci);
        j.chain_after = static_cast<int>((ci + 1) % out.chains.size());
        const auto& nxt = out.chains[j.chain_after].front();
        j.b = nxt.p;
        j.param_b = nxt.source_param;
        out.joints.push_back(j);
    }
    return out;
}

// Brute-force simplicity check: true when no two non-adjacent segments of the
// projected chains cross interior-to-interior. This is the test oracle's twin.
inline bool projection_is_simple(const std::vector<std::vector<Point3>>& chains, const Vec3& k,
                                 bool closed_loop = false) {
    ProjectionBasis basis = projection_basis(k);
    struct Seg {
        Vec2 a, b;
        int chain;
        size_t idx;
    };
    std::vector<Seg> segs;
    Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
    for (size_t c = 0; c < chains.size(); ++c) {
        for (size_t i = 0; i + 1 < chains[c].size(); ++i) {
            Seg s{basis.project(chains[c][i]), basis.project(chains[c][i + 1]),
                  static_cast<int>(c), i};
            segs.push_back(s);
            for (const Vec2& p : {s.a, s.b}) {
                lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
                hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
            }
        }
    }
    const double eps = 1e-9 * norm(hi - lo);
    for (size_t i = 0; i < segs.size(); ++i) {
        for (size_t j = i + 1; j < segs.size(); ++j) {
            double li = norm(segs[i].b - segs[i].a), lj = norm(segs[j].b - segs[j].a);
            if (li <= eps || lj <= eps) continue;
            Intersection2D res;
            try {
                res = segment_intersect_2d(segs[i].a, segs[i].b, segs[j].a, segs[j].b);
            } catch (const geometry_error&) {
                continue;
            }
            if (res.kind == SegCross::none) continue;
            if (detail::interior_hit(res.s, li, eps) && detail::interior_hit(res.t, lj, eps))
                return false;
        }
    }
    (void)closed_loop;
    return true;
}

} // namespace ruloff
