#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "ruloff/overlap.hpp"
#include "ruloff/pso.hpp"

namespace ruloff {

enum class JointKind { smooth, convex, concave };

inline const char* to_string(JointKind k) {
    switch (k) {
        case JointKind::smooth: return "smooth";
        case JointKind::convex: return "convex";
        default: return "concave";
    }
}

// Turn sense of the offset at a joint, judged in projection along z:
// s = -T_end x T_start opens a gap (convex) when s.z < 0, overlaps (concave)
// when s.z > 0, and parallel tangents are smooth.
inline JointKind classify_joint(const Vec3& t_end, const Vec3& t_start, const Vec3& z) {
    const double ne = norm(t_end), ns = norm(t_start);
    if (ne < 1e-14 || ns < 1e-14) throw geometry_error("zero tangent at joint");
    const Vec3 s = -1.0 * cross(t_end, t_start);
    if (norm(s) <= 1e-6 * ne * ns) return JointKind::smooth;
    const double sz = dot(s, normalized(z));
    if (sz < 0) return JointKind::convex;
    if (sz > 0) return JointKind::concave;
    return JointKind::smooth; // turn invisible in projection
}

struct JointRecord {
    Point3 x0, x1; // left chain end, right chain start
    Vec3 t0, t1;   // forward tangents there
    Point3 p;      // co-vertex on the original curve
    JointKind kind = JointKind::smooth;
};

struct SphericalQuartic {
    std::array<Point3, 5> cp;
    std::array<double, 5> w;
    std::array<double, 7> params{}; // w0 w1 w3 w4, p2 components a b c
    double fitness = 0;

    NurbsCurve3 as_curve() const {
        return make_bezier(4, {cp.begin(), cp.end()}, {w.begin(), w.end()});
    }

    // homogeneous de Casteljau; allocation-free because the optimizer calls
    // this tens of thousands of times per joint
    Point3 eval(double t) const {
        std::array<std::array<double, 4>, 5> h;
        for (int i = 0; i < 5; ++i) h[i] = {cp[i].x * w[i], cp[i].y * w[i], cp[i].z * w[i], w[i]};
        for (int r = 1; r <= 4; ++r)
            for (int i = 0; i + r <= 4; ++i)
                for (int c = 0; c < 4; ++c) h[i][c] += t * (h[i + 1][c] - h[i][c]);
        return {h[0][0] / h[0][3], h[0][1] / h[0][3], h[0][2] / h[0][3]};
    }
};

// Rational quartic bridge determined by the 7-parameter vector: the inner
// control points enforce exact endpoint tangents, and the middle point sits at
// spherical coordinates (radius d(2a-1), angles pi(2b-1), pi(2c-1)) about the
// chord midpoint. Middle weight fixed at 1.
inline SphericalQuartic quartic_from_params(const Point3& x0, const Point3& x1, const Vec3& t0,
                                            const Vec3& t1, double d,
                                            const std::array<double, 7>& u) {
    const double w0 = u[0], w1 = u[1], w3 = u[2], w4 = u[3];
    if (std::abs(w1) < 1e-12 || std::abs(w3) < 1e-12)
        throw geometry_error("zero weight denominator in quartic construction");
    SphericalQuartic q;
    q.params = u;
    q.w = {w0, w1, 1.0, w3, w4};
    q.cp[0] = x0;
    q.cp[1] = x0 + (w0 / (4.0 * w1)) * t0;
    q.cp[3] = x1 - (w4 / (4.0 * w3)) * t1;
    q.cp[4] = x1;
    const double r = d * (2.0 * u[4] - 1.0);
    const double th = std::numbers::pi * (2.0 * u[5] - 1.0);
    const double ph = std::numbers::pi * (2.0 * u[6] - 1.0);
    q.cp[2] = 0.5 * (x0 + x1) + Vec3{r * std::cos(th) * std::sin(ph),
                                     r * std::cos(th) * std::cos(ph), r * std::sin(th)};
    return q;
}

// Population standard deviation of the distances from J uniform curve samples
// to the vertex, plus a hinge penalty pushing weights strictly positive.
inline double transition_fitness(const SphericalQuartic& q, const Point3& p, int j_samples) {
    if (j_samples < 2) throw geometry_error("fitness needs at least 2 samples");
    std::vector<double> y(j_samples);
    double mean = 0;
    for (int i = 1; i <= j_samples; ++i) {
        y[i - 1] = distance(q.eval(double(i) / j_samples), p);
        mean += y[i - 1];
    }
    mean /= j_samples;
    double var = 0;
    for (double v : y) var += (v - mean) * (v - mean);
    double f = std::sqrt(var / j_samples);
    for (double wm : q.w) f += 1e3 * std::max(0.0, -wm + 1e-6);
    return f;
}

// Bridge a convex gap with a positive-weight rational quartic whose samples
// stay near-equidistant (distance d) from the co-vertex, solved by PSO over the
// 7 free parameters.
inline SphericalQuartic convex_transition(const JointRecord& joint, double d, PsoConfig cfg,
                                          int j_samples = 100, PsoResult* diagnostics = nullptr) {
    if (joint.kind != JointKind::convex)
        throw geometry_error("convex transition requires a convex joint");
    if (distance(joint.x0, joint.x1) < 1e-12)
        throw geometry_error("degenerate joint: coincident gap endpoints");
    for (const Point3& x : {joint.x0, joint.x1})
        if (std::abs(distance(x, joint.p) - d) > 0.01 * d)
            throw geometry_error("gap endpoint does not lie at the offset distance from the vertex");
    if (cfg.lo.empty()) {
        cfg.lo = {1e-3, 1e-3, 1e-3, 1e-3, 0, 0, 0};
        cfg.hi = {1, 1, 1, 1, 1, 1, 1};
    }
    auto fit = [&](const std::vector<double>& v) {
        std::array<double, 7> u;
        std::copy_n(v.begin(), 7, u.begin());
        return transition_fitness(quartic_from_params(joint.x0, joint.x1, joint.t0, joint.t1, d, u),
                                  joint.p, j_samples);
    };
    PsoResult res = pso_minimize(fit, cfg);
    if (diagnostics) *diagnostics = res;
    std::array<double, 7> u;
    std::copy_n(res.best.begin(), 7, u.begin());
    SphericalQuartic q = quartic_from_params(joint.x0, joint.x1, joint.t0, joint.t1, d, u);
    q.fitness = res.value;
    if (!res.converged)
        throw convergence_error("transition optimization missed the target fitness", res.value);
    return q;
}

inline NurbsCurve3 hermite_cubic_bridge(const Point3& p0, const Vec3& t0_in, const Point3& p1,
                                        const Vec3& t1_in) {
    const double l = distance(p0, p1);
    if (l < 1e-14) throw geometry_error("degenerate bridge: coincident endpoints");
    if (norm(t0_in) < 1e-14 || norm(t1_in) < 1e-14)
        throw geometry_error("zero tangent for bridge");
    const Vec3 t0 = normalized(t0_in), t1 = normalized(t1_in);
    return make_bezier(3, {p0, p0 + t0 * (l / 3.0), p1 - t1 * (l / 3.0), p1}, {1, 1, 1, 1});
}

namespace detail {

// First crossing of the two projected curves: polyline seed scan, bracket
// subdivision to parameter width ~1e-12, then a few Newton polish steps.
inline std::pair<double, double> projected_crossing(const NurbsCurve3& left,
                                                    const NurbsCurve3& right,
                                                    const ProjectionBasis& basis) {
    auto pl = [&](double t) { return basis.project(evaluate(left, t)); };
    auto prj = [&](double t) { return basis.project(evaluate(right, t)); };
    auto param = [](const NurbsCurve3& c, double f) {
        return c.domain_start() + (c.domain_end() - c.domain_start()) * f;
    };

    auto scan = [&](double sa, double sb, double ta, double tb, int n,
                    double& osa, double& osb, double& ota, double& otb) {
        std::vector<Vec2> a(n + 1), b(n + 1);
        for (int i = 0; i <= n; ++i) {
            a[i] = pl(sa + (sb - sa) * i / n);
            b[i] = prj(ta + (tb - ta) * i / n);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Intersection2D res;
                try {
                    res = segment_intersect_2d(a[i], a[i + 1], b[j], b[j + 1]);
                } catch (const geometry_error&) {
                    continue;
                }
                if (res.kind == SegCross::none) continue;
                osa = sa + (sb - sa) * i / n;
                osb = sa + (sb - sa) * (i + 1.0) / n;
                ota = ta + (tb - ta) * j / n;
                otb = ta + (tb - ta) * (j + 1.0) / n;
                return true;
            }
        return false;
    };

    double sa = param(left, 0), sb = param(left, 1);
    double ta = param(right, 0), tb = param(right, 1);
    if (!scan(sa, sb, ta, tb, 256, sa, sb, ta, tb))
        throw geometry_error("projected curves do not intersect");
    for (int pass = 0; pass < 40 && (sb - sa > 1e-13 || tb - ta > 1e-13); ++pass) {
        double nsa, nsb, nta, ntb;
        if (!scan(sa, sb, ta, tb, 16, nsa, nsb, nta, ntb)) break; // keep last bracket
        sa = nsa, sb = nsb, ta = nta, tb = ntb;
    }

    double s = 0.5 * (sa + sb), t = 0.5 * (ta + tb);
    const double hs = 1e-7 * (left.domain_end() - left.domain_start());
    const double ht = 1e-7 * (right.domain_end() - right.domain_start());
    for (int it = 0; it < 8; ++it) {
        Vec2 F = pl(s) - prj(t);
        Vec2 dfs = (pl(std::min(s + hs, param(left, 1))) - pl(std::max(s - hs, param(left, 0)))) /
                   (2 * hs);
        Vec2 dft = (prj(std::min(t + ht, param(right, 1))) -
                    prj(std::max(t - ht, param(right, 0)))) /
                   (2 * ht);
        double det = -dfs.x * dft.y + dfs.y * dft.x; // columns (dfs, -dft)
        if (std::abs(det) < 1e-30) break;
        double ds = (-F.x * -dft.y - (-F.y) * -dft.x) / det;
        double dt = (dfs.x * -F.y - dfs.y * -F.x) / det;
        double ns = std::clamp(s + ds, param(left, 0), param(left, 1));
        double nt = std::clamp(t + dt, param(right, 0), param(right, 1));
        if (norm(pl(ns) - prj(nt)) <= norm(F)) {
            s = ns;
            t = nt;
        } else
            break;
    }
    return {s, t};
}

// Largest parameter below t_hi (bisection) where the curve point sits at chord
// distance exactly target_d from anchor; throws when the curve start is reached
// before the chord opens up.
inline double trim_param_before(const NurbsCurve3& c, double t_hi, const Point3& anchor,
                                double target_d) {
    auto g = [&](double t) { return distance(evaluate(c, t), anchor) - target_d; };
    const double t0 = c.domain_start();
    double lo = t_hi, step = (t_hi - t0) / 64.0;
    if (step <= 0) throw geometry_error("trim distance exceeds available curve length");
    while (g(lo) < 0) {
        lo -= step;
        if (lo <= t0) {
            if (g(t0) < 0)
                throw geometry_error("trim distance exceeds available curve length");
            lo = t0;
            break;
        }
    }
    double hi = std::min(lo + step, t_hi);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) >= 0 ? lo : hi) = mid;
    }
    return lo;
}

} // namespace detail

struct ConcaveRepair {
    NurbsCurve3 left, bridge, right;
    double crossing_left_param = 0, crossing_right_param = 0;
    double trim_left_param = 0, trim_right_param = 0;
    Point3 trim_left_point{}, trim_right_point{};
};

// Repair a concave overlap: locate the projected crossing of the two offset
// curves, cut each one back by chord distance D before the crossing (in its own
// travel direction), and bridge the retained ends with a tangent-matched cubic.
inline ConcaveRepair concave_transition(const NurbsCurve3& left, const NurbsCurve3& right,
                                        const Vec3& k, double d_trim) {
    if (d_trim < 0) throw geometry_error("trim distance must be nonnegative");
    const ProjectionBasis basis = projection_basis(k);
    auto [s, t] = detail::projected_crossing(left, right, basis);

    const Point3 cross_l = evaluate(left, s), cross_r = evaluate(right, t);
    ConcaveRepair out;
    out.crossing_left_param = s;
    out.crossing_right_param = t;

    double ts = d_trim == 0 ? s : detail::trim_param_before(left, s, cross_l, d_trim);
    double tt = d_trim == 0 ? t : detail::trim_param_before(right, t, cross_r, d_trim);
    out.trim_left_param = ts;
    out.trim_right_param = tt;
    out.trim_left_point = evaluate(left, ts);
    out.trim_right_point = evaluate(right, tt);

    out.left = split_curve(left, ts).first;
    out.right = split_curve(right, tt).second;

    const Point3 p0 = out.trim_left_point, p1 = out.trim_right_point;
    if (distance(p0, p1) < 1e-12) {
        // welded ends: the bridge collapses to the shared point
        out.bridge = make_bezier(3, {p0, p0, p1, p1}, {1, 1, 1, 1});
    } else if (d_trim == 0) {
        Point3 a = lerp(p0, p1, 1.0 / 3.0), b = lerp(p0, p1, 2.0 / 3.0);
        out.bridge = make_bezier(3, {p0, a, b, p1}, {1, 1, 1, 1});
    } else {
        out.bridge = hermite_cubic_bridge(p0, unit_tangent(left, ts), p1, unit_tangent(right, tt));
    }
    return out;
}

} // namespace ruloff
