#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ruloff/errors.hpp"
#include "ruloff/vec3.hpp"

namespace ruloff {

// Rational B-spline space curve, clamped form only.
struct NurbsCurve3 {
    int degree = 0;
    std::vector<double> knots;
    std::vector<Point3> control_points;
    std::vector<double> weights;
    bool closed = false; // input-level flag: the curve represents a closed loop

    double domain_start() const { return knots[degree]; }
    double domain_end() const { return knots[knots.size() - 1 - degree]; }
};

// One Bézier piece of a decomposed curve; control net in rational form,
// source_span is the parameter interval it covers on the parent curve.
struct BezierSegment {
    int degree = 0;
    std::vector<Point3> control_points;
    std::vector<double> weights;
    double t0 = 0, t1 = 1;

    bool rational() const {
        auto [lo, hi] = std::minmax_element(weights.begin(), weights.end());
        return *hi - *lo > 1e-12;
    }
};

inline NurbsCurve3 make_bezier(int degree, std::vector<Point3> cps,
                               std::vector<double> weights = {}) {
    NurbsCurve3 c;
    c.degree = degree;
    c.control_points = std::move(cps);
    c.weights = weights.empty() ? std::vector<double>(c.control_points.size(), 1.0)
                                : std::move(weights);
    c.knots.assign(degree + 1, 0.0);
    c.knots.insert(c.knots.end(), degree + 1, 1.0);
    return c;
}

inline NurbsCurve3 segment_as_curve(const BezierSegment& seg) {
    return make_bezier(seg.degree, seg.control_points, seg.weights);
}

inline void validate(const NurbsCurve3& c) {
    const size_t n = c.control_points.size();
    if (c.degree < 1)
        throw geometry_error("curve degree must be >= 1");
    if (n < static_cast<size_t>(c.degree) + 1)
        throw geometry_error("curve needs at least degree+1 control points");
    if (c.knots.size() != n + c.degree + 1)
        throw geometry_error("knot count must equal control-point count + degree + 1");
    if (c.weights.size() != n)
        throw geometry_error("one weight per control point required");
    for (double w : c.weights)
        if (!(w > 0))
            throw geometry_error("weights must be strictly positive");
    for (size_t i = 1; i < c.knots.size(); ++i)
        if (c.knots[i] < c.knots[i - 1])
            throw geometry_error("knot sequence must be non-decreasing");
    for (int i = 0; i <= c.degree; ++i) {
        if (c.knots[i] != c.knots[0] || c.knots[c.knots.size() - 1 - i] != c.knots.back())
            throw geometry_error("curve must be clamped (end knots of multiplicity degree+1)");
    }
    if (!(c.domain_start() < c.domain_end()))
        throw geometry_error("curve has empty parameter domain");
    for (const auto& p : c.control_points)
        if (!finite(p))
            throw geometry_error("control points must be finite");
}

namespace detail {

inline int find_span(const NurbsCurve3& c, double u) {
    const int p = c.degree;
    const int n = static_cast<int>(c.control_points.size()) - 1;
    if (u >= c.knots[n + 1]) return n;
    if (u <= c.knots[p]) return p;
    int lo = p, hi = n + 1;
    int mid = (lo + hi) / 2;
    while (u < c.knots[mid] || u >= c.knots[mid + 1]) {
        if (u < c.knots[mid]) hi = mid;
        else lo = mid;
        mid = (lo + hi) / 2;
    }
    return mid;
}

// Cox-de Boor basis values and derivatives up to `order` at span `i`.
inline void ders_basis(const NurbsCurve3& c, int i, double u, int order,
                       std::vector<std::vector<double>>& ders) {
    const int p = c.degree;
    const auto& U = c.knots;
    std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1));
    std::vector<double> left(p + 1), right(p + 1);
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = u - U[i + 1 - j];
        right[j] = U[i + j] - u;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }
    ders.assign(order + 1, std::vector<double>(p + 1, 0.0));
    for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
    std::array<std::vector<double>, 2> a{std::vector<double>(p + 1), std::vector<double>(p + 1)};
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= order; ++k) {
            double d = 0.0;
            int rk = r - k, pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            int j1 = rk >= -1 ? 1 : -rk;
            int j2 = r - 1 <= pk ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double f = p;
    for (int k = 1; k <= order; ++k) {
        for (int j = 0; j <= p; ++j) ders[k][j] *= f;
        f *= p - k;
    }
}

inline void check_domain(const NurbsCurve3& c, double t) {
    const double a = c.domain_start(), b = c.domain_end();
    const double eps = 1e-12 * (b - a);
    if (t < a - eps || t > b + eps)
        throw geometry_error("parameter " + std::to_string(t) + " outside curve domain [" +
                             std::to_string(a) + ", " + std::to_string(b) + "]");
}

} // namespace detail

inline Point3 evaluate(const NurbsCurve3& c, double t) {
    detail::check_domain(c, t);
    t = std::clamp(t, c.domain_start(), c.domain_end());
    const int span = detail::find_span(c, t);
    std::vector<std::vector<double>> N;
    detail::ders_basis(c, span, t, 0, N);
    Vec3 a{};
    double w = 0.0;
    for (int j = 0; j <= c.degree; ++j) {
        int idx = span - c.degree + j;
        a += N[0][j] * c.weights[idx] * c.control_points[idx];
        w += N[0][j] * c.weights[idx];
    }
    return a / w;
}

// Derivative vectors of the rational curve, orders 1..order (order <= 2).
// Quotient rule on the homogeneous form: C' = (A' - w'C)/w, C'' = (A'' - 2w'C' - w''C)/w.
inline std::vector<Vec3> derivatives(const NurbsCurve3& c, double t, int order) {
    if (order < 1 || order > 2)
        throw geometry_error("derivative order must be 1 or 2");
    detail::check_domain(c, t);
    t = std::clamp(t, c.domain_start(), c.domain_end());
    const int span = detail::find_span(c, t);
    std::vector<std::vector<double>> N;
    detail::ders_basis(c, span, t, order, N);
    std::array<Vec3, 3> A{};
    std::array<double, 3> W{};
    for (int k = 0; k <= order; ++k) {
        for (int j = 0; j <= c.degree; ++j) {
            int idx = span - c.degree + j;
            A[k] += N[k][j] * c.weights[idx] * c.control_points[idx];
            W[k] += N[k][j] * c.weights[idx];
        }
    }
    Vec3 C0 = A[0] / W[0];
    std::vector<Vec3> out;
    Vec3 C1 = (A[1] - W[1] * C0) / W[0];
    out.push_back(C1);
    if (order == 2)
        out.push_back((A[2] - 2.0 * W[1] * C1 - W[2] * C0) / W[0]);
    return out;
}

// r = |C'|^3 / |C' x C''|; straight pieces report the infinite radius.
inline double curvature_radius(const NurbsCurve3& c, double t) {
    auto d = derivatives(c, t, 2);
    double speed2 = norm2(d[0]);
    if (speed2 < 1e-24)
        throw geometry_error("degenerate tangent (cusp) at t=" + std::to_string(t));
    double speed3 = speed2 * std::sqrt(speed2);
    double denom = norm(cross(d[0], d[1]));
    if (denom < 1e-12 * speed3)
        return kInfiniteRadius;
    return speed3 / denom;
}

inline Vec3 unit_tangent(const NurbsCurve3& c, double t) {
    Vec3 d = derivatives(c, t, 1)[0];
    double n = norm(d);
    if (n < 1e-12)
        throw geometry_error("degenerate tangent at t=" + std::to_string(t));
    return d / n;
}

// Knot insertion (rational, homogeneous coordinates); r copies of u, r <= degree - current multiplicity.
inline NurbsCurve3 insert_knot(const NurbsCurve3& c, double u, int r) {
    if (r <= 0) return c;
    const int p = c.degree;
    const int n = static_cast<int>(c.control_points.size()) - 1;
    const int k = detail::find_span(c, u);
    int s = 0;
    for (double kn : c.knots)
        if (kn == u) ++s;
    if (r + s > p)
        throw geometry_error("knot insertion beyond multiplicity degree");

    auto hom = [&](int i) {
        const Point3& pt = c.control_points[i];
        double w = c.weights[i];
        return std::array<double, 4>{pt.x * w, pt.y * w, pt.z * w, w};
    };

    std::vector<std::array<double, 4>> Q(n + 1 + r);
    for (int i = 0; i <= k - p; ++i) Q[i] = hom(i);
    for (int i = k - s; i <= n; ++i) Q[i + r] = hom(i);
    std::vector<std::array<double, 4>> Rw(p - s + 1);
    for (int i = 0; i <= p - s; ++i) Rw[i] = hom(k - p + i);

    int L = 0;
    for (int j = 1; j <= r; ++j) {
        L = k - p + j;
        for (int i = 0; i <= p - j - s; ++i) {
            double alpha = (u - c.knots[L + i]) / (c.knots[i + k + 1] - c.knots[L + i]);
            for (int d = 0; d < 4; ++d)
                Rw[i][d] = alpha * Rw[i + 1][d] + (1.0 - alpha) * Rw[i][d];
        }
        Q[L] = Rw[0];
        Q[k + r - j - s] = Rw[p - j - s];
    }
    for (int i = L + 1; i < k - s; ++i) Q[i] = Rw[i - L];

    NurbsCurve3 out;
    out.degree = p;
    out.closed = c.closed;
    out.knots = c.knots;
    out.knots.insert(out.knots.begin() + k + 1, r, u);
    out.control_points.resize(Q.size());
    out.weights.resize(Q.size());
    for (size_t i = 0; i < Q.size(); ++i) {
        out.weights[i] = Q[i][3];
        out.control_points[i] = Vec3{Q[i][0], Q[i][1], Q[i][2]} / Q[i][3];
    }
    return out;
}

// Split into the pieces over [start, u] and [u, end].
inline std::pair<NurbsCurve3, NurbsCurve3> split_curve(const NurbsCurve3& c, double u) {
    detail::check_domain(c, u);
    if (u <= c.domain_start() || u >= c.domain_end())
        throw geometry_error("split parameter must be interior to the domain");
    const int p = c.degree;
    int s = 0;
    for (double kn : c.knots)
        if (kn == u) ++s;
    NurbsCurve3 full = insert_knot(c, u, p - s);
    size_t ks = 0;
    while (full.knots[ks] != u) ++ks;

    NurbsCurve3 left, right;
    left.degree = right.degree = p;
    left.knots.assign(full.knots.begin(), full.knots.begin() + ks + p);
    left.knots.push_back(u);
    left.control_points.assign(full.control_points.begin(), full.control_points.begin() + ks);
    left.weights.assign(full.weights.begin(), full.weights.begin() + ks);

    right.knots.assign(1, u);
    right.knots.insert(right.knots.end(), full.knots.begin() + ks, full.knots.end());
    right.control_points.assign(full.control_points.begin() + ks - 1, full.control_points.end());
    right.weights.assign(full.weights.begin() + ks - 1, full.weights.end());
    return {std::move(left), std::move(right)};
}

// Bézier decomposition by repeated knot insertion; segments concatenate to the parent curve.
inline std::vector<BezierSegment> decompose_to_bezier(const NurbsCurve3& c) {
    validate(c);
    const int p = c.degree;
    const int n = static_cast<int>(c.control_points.size()) - 1;
    const int m = n + p + 1;
    const auto& U = c.knots;

    auto hom = [&](int i) {
        const Point3& pt = c.control_points[i];
        double w = c.weights[i];
        return std::array<double, 4>{pt.x * w, pt.y * w, pt.z * w, w};
    };

    std::vector<double> breaks; // distinct knot values
    for (int i = p; i <= m - p; ++i)
        if (breaks.empty() || U[i] != breaks.back()) breaks.push_back(U[i]);

    std::vector<std::vector<std::array<double, 4>>> Q;
    Q.emplace_back(p + 1);
    for (int i = 0; i <= p; ++i) Q[0][i] = hom(i);

    int a = p, b = p + 1, nb = 0;
    std::vector<double> alphas(p);
    while (b < m) {
        int i = b;
        while (b < m && U[b + 1] == U[b]) ++b;
        int mult = b - i + 1;
        if (mult < p) {
            double numer = U[b] - U[a];
            for (int j = p; j > mult; --j) alphas[j - mult - 1] = numer / (U[a + j] - U[a]);
            int r = p - mult;
            for (int j = 1; j <= r; ++j) {
                int save = r - j, sidx = mult + j;
                for (int k = p; k >= sidx; --k) {
                    double alpha = alphas[k - sidx];
                    for (int d = 0; d < 4; ++d)
                        Q[nb][k][d] = alpha * Q[nb][k][d] + (1.0 - alpha) * Q[nb][k - 1][d];
                }
                if (b < m) {
                    if (static_cast<int>(Q.size()) == nb + 1) Q.emplace_back(p + 1);
                    Q[nb + 1][save] = Q[nb][p];
                }
            }
        }
        ++nb;
        if (b < m) {
            if (static_cast<int>(Q.size()) == nb) Q.emplace_back(p + 1);
            for (int j = p - mult; j <= p; ++j) Q[nb][j] = hom(b - p + j);
            a = b;
            b = b + 1;
        }
    }

    std::vector<BezierSegment> segs(nb);
    for (int sidx = 0; sidx < nb; ++sidx) {
        auto& seg = segs[sidx];
        seg.degree = p;
        seg.t0 = breaks[sidx];
        seg.t1 = breaks[sidx + 1];
        seg.control_points.resize(p + 1);
        seg.weights.resize(p + 1);
        for (int j = 0; j <= p; ++j) {
            seg.weights[j] = Q[sidx][j][3];
            seg.control_points[j] =
                Vec3{Q[sidx][j][0], Q[sidx][j][1], Q[sidx][j][2]} / Q[sidx][j][3];
        }
    }
    return segs;
}

} // namespace ruloff
