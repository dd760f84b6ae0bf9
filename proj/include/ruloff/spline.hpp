#pragma once

#include <optional>
#include <vector>

#include "ruloff/nurbs.hpp"

namespace ruloff {

// End conditions for cubic spline interpolation. Clamped tangents are derivatives
// with respect to the normalized chord-length parameter (so a geometric unit tangent
// should be scaled by the total chord length).
struct SplineEnds {
    std::optional<std::pair<Vec3, Vec3>> clamped; // nullopt -> natural
};

inline SplineEnds natural_ends() { return {}; }
inline SplineEnds clamped_ends(const Vec3& t_start, const Vec3& t_end) {
    return {std::make_pair(t_start, t_end)};
}

// C2 cubic spline through the points, chord-length parameterized on [0,1],
// returned as a clamped cubic NURBS (composite Bézier with triple interior knots).
inline NurbsCurve3 cubic_spline_interpolate(const std::vector<Point3>& pts,
                                            const SplineEnds& ends = {}) {
    const size_t n = pts.size();
    if (n < 3)
        throw geometry_error("spline interpolation needs at least 3 points");

    std::vector<double> u(n, 0.0);
    for (size_t i = 1; i < n; ++i) {
        double d = distance(pts[i], pts[i - 1]);
        if (d < 1e-14)
            throw geometry_error("duplicate consecutive points at index " + std::to_string(i));
        u[i] = u[i - 1] + d;
    }
    const double total = u.back();
    for (auto& v : u) v /= total;

    // Tridiagonal system for the slopes m_i (Hermite form of the C2 spline).
    const size_t N = n - 1; // interval count
    std::vector<double> h(N);
    for (size_t i = 0; i < N; ++i) h[i] = u[i + 1] - u[i];

    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);
    std::vector<Vec3> rhs(n);
    if (ends.clamped) {
        b[0] = 1.0;
        rhs[0] = ends.clamped->first;
        b[n - 1] = 1.0;
        rhs[n - 1] = ends.clamped->second;
    } else {
        // natural: S''=0 at both ends
        b[0] = 2.0;
        c[0] = 1.0;
        rhs[0] = 3.0 / h[0] * (pts[1] - pts[0]);
        a[n - 1] = 1.0;
        b[n - 1] = 2.0;
        rhs[n - 1] = 3.0 / h[N - 1] * (pts[n - 1] - pts[n - 2]);
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        a[i] = 1.0 / h[i - 1];
        b[i] = 2.0 * (1.0 / h[i - 1] + 1.0 / h[i]);
        c[i] = 1.0 / h[i];
        rhs[i] = 3.0 * ((pts[i] - pts[i - 1]) / (h[i - 1] * h[i - 1]) +
                        (pts[i + 1] - pts[i]) / (h[i] * h[i]));
    }

    // Thomas solve (scalar coefficients, vector right-hand side).
    std::vector<double> cp(n);
    std::vector<Vec3> dp(n);
    cp[0] = c[0] / b[0];
    dp[0] = rhs[0] / b[0];
    for (size_t i = 1; i < n; ++i) {
        double m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (rhs[i] - a[i] * dp[i - 1]) / m;
    }
    std::vector<Vec3> slope(n);
    slope[n - 1] = dp[n - 1];
    for (size_t i = n - 1; i-- > 0;) slope[i] = dp[i] - cp[i] * slope[i + 1];

    // Assemble as composite cubic Bézier: each interval contributes
    // b0=y_i, b1=y_i+h/3*m_i, b2=y_{i+1}-h/3*m_{i+1}, b3=y_{i+1}.
    NurbsCurve3 out;
    out.degree = 3;
    out.knots.assign(4, 0.0);
    out.control_points.push_back(pts[0]);
    for (size_t i = 0; i < N; ++i) {
        out.control_points.push_back(pts[i] + (h[i] / 3.0) * slope[i]);
        out.control_points.push_back(pts[i + 1] - (h[i] / 3.0) * slope[i + 1]);
        out.control_points.push_back(pts[i + 1]);
        if (i + 1 < N) out.knots.insert(out.knots.end(), 3, u[i + 1]);
    }
    out.knots.insert(out.knots.end(), 4, 1.0);
    out.weights.assign(out.control_points.size(), 1.0);
    return out;
}

} // namespace ruloff
