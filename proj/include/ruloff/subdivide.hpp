#pragma once

#include <cmath>
#include <vector>

#include "ruloff/nurbs.hpp"

namespace ruloff {

// One subdivision point ready for offsetting.
struct OffsetSample {
    Point3 position;
    double parameter = 0;        // global curve parameter
    double curvature_radius = 0; // kInfiniteRadius on straight pieces
    Vec3 unit_tangent;
};

// Parameters of one Bézier piece's subdivision: the chordal-deviation base grid
// plus the curvature/offset-distance refinement.
struct SubdivisionPlan {
    std::vector<double> base_params;    // global parameters, endpoints included
    std::vector<double> refined_params; // superset of base_params
    std::vector<int> m;                 // insertions per base interval
};

enum class SubdivisionMode { traditional, improved };

inline constexpr int kMaxInsertions = 64; // guards floor(d/r) blow-up near cusps

// Bound on |f''| over the piece's local [0,1] parameter, sampled uniformly at
// (degree+1) points for polynomial pieces and 2(degree+1) for rational ones.
inline double second_derivative_bound(const BezierSegment& seg) {
    if (seg.degree < 2) return 0.0;
    NurbsCurve3 local = segment_as_curve(seg);
    const int count = seg.rational() ? 2 * (seg.degree + 1) : seg.degree + 1;
    double M = 0.0;
    for (int i = 0; i < count; ++i) {
        double t = static_cast<double>(i) / (count - 1);
        M = std::max(M, norm(derivatives(local, t, 2)[1]));
    }
    return M;
}

// Subinterval count n such that each chord deviates from the curve by at most eps:
// deviation <= (1/8)(1/n)^2 M  =>  n = ceil(sqrt(M/(8 eps))).
inline int base_count(double M, double eps) {
    if (!(eps > 0))
        throw geometry_error("subdivision tolerance must be positive");
    if (M <= 0) return 1;
    double s = std::sqrt(M / (8.0 * eps));
    return std::max(1, static_cast<int>(std::ceil(s - 1e-9)));
}

// Chord length of a radius-r arc of opening angle alpha after radial offset by d.
inline double arc_offset_chord(double r, double d, double alpha) {
    if (!(r > 0))
        throw geometry_error("arc radius must be positive");
    if (!(alpha > 0) || alpha > 3.14159265358979323846 + 1e-12)
        throw geometry_error("arc angle must lie in (0, pi]");
    return 2.0 * (r + d) * std::sin(alpha / 2.0);
}

// Insert m = floor(d / r_mean) extra parameters per base interval, r_mean the
// arithmetic mean of the end-point curvature radii; uniform in parameter.
inline SubdivisionPlan refine_for_offset(const SubdivisionPlan& base,
                                         const std::vector<OffsetSample>& samples, double d) {
    if (d < 0)
        throw geometry_error("offset distance must be non-negative");
    if (samples.size() != base.base_params.size())
        throw geometry_error("one sample per base parameter required");
    SubdivisionPlan out;
    out.base_params = base.base_params;
    out.m.assign(base.base_params.size() - 1, 0);
    for (size_t i = 0; i + 1 < base.base_params.size(); ++i) {
        double r0 = samples[i].curvature_radius;
        double r1 = samples[i + 1].curvature_radius;
        double r_mean = 0.5 * (r0 + r1); // infinite if either end is straight
        int m = 0;
        if (std::isfinite(r_mean) && r_mean > 0) // clamp before the int cast: d/r can overflow
            m = static_cast<int>(std::min<double>(kMaxInsertions, std::floor(d / r_mean)));
        out.m[i] = m;
        double a = base.base_params[i], b = base.base_params[i + 1];
        out.refined_params.push_back(a);
        for (int j = 1; j <= m; ++j)
            out.refined_params.push_back(a + (b - a) * j / (m + 1));
    }
    out.refined_params.push_back(base.base_params.back());
    return out;
}

inline OffsetSample sample_at(const NurbsCurve3& curve, double t) {
    OffsetSample s;
    s.position = evaluate(curve, t);
    s.parameter = t;
    s.curvature_radius = curvature_radius(curve, t);
    s.unit_tangent = unit_tangent(curve, t);
    return s;
}

// Full subdivision pipeline: decompose into Bézier pieces, size each piece by the
// chordal-deviation bound, then (improved mode) refine by offset distance / curvature.
inline std::vector<OffsetSample> subdivide_curve(const NurbsCurve3& curve, double eps, double d,
                                                 SubdivisionMode mode) {
    validate(curve);
    std::vector<OffsetSample> out;
    for (const auto& seg : decompose_to_bezier(curve)) {
        SubdivisionPlan plan;
        const int n = base_count(second_derivative_bound(seg), eps);
        for (int i = 0; i <= n; ++i)
            plan.base_params.push_back(seg.t0 + (seg.t1 - seg.t0) * i / n);

        std::vector<OffsetSample> base_samples;
        for (double t : plan.base_params) base_samples.push_back(sample_at(curve, t));

        std::vector<double> params;
        if (mode == SubdivisionMode::improved)
            params = refine_for_offset(plan, base_samples, d).refined_params;
        else
            params = plan.base_params;

        for (double t : params) {
            if (!out.empty() && t <= out.back().parameter)
                continue; // merge duplicate piece joins
            out.push_back(sample_at(curve, t));
        }
    }
    return out;
}

} // namespace ruloff
