#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ruloff/parallel.hpp"
#include "ruloff/spline.hpp"
#include "ruloff/subdivide.hpp"

namespace ruloff {

// Directional offset rule: each point moves distance d along N = v x k, with k
// either one constant direction or a per-sample field k(t).
struct OffsetRule {
    double distance = 0;
    Vec3 k{0, 0, 1};
    std::function<Vec3(double)> field; // overrides k when set

    Vec3 k_at(double t) const { return field ? field(t) : k; }
};

// Offset along the outward principal normal: k(t) is the unit binormal, so
// N = v x b = -n points away from the center of curvature.
inline OffsetRule binormal_rule(const NurbsCurve3& curve, double d) {
    OffsetRule rule;
    rule.distance = d;
    rule.field = [curve](double t) {
        auto der = derivatives(curve, t, 2);
        Vec3 b = cross(der[0], der[1]);
        double n = norm(b);
        if (n < 1e-12 * norm(der[0]))
            throw geometry_error("binormal undefined on straight span at t=" + std::to_string(t));
        return b / n;
    };
    return rule;
}

inline Vec3 offset_direction(const Vec3& unit_tangent, const Vec3& k) {
    Vec3 n = cross(unit_tangent, k);
    double len = norm(n);
    if (len < 1e-8)
        throw geometry_error("degenerate offset direction: tangent parallel to direction k");
    return n / len;
}

struct RawOffsetEntry {
    OffsetSample source;
    Point3 offset_point;
};

struct RawOffsetPolyline {
    std::vector<RawOffsetEntry> entries;
    bool closed = false;

    std::vector<Point3> offset_points() const {
        std::vector<Point3> p;
        p.reserve(entries.size());
        for (const auto& e : entries) p.push_back(e.offset_point);
        return p;
    }
};

inline RawOffsetPolyline raw_offset(const std::vector<OffsetSample>& samples,
                                    const OffsetRule& rule) {
    if (samples.empty())
        throw geometry_error("cannot offset an empty sample list");
    RawOffsetPolyline out;
    out.entries.reserve(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        Vec3 n;
        try {
            n = offset_direction(s.unit_tangent, rule.k_at(s.parameter));
        } catch (const geometry_error& e) {
            throw geometry_error(std::string(e.what()) + " (sample " + std::to_string(i) +
                                 ", t=" + std::to_string(s.parameter) + ")");
        }
        out.entries.push_back({s, s.position + rule.distance * n});
    }
    return out;
}

// Cubic spline through the offset points; clamped when end tangents are supplied
// (geometric direction x total chord length), natural otherwise.
inline NurbsCurve3 fit_offset_curve(const RawOffsetPolyline& chain,
                                    std::optional<std::pair<Vec3, Vec3>> end_tangents = {}) {
    if (chain.entries.size() < 3)
        throw geometry_error("offset chain needs at least 3 points to fit a curve");
    SplineEnds ends;
    if (end_tangents) {
        double chord = 0;
        for (size_t i = 1; i < chain.entries.size(); ++i)
            chord += distance(chain.entries[i].offset_point, chain.entries[i - 1].offset_point);
        auto scaled = [chord](const Vec3& t) {
            double n = norm(t);
            if (n < 1e-14) throw geometry_error("zero end tangent for offset fit");
            return t * (chord / n);
        };
        ends = clamped_ends(scaled(end_tangents->first), scaled(end_tangents->second));
    }
    return cubic_spline_interpolate(chain.offset_points(), ends);
}

// Derivative of the offset curve C(t) + d N(t) by central difference of the exact
// direction field; used for clamped spline end tangents.
inline Vec3 offset_curve_tangent(const NurbsCurve3& curve, const OffsetRule& rule, double t) {
    const double a = curve.domain_start(), b = curve.domain_end();
    const double h = 1e-6 * (b - a);
    double t0 = std::max(a, t - h), t1 = std::min(b, t + h);
    auto off = [&](double tt) {
        Vec3 v = unit_tangent(curve, tt);
        return evaluate(curve, tt) + rule.distance * offset_direction(v, rule.k_at(tt));
    };
    return (off(t1) - off(t0)) / (t1 - t0);
}

struct ErrorStats {
    double min = 0, max = 0, mean = 0, sd = 0;
};

inline double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = 0;
    for (double x : xs) m += x;
    m /= xs.size();
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / (xs.size() - 1));
}

inline ErrorStats stats_of(const std::vector<double>& xs) {
    ErrorStats st;
    if (xs.empty()) return st;
    st.min = st.max = xs[0];
    for (double x : xs) {
        st.min = std::min(st.min, x);
        st.max = std::max(st.max, x);
        st.mean += x;
    }
    st.mean /= xs.size();
    st.sd = sample_sd(xs);
    return st;
}

// Distance from a point to a curve: dense seeding plus golden-section refinement.
inline double point_curve_distance(const Point3& q, const NurbsCurve3& curve,
                                   int seeds = 1024) {
    const double a = curve.domain_start(), b = curve.domain_end();
    double best = std::numeric_limits<double>::max();
    int best_i = 0;
    for (int i = 0; i <= seeds; ++i) {
        double t = a + (b - a) * i / seeds;
        double d2 = norm2(evaluate(curve, t) - q);
        if (d2 < best) {
            best = d2;
            best_i = i;
        }
    }
    double lo = a + (b - a) * std::max(0, best_i - 1) / seeds;
    double hi = a + (b - a) * std::min(seeds, best_i + 1) / seeds;
    auto f = [&](double t) { return norm2(evaluate(curve, t) - q); };
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > 1e-10 * (b - a)) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    return std::sqrt(f((lo + hi) / 2));
}

// Uniformly sample the offset curve and measure the min distance to the original;
// the statistics of those distances quantify offset accuracy.
inline ErrorStats offset_error_stats(const NurbsCurve3& offset_curve, const NurbsCurve3& original,
                                     int samples = 500) {
    if (samples < 2)
        throw geometry_error("error statistics need at least 2 samples");
    const double a = offset_curve.domain_start(), b = offset_curve.domain_end();
    std::vector<double> dist(samples);
    parallel_for(samples, [&](size_t i) {
        double t = a + (b - a) * static_cast<double>(i) / (samples - 1);
        dist[i] = point_curve_distance(evaluate(offset_curve, t), original);
    });
    return stats_of(dist);
}

} // namespace ruloff
