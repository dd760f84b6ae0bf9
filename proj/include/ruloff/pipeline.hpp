#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ruloff/curve_io.hpp"
#include "ruloff/obj_io.hpp"
#include "ruloff/offset.hpp"
#include "ruloff/overlap.hpp"
#include "ruloff/subdivide.hpp"
#include "ruloff/surface.hpp"
#include "ruloff/svg.hpp"
#include "ruloff/transition.hpp"

namespace ruloff {

// Key-value offset job description: `key = value` lines, # comments allowed.
struct PipelineSpec {
    std::string curve_path;
    double distance = -1;
    bool binormal_direction = true; // `direction = binormal` | `direction = x y z`
    Vec3 direction{0, 0, 1};
    Vec3 parting{0, 0, 1};
    bool have_parting = false;
    double epsilon = 1.0;
    SubdivisionMode mode = SubdivisionMode::improved;
    double trim_d = -1; // default 0.2 * distance
    int j_samples = 100;
    int swarm = 300;
    double inertia = 0.9, c1 = 2.0, c2 = 2.0;
    int max_iter = 2000;
    double target = 0.1;
    std::uint64_t seed = 0;
    std::string out_prefix = "out";
    bool emit_mesh = false, emit_svg = false;
    int nu = 24, nv = 4;

    Vec3 parting_k() const {
        if (have_parting) return normalized(parting);
        return binormal_direction ? Vec3{0, 0, 1} : normalized(direction);
    }
    double trim_length() const { return trim_d >= 0 ? trim_d : 0.2 * distance; }

    static PipelineSpec parse(std::istream& in, const std::string& base_dir = ".");
    static PipelineSpec parse_file(const std::string& path);
};

namespace detail {

inline Vec3 parse_vec3(const std::string& value, const std::string& key) {
    auto toks = split_ws(value);
    if (toks.size() != 3) throw parse_error(key + " needs three numbers");
    return {parse_double(toks[0], key), parse_double(toks[1], key), parse_double(toks[2], key)};
}

} // namespace detail

inline PipelineSpec PipelineSpec::parse(std::istream& in, const std::string& base_dir) {
    PipelineSpec s;
    std::string line;
    bool have_curve = false, have_distance = false;
    while (std::getline(in, line)) {
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (!detail::split_ws(line).empty())
                throw parse_error("expected `key = value`, got '" + line + "'");
            continue;
        }
        auto trim = [](std::string v) {
            size_t a = v.find_first_not_of(" \t\r");
            size_t b = v.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : v.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (value.empty()) throw parse_error("empty value for key '" + key + "'");
        auto num = [&] { return detail::parse_double(value, key); };
        if (key == "curve") {
            std::filesystem::path p(value);
            s.curve_path = p.is_absolute() ? value : (std::filesystem::path(base_dir) / p).string();
            have_curve = true;
        } else if (key == "distance") {
            s.distance = num();
            have_distance = true;
        } else if (key == "direction") {
            if (value == "binormal")
                s.binormal_direction = true;
            else {
                s.binormal_direction = false;
                s.direction = detail::parse_vec3(value, key);
                if (norm(s.direction) < 1e-12) throw parse_error("direction must be nonzero");
            }
        } else if (key == "parting") {
            s.parting = detail::parse_vec3(value, key);
            if (norm(s.parting) < 1e-12) throw parse_error("parting must be nonzero");
            s.have_parting = true;
        } else if (key == "epsilon")
            s.epsilon = num();
        else if (key == "mode") {
            if (value == "traditional")
                s.mode = SubdivisionMode::traditional;
            else if (value == "improved")
                s.mode = SubdivisionMode::improved;
            else
                throw parse_error("mode must be traditional or improved");
        } else if (key == "trim_d")
            s.trim_d = num();
        else if (key == "j_samples")
            s.j_samples = static_cast<int>(num());
        else if (key == "swarm")
            s.swarm = static_cast<int>(num());
        else if (key == "inertia")
            s.inertia = num();
        else if (key == "c1")
            s.c1 = num();
        else if (key == "c2")
            s.c2 = num();
        else if (key == "max_iter")
            s.max_iter = static_cast<int>(num());
        else if (key == "target")
            s.target = num();
        else if (key == "seed")
            s.seed = static_cast<std::uint64_t>(num());
        else if (key == "out_prefix") {
            std::filesystem::path p(value);
            s.out_prefix = p.is_absolute() ? value : (std::filesystem::path(base_dir) / p).string();
        } else if (key == "emit_mesh")
            s.emit_mesh = num() != 0;
        else if (key == "emit_svg")
            s.emit_svg = num() != 0;
        else if (key == "nu")
            s.nu = static_cast<int>(num());
        else if (key == "nv")
            s.nv = static_cast<int>(num());
        else
            throw parse_error("unknown key '" + key + "'");
    }
    if (!have_curve) throw parse_error("spec is missing the curve key");
    if (!have_distance || s.distance < 0) throw parse_error("spec needs distance >= 0");
    if (s.epsilon <= 0) throw parse_error("epsilon must be positive");
    if (s.trim_d > 0 && s.distance == 0) throw parse_error("trim_d requires a positive distance");
    return s;
}

inline PipelineSpec PipelineSpec::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open spec file: " + path);
    return parse(in, std::filesystem::path(path).parent_path().string());
}

// ---------------------------------------------------------------------------

inline NurbsCurve3 restrict_curve(const NurbsCurve3& c, double a, double b) {
    const double lo = c.domain_start(), hi = c.domain_end();
    const double tol = 1e-12 * (hi - lo);
    if (!(b - a > tol)) throw geometry_error("empty parameter range");
    NurbsCurve3 cur = c;
    if (b < hi - tol) cur = split_curve(cur, b).first;
    if (a > lo + tol) cur = split_curve(cur, a).second;
    return cur;
}

struct PieceSplit {
    std::vector<NurbsCurve3> pieces; // partition of the domain at G0 corners
    bool closed = false;
    bool seam_smooth = true; // closed curves: no corner at the wrap-around
};

namespace detail {

inline Vec3 bezier_end_dir(const BezierSegment& s, bool at_end) {
    const auto& cp = s.control_points;
    const int n = s.degree;
    if (at_end) {
        for (int i = n - 1; i >= 0; --i)
            if (norm(cp[n] - cp[i]) > 1e-12) return cp[n] - cp[i];
    } else {
        for (int i = 1; i <= n; ++i)
            if (norm(cp[i] - cp[0]) > 1e-12) return cp[i] - cp[0];
    }
    return {};
}

inline bool tangent_corner(const Vec3& e, const Vec3& s) {
    if (norm(e) < 1e-12 || norm(s) < 1e-12) return false;
    return std::atan2(norm(cross(e, s)), dot(e, s)) > 1e-6;
}

} // namespace detail

inline PieceSplit split_at_corners(const NurbsCurve3& curve) {
    auto segs = decompose_to_bezier(curve);
    std::vector<double> corners;
    for (size_t i = 0; i + 1 < segs.size(); ++i)
        if (detail::tangent_corner(detail::bezier_end_dir(segs[i], true),
                                   detail::bezier_end_dir(segs[i + 1], false)))
            corners.push_back(segs[i].t1);
    PieceSplit out;
    out.closed = curve.closed;
    if (curve.closed)
        out.seam_smooth = !detail::tangent_corner(detail::bezier_end_dir(segs.back(), true),
                                                  detail::bezier_end_dir(segs.front(), false));
    NurbsCurve3 cur = curve;
    for (double u : corners) {
        auto [head, tail] = split_curve(cur, u);
        head.closed = false;
        out.pieces.push_back(std::move(head));
        cur = std::move(tail);
    }
    cur.closed = corners.empty() ? curve.closed : false;
    out.pieces.push_back(std::move(cur));
    return out;
}

// ---------------------------------------------------------------------------

struct ChainResult {
    NurbsCurve3 curve;
    std::vector<ChainVertex> vertices;
    int piece = 0;
    double param_start = 0, param_end = 0; // source-parameter range (post-trim)
    bool fitted = false;
};

struct JointResult {
    std::string origin; // "corner" (tangent break) or "overlap" (eliminated loop)
    JointKind kind = JointKind::smooth;
    int chain_before = -1, chain_after = -1;
    Point3 x0{}, x1{};
    Point3 co_vertex{};
    bool has_co_vertex = false;
    Vec2 crossing{};
    bool has_crossing = false;
    NurbsCurve3 bridge;
    bool has_bridge = false;
    double fitness = -1; // convex transitions only
    double gap_param_a = 0, gap_param_b = 0;
};

struct OffsetResult {
    PipelineSpec spec;
    NurbsCurve3 original;
    std::vector<NurbsCurve3> pieces;
    std::vector<ChainResult> chains;
    std::vector<JointResult> joints;
    std::vector<ErrorStats> chain_stats;
    std::vector<std::vector<Vec2>> raw_projection;
    int eliminated_loops = 0;
};

namespace detail {

inline OffsetRule rule_for_piece(const PipelineSpec& spec, const NurbsCurve3& piece) {
    if (spec.binormal_direction) return binormal_rule(piece, spec.distance);
    OffsetRule r;
    r.distance = spec.distance;
    r.k = normalized(spec.direction);
    return r;
}

inline NurbsCurve3 straight_cubic(const Point3& p0, const Point3& p1) {
    return make_bezier(3, {p0, lerp(p0, p1, 1.0 / 3.0), lerp(p0, p1, 2.0 / 3.0), p1});
}

inline ChainResult fit_chain(const std::vector<ChainVertex>& vs, int piece_idx,
                             const NurbsCurve3& piece, const OffsetRule& rule) {
    ChainResult cr;
    cr.vertices = vs;
    cr.piece = piece_idx;
    cr.param_start = vs.front().source_param;
    cr.param_end = vs.back().source_param;
    if (vs.size() < 2) return cr;
    if (vs.size() == 2) {
        cr.curve = straight_cubic(vs[0].p, vs[1].p);
        cr.fitted = true;
        return cr;
    }
    RawOffsetPolyline chain;
    for (const auto& v : vs) {
        RawOffsetEntry e;
        e.source.parameter = v.source_param;
        e.offset_point = v.p;
        chain.entries.push_back(e);
    }
    Vec3 t0 = offset_curve_tangent(piece, rule, vs.front().source_param);
    Vec3 t1 = offset_curve_tangent(piece, rule, vs.back().source_param);
    cr.curve = fit_offset_curve(chain, std::make_pair(t0, t1));
    cr.fitted = true;
    return cr;
}

} // namespace detail

// Full offset pipeline: split at tangent corners, subdivide and offset each
// piece, eliminate projected loops, fit chains, then repair every joint
// (convex gap -> rational quartic, concave overlap -> trim + cubic bridge,
// eliminated-loop gap -> cubic bridge).
inline OffsetResult run_offset(const PipelineSpec& spec) {
    OffsetResult out;
    out.spec = spec;
    out.original = read_curve_file(spec.curve_path);
    const Vec3 k = spec.parting_k();

    PieceSplit split = split_at_corners(out.original);
    out.pieces = split.pieces;
    const size_t npieces = out.pieces.size();

    // offset every piece and collect chains
    std::vector<int> first_chain(npieces), chain_count(npieces, 0);
    std::vector<OffsetRule> rules;
    for (size_t pi = 0; pi < npieces; ++pi) {
        const NurbsCurve3& piece = out.pieces[pi];
        OffsetRule rule = detail::rule_for_piece(spec, piece);
        rules.push_back(rule);
        auto samples = subdivide_curve(piece, spec.epsilon, spec.distance, spec.mode);
        RawOffsetPolyline raw = raw_offset(samples, rule);
        raw.closed = piece.closed && split.seam_smooth;

        std::vector<Vec2> proj;
        const ProjectionBasis basis = projection_basis(k);
        for (const auto& e : raw.entries) proj.push_back(basis.project(e.offset_point));
        out.raw_projection.push_back(std::move(proj));

        TrimmedChains trimmed;
        if (raw.entries.size() >= 3) {
            trimmed = eliminate_loops(raw, k);
        } else {
            std::vector<ChainVertex> vs;
            for (const auto& e : raw.entries) vs.push_back({e.offset_point, e.source.parameter});
            trimmed.chains.push_back(vs);
        }
        out.eliminated_loops += static_cast<int>(trimmed.joints.size());

        first_chain[pi] = static_cast<int>(out.chains.size());
        chain_count[pi] = static_cast<int>(trimmed.chains.size());
        for (const auto& ch : trimmed.chains)
            out.chains.push_back(detail::fit_chain(ch, static_cast<int>(pi), piece, rule));

        for (const auto& j : trimmed.joints) {
            JointResult jr;
            jr.origin = "overlap";
            jr.chain_before = first_chain[pi] + j.chain_before;
            jr.chain_after = first_chain[pi] + j.chain_after;
            jr.x0 = j.a;
            jr.x1 = j.b;
            jr.crossing = j.crossing;
            jr.has_crossing = true;
            jr.gap_param_a = j.param_a;
            jr.gap_param_b = j.param_b;
            jr.co_vertex = evaluate(piece, std::clamp(0.5 * (j.param_a + j.param_b),
                                                      piece.domain_start(), piece.domain_end()));
            jr.has_co_vertex = true;
            out.joints.push_back(jr);
        }
    }

    // classify + repair gaps left by loop elimination
    for (auto& jr : out.joints) {
        ChainResult& cb = out.chains[jr.chain_before];
        ChainResult& ca = out.chains[jr.chain_after];
        if (!cb.fitted || !ca.fitted) continue;
        Vec3 t_end = unit_tangent(cb.curve, cb.curve.domain_end());
        Vec3 t_start = unit_tangent(ca.curve, ca.curve.domain_start());
        jr.kind = classify_joint(t_end, t_start, k);
        const double weld_tol = std::max(1e-9, 1e-9 * spec.distance);
        if (distance(jr.x0, jr.x1) > weld_tol) {
            jr.bridge = hermite_cubic_bridge(jr.x0, t_end, jr.x1, t_start);
            jr.has_bridge = true;
        }
    }

    // corner joints between consecutive pieces (wrapping when closed)
    size_t ncorner = 0;
    if (npieces > 1)
        ncorner = split.closed ? npieces : npieces - 1;
    else if (split.closed && !split.seam_smooth)
        ncorner = 1; // single piece whose seam is the corner
    for (size_t ci = 0; ci < ncorner; ++ci) {
        const size_t pi = ci, pj = (ci + 1) % npieces;
        JointResult jr;
        jr.origin = "corner";
        jr.chain_before = first_chain[pi] + chain_count[pi] - 1;
        jr.chain_after = first_chain[pj];
        ChainResult& left = out.chains[jr.chain_before];
        ChainResult& right = out.chains[jr.chain_after];
        if (!left.fitted || !right.fitted) continue;

        Vec3 e_orig = unit_tangent(out.pieces[pi], out.pieces[pi].domain_end());
        Vec3 s_orig = unit_tangent(out.pieces[pj], out.pieces[pj].domain_start());
        jr.kind = classify_joint(e_orig, s_orig, k);
        jr.co_vertex = evaluate(out.pieces[pi], out.pieces[pi].domain_end());
        jr.has_co_vertex = true;

        if (jr.kind == JointKind::convex) {
            JointRecord rec;
            rec.kind = JointKind::convex;
            rec.x0 = evaluate(left.curve, left.curve.domain_end());
            rec.x1 = evaluate(right.curve, right.curve.domain_start());
            rec.t0 = unit_tangent(left.curve, left.curve.domain_end());
            rec.t1 = unit_tangent(right.curve, right.curve.domain_start());
            rec.p = jr.co_vertex;
            PsoConfig cfg;
            cfg.swarm_size = spec.swarm;
            cfg.inertia = spec.inertia;
            cfg.c1 = spec.c1;
            cfg.c2 = spec.c2;
            cfg.max_iter = spec.max_iter;
            cfg.target = spec.target;
            cfg.seed = spec.seed + 1000003 * out.joints.size();
            SphericalQuartic q = convex_transition(rec, spec.distance, cfg, spec.j_samples);
            jr.bridge = q.as_curve();
            jr.has_bridge = true;
            jr.fitness = q.fitness;
            jr.x0 = rec.x0;
            jr.x1 = rec.x1;
        } else if (jr.kind == JointKind::concave && jr.chain_before != jr.chain_after) {
            ConcaveRepair rep = concave_transition(left.curve, right.curve, k, spec.trim_length());
            left.curve = rep.left;
            right.curve = rep.right;
            jr.bridge = rep.bridge;
            jr.has_bridge = true;
            jr.x0 = rep.trim_left_point;
            jr.x1 = rep.trim_right_point;
        } else {
            jr.x0 = evaluate(left.curve, left.curve.domain_end());
            jr.x1 = evaluate(right.curve, right.curve.domain_start());
        }
        out.joints.push_back(jr);
    }

    // accuracy report against the source pieces
    for (const auto& ch : out.chains) {
        if (!ch.fitted) {
            out.chain_stats.push_back({});
            continue;
        }
        out.chain_stats.push_back(
            offset_error_stats(ch.curve, out.pieces[ch.piece], 500));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Artifact emission

namespace detail {

inline std::string csv3(const Point3& p) {
    return fmt_double(p.x) + "," + fmt_double(p.y) + "," + fmt_double(p.z);
}

} // namespace detail

inline RuledMesh build_mesh(const OffsetResult& r) {
    RuledMesh mesh;
    const int nu = r.spec.nu, nv = r.spec.nv;
    for (const auto& ch : r.chains) {
        if (!ch.fitted) continue;
        RuledPatch patch;
        patch.p = restrict_curve(r.pieces[ch.piece], ch.param_start, ch.param_end);
        patch.q = ch.curve;
        mesh.append(tessellate(patch, nu, nv));
    }
    for (const auto& j : r.joints) {
        if (!j.has_bridge) continue;
        if (j.origin == "corner") {
            mesh.append(gap_fan(j.co_vertex, j.bridge, nu));
        } else {
            RuledPatch patch;
            patch.p = restrict_curve(r.pieces[r.chains[j.chain_before].piece], j.gap_param_a,
                                     j.gap_param_b);
            patch.q = j.bridge;
            mesh.append(tessellate(patch, nu, nv));
        }
    }
    return mesh;
}

inline SvgPlot projection_plot(const OffsetResult& r) {
    SvgPlot plot;
    plot.title = "offset projection";
    const ProjectionBasis basis = projection_basis(r.spec.parting_k());
    for (const auto& raw : r.raw_projection) plot.polylines.push_back({raw, "#bbbbbb"});
    for (const auto& ch : r.chains) {
        if (!ch.fitted) continue;
        SvgPolyline pl;
        for (int i = 0; i <= 200; ++i) {
            double t = ch.curve.domain_start() +
                       (ch.curve.domain_end() - ch.curve.domain_start()) * i / 200.0;
            pl.points.push_back(basis.project(evaluate(ch.curve, t)));
        }
        plot.polylines.push_back(std::move(pl));
    }
    for (const auto& j : r.joints)
        if (j.has_crossing) plot.markers.push_back({j.crossing, j.origin});
    return plot;
}

// Writes all requested artifacts; returns the result summary.
inline OffsetResult cmd_offset(const std::string& spec_path, std::ostream& report) {
    OffsetResult r = run_offset(PipelineSpec::parse_file(spec_path));
    const std::string& pre = r.spec.out_prefix;

    int nfit = 0;
    for (size_t i = 0; i < r.chains.size(); ++i) {
        if (!r.chains[i].fitted) continue;
        write_curve_file(pre + ".chain" + std::to_string(nfit) + ".curve", r.chains[i].curve);
        ++nfit;
    }
    int ntrans = 0;
    for (const auto& j : r.joints)
        if (j.has_bridge)
            write_curve_file(pre + ".transition" + std::to_string(ntrans++) + ".curve", j.bridge);

    {
        std::ofstream js(pre + ".joints.csv", std::ios::binary);
        if (!js) throw parse_error("cannot write " + pre + ".joints.csv");
        js << "joint,origin,kind,x0,y0,z0,x1,y1,z1,crossing_u,crossing_v,fitness\n";
        for (size_t i = 0; i < r.joints.size(); ++i) {
            const auto& j = r.joints[i];
            js << i << ',' << j.origin << ',' << to_string(j.kind) << ',' << detail::csv3(j.x0)
               << ',' << detail::csv3(j.x1) << ',';
            if (j.has_crossing)
                js << fmt_double(j.crossing.x) << ',' << fmt_double(j.crossing.y);
            else
                js << ',';
            js << ',' << (j.fitness >= 0 ? fmt_double(j.fitness) : "") << "\n";
        }
    }
    {
        std::ofstream pj(pre + ".projection.csv", std::ios::binary);
        if (!pj) throw parse_error("cannot write " + pre + ".projection.csv");
        pj << "set,index,u,v\n";
        for (size_t pi = 0; pi < r.raw_projection.size(); ++pi)
            for (const Vec2& p : r.raw_projection[pi])
                pj << "raw" << pi << ',' << pi << ',' << fmt_double(p.x) << ','
                   << fmt_double(p.y) << "\n";
        const ProjectionBasis basis = projection_basis(r.spec.parting_k());
        for (size_t ci = 0; ci < r.chains.size(); ++ci) {
            if (!r.chains[ci].fitted) continue;
            for (const auto& v : r.chains[ci].vertices) {
                Vec2 p = basis.project(v.p);
                pj << "chain" << ci << ',' << ci << ',' << fmt_double(p.x) << ','
                   << fmt_double(p.y) << "\n";
            }
        }
    }
    {
        std::ofstream meta(pre + ".meta", std::ios::binary);
        if (!meta) throw parse_error("cannot write " + pre + ".meta");
        Vec3 k = r.spec.parting_k();
        meta << "parting = " << fmt_double(k.x) << ' ' << fmt_double(k.y) << ' '
             << fmt_double(k.z) << "\n";
        meta << "distance = " << fmt_double(r.spec.distance) << "\n";
        meta << "chains = " << nfit << "\n";
        meta << "transitions = " << ntrans << "\n";
    }
    if (r.spec.emit_mesh) write_obj_file(pre + ".mesh.obj", build_mesh(r));
    if (r.spec.emit_svg) write_svg_file(pre + ".svg", projection_plot(r));

    report << "chain,points,mean,max,sd\n";
    int row = 0;
    for (size_t i = 0; i < r.chains.size(); ++i) {
        if (!r.chains[i].fitted) continue;
        const auto& st = r.chain_stats[i];
        report << row++ << ',' << r.chains[i].vertices.size() << ',' << fmt_double(st.mean) << ','
               << fmt_double(st.max) << ',' << fmt_double(st.sd) << "\n";
    }
    report << "joints," << r.joints.size() << ",eliminated_loops," << r.eliminated_loops << "\n";
    return r;
}

// ---------------------------------------------------------------------------
// Reproduction commands

inline NurbsCurve3 benchmark_cubic() {
    return make_bezier(3, {{200, 200, 200}, {300, 500, 300}, {400, 600, 500}, {600, 200, 600}});
}

struct Table1Row {
    std::string mode, stage;
    size_t points = 0;
    ErrorStats stats;
};

inline std::vector<Table1Row> table1_rows() {
    const NurbsCurve3 bench = benchmark_cubic();
    const double d = 400, eps = 1;
    std::vector<Table1Row> rows;
    for (SubdivisionMode mode : {SubdivisionMode::traditional, SubdivisionMode::improved}) {
        const char* mname = mode == SubdivisionMode::traditional ? "traditional" : "improved";
        auto samples = subdivide_curve(bench, eps, d, mode);
        OffsetRule rule = binormal_rule(bench, d);
        RawOffsetPolyline raw = raw_offset(samples, rule);

        auto chord_stats = [](const std::vector<Point3>& pts) {
            std::vector<double> c;
            for (size_t i = 1; i < pts.size(); ++i) c.push_back(distance(pts[i], pts[i - 1]));
            return stats_of(c);
        };
        std::vector<Point3> before;
        for (const auto& s : samples) before.push_back(s.position);
        rows.push_back({mname, "before_offset", samples.size(), chord_stats(before)});
        rows.push_back({mname, "after_offset", samples.size(), chord_stats(raw.offset_points())});

        Vec3 t0 = offset_curve_tangent(bench, rule, bench.domain_start());
        Vec3 t1 = offset_curve_tangent(bench, rule, bench.domain_end());
        NurbsCurve3 fitted = fit_offset_curve(raw, std::make_pair(t0, t1));
        rows.push_back({mname, "interpolation", 500, offset_error_stats(fitted, bench, 500)});
    }
    return rows;
}

inline void cmd_repro_table1(std::ostream& os) {
    auto rows = table1_rows();
    os << "mode,stage,points,mean,max,sd\n";
    for (const auto& r : rows)
        os << r.mode << ',' << r.stage << ',' << r.points << ',' << fmt_double(r.stats.mean)
           << ',' << fmt_double(r.stats.max) << ',' << fmt_double(r.stats.sd) << "\n";
    const double sd_t = rows[2].stats.sd, sd_i = rows[5].stats.sd;
    os << "reduction,interpolation_sd_percent,," << fmt_double((sd_t - sd_i) / sd_t * 100.0)
       << ",,\n";
}

// Convex-gap benchmark joint: endpoints and tangents of two offset chains
// around a co-vertex at the origin, offset distance 50.
inline JointRecord transition_benchmark_joint() {
    JointRecord j;
    j.x0 = {47.553, 0, 15.451};
    j.x1 = {29.389, 40.451, 0};
    j.t0 = {-3.744, 53.960, 11.524};
    j.t1 = {-36.693, 26.659, -18.325};
    j.p = {0, 0, 0};
    j.kind = JointKind::convex;
    return j;
}

struct TransitionReport {
    SphericalQuartic quartic;
    PsoResult pso;
    bool converged = false;
};

inline TransitionReport run_repro_transition(std::uint64_t seed, int max_iter = 2000) {
    JointRecord j = transition_benchmark_joint();
    PsoConfig cfg;
    cfg.seed = seed;
    cfg.max_iter = max_iter;
    TransitionReport rep;
    try {
        rep.quartic = convex_transition(j, 50.0, cfg, 100, &rep.pso);
        rep.converged = true;
    } catch (const convergence_error&) {
        std::array<double, 7> u;
        std::copy_n(rep.pso.best.begin(), 7, u.begin());
        rep.quartic = quartic_from_params(j.x0, j.x1, j.t0, j.t1, 50.0, u);
        rep.quartic.fitness = rep.pso.value;
        rep.converged = false;
    }
    return rep;
}

inline void cmd_repro_transition(std::uint64_t seed, int max_iter, const std::string& prefix,
                                 std::ostream& os) {
    TransitionReport rep = run_repro_transition(seed, max_iter);
    os << "seed," << seed << "\n";
    os << "fitness," << fmt_double(rep.quartic.fitness) << "\n";
    os << "iterations," << rep.pso.iterations << "\n";
    os << "converged," << (rep.converged ? 1 : 0) << "\n";
    os << "weights";
    for (double w : rep.quartic.w) os << ',' << fmt_double(w);
    os << "\n";
    for (int i = 0; i < 5; ++i)
        os << "cp" << i << ',' << detail::csv3(rep.quartic.cp[i]) << "\n";

    write_curve_file(prefix + ".transition.curve", rep.quartic.as_curve());
    std::ofstream conv(prefix + ".convergence.csv", std::ios::binary);
    if (!conv) throw parse_error("cannot write " + prefix + ".convergence.csv");
    conv << "iteration,best\n";
    for (size_t i = 0; i < rep.pso.history.size(); ++i)
        conv << i << ',' << fmt_double(rep.pso.history[i]) << "\n";
    conv.close();
    if (!rep.converged)
        throw convergence_error("transition optimization missed the target fitness",
                                rep.quartic.fitness);
}

// ---------------------------------------------------------------------------
// Plot command

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r')
            cur += ch;
    }
    out.push_back(cur);
    return out;
}

} // namespace detail

inline void cmd_plot(const std::string& target, const std::string& out_path,
                     const std::string& prefix) {
    SvgPlot plot;
    if (target == "curves") {
        Vec3 k{0, 0, 1};
        std::ifstream meta(prefix + ".meta");
        if (meta) {
            std::string line;
            while (std::getline(meta, line))
                if (line.starts_with("parting = "))
                    k = detail::parse_vec3(line.substr(10), "parting");
        }
        const ProjectionBasis basis = projection_basis(k);
        plot.title = "offset curves";
        for (const char* kind : {"chain", "transition"}) {
            for (int i = 0;; ++i) {
                std::string path = prefix + "." + kind + std::to_string(i) + ".curve";
                if (!std::filesystem::exists(path)) break;
                NurbsCurve3 c = read_curve_file(path);
                SvgPolyline pl;
                pl.stroke = kind[0] == 'c' ? "#1f4f9f" : "#d33";
                for (int s = 0; s <= 200; ++s) {
                    double t =
                        c.domain_start() + (c.domain_end() - c.domain_start()) * s / 200.0;
                    pl.points.push_back(basis.project(evaluate(c, t)));
                }
                plot.polylines.push_back(std::move(pl));
            }
        }
    } else if (target == "projection") {
        std::ifstream pj(prefix + ".projection.csv");
        if (!pj) throw parse_error("missing " + prefix + ".projection.csv (run offset first)");
        plot.title = "projected polylines";
        std::string line;
        std::getline(pj, line); // header
        std::map<std::string, SvgPolyline> sets;
        std::vector<std::string> order;
        while (std::getline(pj, line)) {
            if (line.empty()) continue;
            auto f = detail::split_csv(line);
            if (f.size() != 4) throw parse_error("bad projection row: " + line);
            if (!sets.count(f[0])) order.push_back(f[0]);
            auto& pl = sets[f[0]];
            pl.stroke = f[0].starts_with("raw") ? "#bbbbbb" : "#1f4f9f";
            pl.points.push_back({detail::parse_double(f[2], "u"), detail::parse_double(f[3], "v")});
        }
        for (const auto& name : order) plot.polylines.push_back(sets[name]);
        std::ifstream js(prefix + ".joints.csv");
        if (js) {
            std::getline(js, line);
            while (std::getline(js, line)) {
                auto f = detail::split_csv(line);
                if (f.size() < 11 || f[9].empty() || f[10].empty()) continue;
                plot.markers.push_back({{detail::parse_double(f[9], "crossing_u"),
                                         detail::parse_double(f[10], "crossing_v")},
                                        f[2]});
            }
        }
    } else if (target == "convergence") {
        std::ifstream conv(prefix + ".convergence.csv");
        if (!conv)
            throw parse_error("missing " + prefix + ".convergence.csv (run repro transition)");
        plot.title = "optimizer convergence";
        SvgPolyline pl;
        std::string line;
        std::getline(conv, line);
        while (std::getline(conv, line)) {
            if (line.empty()) continue;
            auto f = detail::split_csv(line);
            if (f.size() != 2) throw parse_error("bad convergence row: " + line);
            pl.points.push_back(
                {detail::parse_double(f[0], "iteration"), detail::parse_double(f[1], "best")});
        }
        plot.polylines.push_back(std::move(pl));
    } else
        throw parse_error("unknown plot target '" + target +
                          "' (expected curves, projection, or convergence)");
    write_svg_file(out_path, plot);
}

} // namespace ruloff
