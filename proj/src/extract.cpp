#include "clc/extract.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace clc {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kCritClusterTol = 1e-7;  // relative spread of one critical level
}  // namespace

// ---- distinguished points -------------------------------------------------

namespace {

// Unwrapped arg f along the arc polyline.
std::vector<double> arg_lift(const AnalyticFunction& f, const std::vector<Cpx>& pts) {
    std::vector<double> lift(pts.size());
    double cur = std::arg(f.eval(pts[0]));
    lift[0] = cur;
    for (size_t i = 1; i < pts.size(); ++i) {
        double a = std::arg(f.eval(pts[i]));
        cur += std::remainder(a - cur, 2 * kPi);
        lift[i] = cur;
    }
    return lift;
}

}  // namespace

void distinguished_points(const AnalyticFunction& f, LevelGraph& g) {
    AnalyticFunction fp = f.derivative();
    for (auto& arc : g.arcs) {
        arc.marks.clear();
        if (arc.is_extension) continue;
        auto lift = arg_lift(f, arc.pts);
        double lo = *std::min_element(lift.begin(), lift.end());
        double hi = *std::max_element(lift.begin(), lift.end());
        for (long long m = std::llround(std::floor(lo / (2 * kPi))) - 1;
             m <= std::llround(std::ceil(hi / (2 * kPi))) + 1; ++m) {
            double target = 2 * kPi * m;
            for (size_t i = 0; i + 1 < lift.size(); ++i) {
                double a = lift[i] - target, b = lift[i + 1] - target;
                bool end_touch = (i == 0 && std::abs(a) < 1e-9) ||
                                 (i + 2 == lift.size() && std::abs(b) < 1e-9);
                if (end_touch) continue;  // vertex marks are derived from args
                if (a == 0.0) a = -1e-18;
                if ((a < 0) == (b < 0)) continue;
                double frac = a / (a - b);
                Cpx z = arc.pts[i] + frac * (arc.pts[i + 1] - arc.pts[i]);
                // Newton onto f(z) = level (positive real value on the curve)
                for (int it = 0; it < 32; ++it) {
                    Cpx fv = f.eval(z);
                    Cpx target_v = Cpx(arc.level, 0);
                    if (std::abs(fv - target_v) < 1e-13 * arc.level) break;
                    Cpx fpv = fp.eval(z);
                    if (std::abs(fpv) < tol::crit_tol) break;
                    z -= (fv - target_v) / fpv;
                }
                DistMark dm;
                dm.pos = z;
                dm.t = double(i) + frac;
                arc.marks.push_back(dm);
            }
        }
        std::sort(arc.marks.begin(), arc.marks.end(),
                  [](const DistMark& a, const DistMark& b) { return a.t < b.t; });
    }
}

std::vector<VisitSector> outer_visit_sectors(const ConfigMember& m) {
    const LevelGraph& g = m.skeleton;
    std::vector<VisitSector> out;
    if (g.unbounded_face < 0) return out;
    auto walk = m.outer_walk_ccw();
    std::map<int, int> visits;
    auto angle_of = [&](int v, const ArcEnd& e) {
        const auto& rot = g.verts[v].rotation;
        for (size_t i = 0; i < rot.size(); ++i)
            if (rot[i] == e) return g.verts[v].rot_angles[i];
        throw Error("extract", "arc-end missing from rotation");
    };
    size_t n = walk.size();
    for (size_t i = 0; i < n; ++i) {
        const ArcEnd& d = walk[i];
        const ArcEnd& prev = walk[(i + n - 1) % n];
        int tail = g.arcs[d.arc].end_vertex[d.end];
        if (tail < 0) continue;
        // the unbounded region lies on the right of the CCW walk: its sector
        // runs CCW from the arriving end to the departing end
        VisitSector s;
        s.vertex = tail;
        s.visit = visits[tail]++;
        s.angle_from = angle_of(tail, ArcEnd{prev.arc, 1 - prev.end});
        s.angle_to = angle_of(tail, d);
        out.push_back(s);
    }
    return out;
}

namespace {

// Sector at the junction before walk[i]: for a face walk (face on the left)
// the face sector runs CCW from the departing end to the arriving end; for
// the CCW outer walk the unbounded sector runs the other way.
VisitSector junction_sector(const LevelGraph& g, const std::vector<ArcEnd>& walk, size_t i,
                            bool outer_side) {
    auto angle_of = [&](int v, const ArcEnd& e) {
        const auto& rot = g.verts[v].rotation;
        for (size_t k = 0; k < rot.size(); ++k)
            if (rot[k] == e) return g.verts[v].rot_angles[k];
        throw Error("extract", "arc-end missing from rotation");
    };
    size_t n = walk.size();
    const ArcEnd& d = walk[i];
    const ArcEnd& prev = walk[(i + n - 1) % n];
    int tail = g.arcs[d.arc].end_vertex[d.end];
    VisitSector s;
    s.vertex = tail;
    if (outer_side) {
        s.angle_from = angle_of(tail, ArcEnd{prev.arc, 1 - prev.end});
        s.angle_to = angle_of(tail, d);
    } else {
        s.angle_from = angle_of(tail, d);
        s.angle_to = angle_of(tail, ArcEnd{prev.arc, 1 - prev.end});
    }
    return s;
}

double sector_mid(const VisitSector& s) {
    double span = s.angle_to - s.angle_from;
    span = std::fmod(span, 2 * kPi);
    if (span <= 0) span += 2 * kPi;
    return s.angle_from + 0.5 * span;
}

// Geometric positions of a member's marks (one per MarkId), with sector
// midpoints used to displace vertex marks into their sector.
struct MarkGeo {
    Cpx pos;
    Cpx probe;  // slightly displaced representative for matching/descents
};

std::vector<MarkGeo> mark_geometry(const ConfigMember& m, const std::vector<MarkId>& marks,
                                   const std::vector<ArcEnd>& walk, bool outer_side) {
    const LevelGraph& g = m.skeleton;
    std::vector<MarkGeo> out;
    // vertex visits in this walk, in encounter order per vertex
    std::map<std::pair<int, int>, VisitSector> sectors;
    std::map<int, int> visits;
    for (size_t i = 0; i < walk.size(); ++i) {
        int tail = g.arcs[walk[i].arc].end_vertex[walk[i].end];
        if (tail < 0) continue;
        VisitSector s = junction_sector(g, walk, i, outer_side);
        s.visit = visits[tail]++;
        sectors[{tail, s.visit}] = s;
    }
    for (const MarkId& mk : marks) {
        MarkGeo mg;
        if (mk.arc >= 0) {
            mg.pos = g.arcs[mk.arc].marks[mk.ordinal].pos;
            mg.probe = mg.pos;
        } else {
            const auto& s = sectors.at({mk.vertex, mk.visit});
            mg.pos = g.verts[mk.vertex].pos;
            mg.probe = mg.pos + 1e-3 * std::polar(1.0, sector_mid(s));
        }
        out.push_back(mg);
    }
    return out;
}

struct Ctx {
    const AnalyticFunction& f;
    AnalyticFunction fp;
    Rect region;
};

std::vector<RootRecord> inside_face(const std::vector<RootRecord>& pts, const LevelGraph& g,
                                    int face) {
    std::vector<RootRecord> out;
    for (const auto& r : pts)
        if (point_in_face(g, face, r.location)) out.push_back(r);
    return out;
}

Configuration point_config(const RootRecord& zero) {
    Configuration c;
    c.member.is_point = true;
    c.member.point_z = zero.multiplicity;
    c.member.point_pos = zero.location;
    c.level = 0;
    return c;
}

int match_child_mark(const Ctx& ctx, const ConfigMember& child, const std::vector<MarkId>& marks,
                     const std::vector<MarkGeo>& geo, const std::vector<VisitSector>& sectors,
                     Cpx landing, Cpx approach) {
    int best = -1;
    double bd = 1e300;
    for (size_t i = 0; i < marks.size(); ++i) {
        double d = std::abs(landing - geo[i].pos);
        if (d < bd) {
            bd = d;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) throw Error("extract", "no child mark to match a gradient landing");
    const MarkId& mk = marks[best];
    if (mk.vertex >= 0) {
        // several visits share the position; disambiguate by approach sector
        double theta = std::arg(approach - child.skeleton.verts[mk.vertex].pos);
        int chosen = -1;
        for (size_t i = 0; i < marks.size(); ++i) {
            if (marks[i].vertex != mk.vertex) continue;
            const VisitSector* s = nullptr;
            int seen = 0;
            for (const auto& vs : sectors) {
                if (vs.vertex == mk.vertex) {
                    if (seen == marks[i].visit) s = &vs;
                    ++seen;
                }
            }
            if (!s) continue;
            double span = std::fmod(s->angle_to - s->angle_from, 2 * kPi);
            if (span <= 0) span += 2 * kPi;
            double off = std::fmod(theta - s->angle_from, 2 * kPi);
            if (off < 0) off += 2 * kPi;
            if (off <= span) chosen = static_cast<int>(i);
        }
        if (chosen >= 0) return chosen;
    }
    (void)ctx;
    return best;
}

int gradient_offset_for_face(const Ctx& ctx, const ConfigMember& parent, int face,
                             const Configuration& child) {
    if (child.member.is_point) return 0;
    auto pmarks = parent.face_marks(face);
    auto cmarks = child.member.outer_marks();
    int k = static_cast<int>(pmarks.size());
    if (k == 0 || k != static_cast<int>(cmarks.size()))
        throw Error("extract", "gradient map endpoint counts differ");
    const auto& walk = parent.skeleton.faces[face].boundary;
    auto pgeo = mark_geometry(parent, pmarks, walk, false);
    auto cgeo = mark_geometry(child.member, cmarks, child.member.outer_walk_ccw(), true);
    auto csectors = outer_visit_sectors(child.member);

    int offset = -1;
    for (int i = 0; i < k; ++i) {
        GradientPath path;
        bool ok = false;
        try {
            path = trace_gradient(ctx.f, pgeo[i].probe, GradDirection::Descent, child.member.H);
            ok = true;
        } catch (const Error&) {
        }
        if (!ok) continue;
        Cpx landing = path.points.back();
        Cpx approach = path.points.size() >= 2 ? path.points[path.points.size() - 2] : landing;
        int j = match_child_mark(ctx, child.member, cmarks, cgeo, csectors, landing, approach);
        int o = ((j - i) % k + k) % k;
        if (offset < 0) {
            offset = o;
        } else if (offset != o) {
            throw Error("extract", "gradient map is not cyclic-order preserving");
        }
    }
    if (offset < 0) throw Error("extract", "no gradient descent succeeded for a face");
    return offset;
}

Configuration build_region_config(const Ctx& ctx, const std::vector<RootRecord>& zeros_in,
                                  const std::vector<RootRecord>& crits_in, double eps_outer);

Configuration face_child(const Ctx& ctx, const LevelGraph& g, int face,
                         const std::vector<RootRecord>& zeros, const std::vector<RootRecord>& crits,
                         double level) {
    auto zin = inside_face(zeros, g, face);
    auto cin = inside_face(crits, g, face);
    return build_region_config(ctx, zin, cin, level);
}

Configuration build_region_config(const Ctx& ctx, const std::vector<RootRecord>& zeros_in,
                                  const std::vector<RootRecord>& crits_in, double eps_outer) {
    if (zeros_in.empty()) throw Error("extract", "a level-curve face must contain a zero");
    if (zeros_in.size() == 1) return point_config(zeros_in[0]);

    // maximal critical level curve: the component through the largest
    // critical modulus strictly below the enclosing level
    double mstar = -1;
    for (const auto& c : crits_in) {
        double mod = std::abs(ctx.f.eval(c.location));
        if (mod < eps_outer * (1 - tol::level_tol) && mod > tol::zero_tol)
            mstar = std::max(mstar, mod);
    }
    if (mstar <= 0)
        throw Error("extract", "several zeros but no separating critical level curve");

    std::vector<OnLevelCritical> cluster;
    for (const auto& c : crits_in) {
        double mod = std::abs(ctx.f.eval(c.location));
        if (std::abs(mod - mstar) <= kCritClusterTol * mstar)
            cluster.push_back({c.location, c.multiplicity});
    }
    std::vector<Cpx> zpos;
    for (const auto& z : zeros_in) zpos.push_back(z.location);

    auto comps = build_level_graphs(ctx.f, mstar, ctx.region, cluster, zpos);
    int comp = -1;
    for (size_t i = 0; i < comps.size(); ++i) {
        for (const auto& v : comps[i].verts) {
            if (std::abs(v.pos - cluster[0].pos) < 1e-9) comp = static_cast<int>(i);
        }
    }
    if (comp < 0) throw Error("extract", "maximal critical level curve not found");
    for (const auto& c : cluster) {
        bool found = false;
        for (const auto& v : comps[comp].verts)
            if (std::abs(v.pos - c.pos) < 1e-9) found = true;
        if (!found)
            throw Error("extract",
                        "critical level collision: equal moduli on different components");
    }
    LevelGraph lambda = comps[comp];
    check_level_graph_invariants(lambda);
    distinguished_points(ctx.f, lambda);

    Configuration cfg;
    cfg.member.H = mstar;
    cfg.member.skeleton = std::move(lambda);
    const LevelGraph& g = cfg.member.skeleton;

    for (int bfi : cfg.member.bounded_faces()) {
        MemberFaceData fd;
        fd.face = bfi;
        fd.z = g.faces[bfi].zcount;
        cfg.member.face_data.push_back(fd);
        cfg.children.push_back(face_child(ctx, g, bfi, zeros_in, crits_in, mstar));
    }
    for (size_t i = 0; i < cfg.children.size(); ++i) {
        int fi = cfg.member.face_data[i].face;
        cfg.gradient_offsets.push_back(
            gradient_offset_for_face(ctx, cfg.member, fi, cfg.children[i]));
    }
    // cross-check: marks per face match the prescribed z
    for (size_t i = 0; i < cfg.member.face_data.size(); ++i) {
        const auto& fd = cfg.member.face_data[i];
        if (static_cast<int>(cfg.member.face_marks(fd.face).size()) != fd.z)
            throw Error("extract", "argument unwrapping failure: mark count mismatch");
    }
    return cfg;
}

}  // namespace

Rect polynomial_region(const AnalyticFunction& f, double level) {
    auto coeffs = f.polynomial_coeffs();
    if (!coeffs || coeffs->size() < 2)
        throw Error("extract", "a working region is required for non-polynomial functions");
    double an = std::abs(coeffs->back());
    double mx = 0;
    for (size_t i = 0; i + 1 < coeffs->size(); ++i) mx = std::max(mx, std::abs((*coeffs)[i]));
    double r = 1.5 + (mx + level) / an;
    return Rect{Cpx(-r, -r), Cpx(r, r)};
}

double default_extract_level(const AnalyticFunction& f, const Rect& region) {
    auto crits = find_roots(f, region, RootKind::ZeroOfFPrime);
    double m = 0;
    for (const auto& c : crits) m = std::max(m, std::abs(f.eval(c.location)));
    return m > 0 ? 1.5 * m : 1.0;
}

Configuration extract_config(const GfbPair& pair) {
    Ctx ctx{pair.f, pair.f.derivative(), pair.region};
    auto zeros = find_roots(pair.f, pair.region, RootKind::ZeroOfF);
    auto crits = find_roots(pair.f, pair.region, RootKind::ZeroOfFPrime);

    double eps = pair.boundary_level;
    for (const auto& c : crits) {
        double mod = std::abs(pair.f.eval(c.location));
        if (std::abs(mod - eps) <= tol::level_tol * eps)
            throw Error("extract", "a critical value lies on the boundary level");
    }

    std::vector<Cpx> zpos;
    for (const auto& z : zeros) zpos.push_back(z.location);
    auto comps = build_level_graphs(pair.f, eps, pair.region, {}, zpos);
    if (comps.empty()) throw Error("extract", "no level curve at the boundary level");

    int comp = -1;
    if (pair.seed) {
        comp = component_containing(comps, *pair.seed);
        if (comp < 0) throw Error("extract", "seed is not inside any boundary component");
    } else {
        // outermost component: inside no other component's bounded face
        std::vector<int> exterior;
        for (size_t i = 0; i < comps.size(); ++i) {
            Cpx probe = comps[i].arcs[0].pts[0];
            bool inside_other = false;
            for (size_t j = 0; j < comps.size(); ++j)
                if (j != i && component_containing({comps[j]}, probe) >= 0) inside_other = true;
            if (!inside_other) exterior.push_back(static_cast<int>(i));
        }
        if (exterior.size() != 1)
            throw Error("extract", "several outer components at this level; provide a seed");
        comp = exterior[0];
    }
    const LevelGraph& outer = comps[comp];
    if (!outer.verts.empty())
        throw Error("extract", "boundary component passes through a critical point");

    int face = -1;
    for (size_t i = 0; i < outer.faces.size(); ++i)
        if (outer.faces[i].bounded) face = static_cast<int>(i);
    auto zeros_in = inside_face(zeros, outer, face);
    auto crits_in = inside_face(crits, outer, face);

    Configuration cfg = build_region_config(ctx, zeros_in, crits_in, eps);
    assign_levels(cfg);
    return cfg;
}

Configuration extract_config(const AnalyticFunction& f, double level, std::optional<Cpx> seed) {
    GfbPair pair;
    pair.f = f;
    pair.boundary_level = level;
    pair.region = polynomial_region(f, level);
    pair.seed = seed;
    return extract_config(pair);
}

}  // namespace clc
