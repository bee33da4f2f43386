#include "clc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace clc {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kBranchCircle = 1e-3;
}  // namespace

double signed_area(const std::vector<Cpx>& poly) {
    double a = 0;
    for (size_t i = 0; i + 1 < poly.size(); ++i)
        a += poly[i].real() * poly[i + 1].imag() - poly[i + 1].real() * poly[i].imag();
    if (!poly.empty())
        a += poly.back().real() * poly.front().imag() - poly.front().real() * poly.back().imag();
    return 0.5 * a;
}

int winding_number(const std::vector<Cpx>& poly, Cpx p) {
    // signed horizontal-ray crossings
    int w = 0;
    size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        Cpx a = poly[i], b = poly[(i + 1) % n];
        if (a.imag() <= p.imag()) {
            if (b.imag() > p.imag() &&
                (b.real() - a.real()) * (p.imag() - a.imag()) >
                    (p.real() - a.real()) * (b.imag() - a.imag()))
                ++w;
        } else {
            if (b.imag() <= p.imag() &&
                (b.real() - a.real()) * (p.imag() - a.imag()) <
                    (p.real() - a.real()) * (b.imag() - a.imag()))
                --w;
        }
    }
    return w;
}

std::vector<Cpx> LevelGraph::face_polyline(const Face& f) const {
    std::vector<Cpx> poly;
    for (const ArcEnd& d : f.boundary) {
        const LevelArc& a = arcs[d.arc];
        if (d.end == 0) {
            poly.insert(poly.end(), a.pts.begin(), a.pts.end());
        } else {
            poly.insert(poly.end(), a.pts.rbegin(), a.pts.rend());
        }
        if (!poly.empty()) poly.pop_back();  // endpoints repeat at vertices
    }
    return poly;
}

bool point_in_face(const LevelGraph& g, int face, Cpx p) {
    const Face& f = g.faces[face];
    std::vector<Cpx> poly = g.face_polyline(f);
    int w = winding_number(poly, p);
    return f.bounded ? w != 0 : w == 0;
}

void enumerate_face_orbits(LevelGraph& g) {
    g.faces.clear();
    g.unbounded_face = -1;

    // Sort rotations counterclockwise by outgoing angle.
    for (auto& v : g.verts) {
        std::vector<size_t> idx(v.rotation.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
            if (v.rot_angles[a] != v.rot_angles[b]) return v.rot_angles[a] < v.rot_angles[b];
            return v.rotation[a].arc < v.rotation[b].arc;  // deterministic tie-break
        });
        std::vector<ArcEnd> r;
        std::vector<double> ang;
        for (size_t i : idx) {
            r.push_back(v.rotation[i]);
            ang.push_back(v.rot_angles[i]);
        }
        v.rotation = std::move(r);
        v.rot_angles = std::move(ang);
    }

    auto head_vertex = [&](const ArcEnd& d) { return g.arcs[d.arc].end_vertex[1 - d.end]; };
    auto rot_index = [&](int v, const ArcEnd& e) -> size_t {
        const auto& rot = g.verts[v].rotation;
        for (size_t i = 0; i < rot.size(); ++i)
            if (rot[i] == e) return i;
        throw Error("graph", "arc-end missing from rotation");
    };

    std::map<std::pair<int, int>, int> dart_face;
    // next dart = reverse, then the next arc-end clockwise; this keeps the
    // face on the left of every dart, so bounded faces come out CCW
    auto next_dart = [&](const ArcEnd& d) -> ArcEnd {
        ArcEnd rev{d.arc, 1 - d.end};  // the arc-end sitting at the head vertex
        int v = head_vertex(d);
        const auto& rot = g.verts[v].rotation;
        size_t i = rot_index(v, rev);
        return rot[(i + rot.size() - 1) % rot.size()];
    };

    for (int a = 0; a < static_cast<int>(g.arcs.size()); ++a) {
        for (int e = 0; e < 2; ++e) {
            if (dart_face.count({a, e})) continue;
            Face face;
            if (g.arcs[a].closed()) {
                face.boundary = {ArcEnd{a, e}};
                dart_face[{a, e}] = static_cast<int>(g.faces.size());
            } else {
                ArcEnd d{a, e};
                do {
                    dart_face[{d.arc, d.end}] = static_cast<int>(g.faces.size());
                    face.boundary.push_back(d);
                    d = next_dart(d);
                } while (!(d == ArcEnd{a, e}));
            }
            g.faces.push_back(std::move(face));
        }
    }

}

void annotate_faces_geometric(LevelGraph& g) {
    // The unbounded face is the one traversed with negative signed area.
    double min_area = 1e300;
    for (size_t i = 0; i < g.faces.size(); ++i) {
        std::vector<Cpx> poly = g.face_polyline(g.faces[i]);
        double area = signed_area(poly);
        g.faces[i].bounded = area > 0;
        if (area < min_area) {
            min_area = area;
            g.unbounded_face = static_cast<int>(i);
        }
    }
    if (g.unbounded_face >= 0) g.faces[g.unbounded_face].bounded = false;

    // Interior sample point for each bounded face.
    for (auto& f : g.faces) {
        if (!f.bounded) continue;
        std::vector<Cpx> poly = g.face_polyline(f);
        const LevelArc& a0 = g.arcs[f.boundary[0].arc];
        size_t mid = a0.pts.size() / 2;
        Cpx p = a0.pts[mid];
        Cpx t = a0.pts[std::min(mid + 1, a0.pts.size() - 1)] - a0.pts[mid > 0 ? mid - 1 : 0];
        t /= std::abs(t);
        if (f.boundary[0].end == 1) t = -t;
        Cpx left = Cpx(0, 1) * t;  // face lies on the left of the dart
        bool found = false;
        for (double d = 0.25; d > 1e-9 && !found; d *= 0.5) {
            Cpx cand = p + d * left;
            if (winding_number(poly, cand) != 0) {
                f.inner_pt = cand;
                found = true;
            }
        }
        if (!found) throw Error("graph", "could not find an interior point of a face");
    }
}

void build_faces(LevelGraph& g) {
    enumerate_face_orbits(g);
    annotate_faces_geometric(g);
}

std::vector<double> branch_angles(const AnalyticFunction& f, Cpx v, double level, int expected) {
    const int n = 1440;
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        double th = 2 * kPi * i / n - kPi;
        vals[i] = std::abs(f.eval(v + kBranchCircle * Cpx(std::cos(th), std::sin(th)))) - level;
    }
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) {
        double a = vals[i], b = vals[(i + 1) % n];
        if (a == 0.0) a = -1e-18;
        if ((a < 0) != (b < 0)) {
            double lo = 2 * kPi * i / n - kPi, hi = 2 * kPi * (i + 1) / n - kPi;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                double vm =
                    std::abs(f.eval(v + kBranchCircle * Cpx(std::cos(mid), std::sin(mid)))) - level;
                if ((vm < 0) == (a < 0)) lo = mid; else hi = mid;
            }
            angles.push_back(0.5 * (lo + hi));
        }
    }
    if (expected > 0 && static_cast<int>(angles.size()) != expected)
        throw Error("graph", "unexpected branch count at a critical point");
    return angles;
}

namespace {

double poly_dist(const std::vector<Cpx>& poly, Cpx p) {
    double best = 1e300;
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        Cpx a = poly[i], b = poly[i + 1];
        Cpx ab = b - a;
        double len2 = std::norm(ab);
        double t = len2 == 0 ? 0.0 : std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
        best = std::min(best, std::abs(p - (a + t * ab)));
    }
    return best;
}

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) {
        for (int i = 0; i < n; ++i) p[i] = i;
    }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

std::vector<LevelGraph> build_level_graphs(const AnalyticFunction& f, double level,
                                           const Rect& region,
                                           const std::vector<OnLevelCritical>& on_level,
                                           const std::vector<Cpx>& zeros) {
    LevelGraph all;
    all.level = level;

    struct Slot {
        double angle;
        Cpx start;
        bool used = false;
    };
    std::vector<std::vector<Slot>> slots(on_level.size());

    for (size_t vi = 0; vi < on_level.size(); ++vi) {
        GraphVertex v;
        v.id = static_cast<int>(vi);
        v.pos = on_level[vi].pos;
        v.fprime_mult = on_level[vi].fprime_mult;
        double a = std::arg(f.eval(v.pos));
        v.vertex_arg = a < 0 ? a + 2 * kPi : a;
        all.verts.push_back(v);
        int expected = 2 * (on_level[vi].fprime_mult + 1);
        for (double th : branch_angles(f, on_level[vi].pos, level, expected))
            slots[vi].push_back(
                {th, on_level[vi].pos + kBranchCircle * Cpx(std::cos(th), std::sin(th))});
    }

    TraceOptions topt;
    for (const auto& c : on_level) topt.snap_points.push_back(c.pos);
    topt.clip = [&region](Cpx z) { return region.contains(z); };

    auto match_slot = [&](int vi, Cpx arrival) -> int {
        double th = std::arg(arrival - all.verts[vi].pos);
        int best = -1;
        double bd = 1e300;
        for (size_t i = 0; i < slots[vi].size(); ++i) {
            double d = std::abs(std::remainder(slots[vi][i].angle - th, 2 * kPi));
            if (d < bd) {
                bd = d;
                best = static_cast<int>(i);
            }
        }
        if (best < 0 || bd > 2 * kPi / (2.0 * slots[vi].size()))
            throw Error("graph", "could not match an arriving arc to a branch slot");
        return best;
    };

    // Arcs out of critical-point branches.
    for (size_t vi = 0; vi < on_level.size(); ++vi) {
        for (size_t si = 0; si < slots[vi].size(); ++si) {
            if (slots[vi][si].used) continue;
            slots[vi][si].used = true;
            Cpx seed = slots[vi][si].start;
            Cpx outward = std::polar(1.0, slots[vi][si].angle);
            AnalyticFunction fp = f.derivative();
            Cpx z0 = correct_to_level(f, fp, seed, level);
            Cpx t = Cpx(0, 1) * f.eval(z0) * std::conj(fp.eval(z0));
            int dir = (t * std::conj(outward)).real() >= 0 ? +1 : -1;
            TraceOptions bopt = topt;
            bopt.suppress_snap = static_cast<int>(vi);
            bopt.suppress_dist = 5 * topt.snap_radius;
            TraceResult tr = trace_level_curve_dir(f, z0, level, dir, bopt);
            if (tr.end == TraceEnd::StepCollapse)
                throw Error("graph", "level trace collapsed away from known critical points");
            if (tr.end == TraceEnd::Clipped)
                throw Error("graph", "level set leaves the working region");
            if (tr.end != TraceEnd::SnapPoint)
                throw Error("graph", "branch trace did not reach a critical point");

            LevelArc arc;
            arc.id = static_cast<int>(all.arcs.size());
            arc.level = level;
            arc.pts.push_back(all.verts[vi].pos);
            arc.pts.insert(arc.pts.end(), tr.pts.begin(), tr.pts.end());
            arc.end_vertex[0] = static_cast<int>(vi);
            arc.end_vertex[1] = tr.snap_index;
            int wj = tr.snap_index;
            Cpx arrival = tr.pts[tr.pts.size() >= 2 ? tr.pts.size() - 2 : 0];
            int ws = match_slot(wj, arrival);
            if (slots[wj][ws].used && !(wj == static_cast<int>(vi) && ws == static_cast<int>(si)))
                throw Error("graph", "branch slot already consumed");
            slots[wj][ws].used = true;

            all.verts[vi].rotation.push_back({arc.id, 0});
            all.verts[vi].rot_angles.push_back(slots[vi][si].angle);
            all.verts[wj].rotation.push_back({arc.id, 1});
            all.verts[wj].rot_angles.push_back(slots[wj][ws].angle);
            all.arcs.push_back(std::move(arc));
        }
    }

    // Closed components, seeded by gradient ascent from each zero.
    for (Cpx z0 : zeros) {
        GradientPath up;
        bool seeded = false;
        for (int attempt = 0; attempt < 24 && !seeded; ++attempt) {
            // radius grows so that multiple zeros (critical points of f)
            // are left behind before the ascent starts
            double rad = 1e-4 * std::pow(3.0, attempt % 8);
            Cpx s = z0 + rad * std::polar(1.0, 0.77 * attempt);
            try {
                if (std::abs(f.eval(s)) >= level) continue;
                up = trace_gradient(f, s, GradDirection::Ascent, level, topt);
                seeded = !up.hit_critical;
            } catch (const Error&) {
            }
        }
        if (!seeded) throw Error("graph", "could not seed a level component from a zero");
        Cpx seed = up.points.back();
        bool dup = false;
        for (const auto& a : all.arcs)
            if (poly_dist(a.pts, seed) < 5e-3) dup = true;
        if (dup) continue;
        LevelArcTrace t = trace_level_curve(f, seed, level, topt);
        if (!t.closed) throw Error("graph", "zero-seeded component did not close");
        LevelArc arc;
        arc.id = static_cast<int>(all.arcs.size());
        arc.level = level;
        arc.pts = std::move(t.pts);
        all.arcs.push_back(std::move(arc));
    }

    // Split into connected components.
    int nv = static_cast<int>(all.verts.size());
    int na = static_cast<int>(all.arcs.size());
    Dsu dsu(nv + na);
    for (int a = 0; a < na; ++a) {
        for (int e = 0; e < 2; ++e) {
            int v = all.arcs[a].end_vertex[e];
            if (v >= 0) dsu.unite(nv + a, v);
        }
    }
    std::map<int, int> comp_of_root;
    std::vector<LevelGraph> comps;
    std::vector<int> vmap(nv, -1), amap(na, -1);
    for (int a = 0; a < na; ++a) {
        int root = dsu.find(nv + a);
        if (!comp_of_root.count(root)) {
            comp_of_root[root] = static_cast<int>(comps.size());
            comps.push_back(LevelGraph{});
            comps.back().level = level;
        }
    }
    for (int v = 0; v < nv; ++v) {
        int root = dsu.find(v);
        if (!comp_of_root.count(root)) throw Error("graph", "isolated vertex on level set");
        LevelGraph& g = comps[comp_of_root[root]];
        vmap[v] = static_cast<int>(g.verts.size());
        GraphVertex nvx = all.verts[v];
        nvx.id = vmap[v];
        nvx.rotation.clear();
        nvx.rot_angles.clear();
        g.verts.push_back(nvx);
    }
    for (int a = 0; a < na; ++a) {
        int root = dsu.find(nv + a);
        LevelGraph& g = comps[comp_of_root[root]];
        amap[a] = static_cast<int>(g.arcs.size());
        LevelArc arc = all.arcs[a];
        arc.id = amap[a];
        for (int e = 0; e < 2; ++e)
            if (arc.end_vertex[e] >= 0) arc.end_vertex[e] = vmap[arc.end_vertex[e]];
        g.arcs.push_back(std::move(arc));
    }
    for (int v = 0; v < nv; ++v) {
        const GraphVertex& src = all.verts[v];
        LevelGraph& g = comps[comp_of_root[dsu.find(v)]];
        GraphVertex& dst = g.verts[vmap[v]];
        for (size_t i = 0; i < src.rotation.size(); ++i) {
            dst.rotation.push_back({amap[src.rotation[i].arc], src.rotation[i].end});
            dst.rot_angles.push_back(src.rot_angles[i]);
        }
    }

    for (auto& g : comps) {
        build_faces(g);
        for (auto& face : g.faces) {
            if (!face.bounded) continue;
            face.zcount = winding_count(f, g.face_polyline(face));
        }
    }
    return comps;
}

int component_containing(const std::vector<LevelGraph>& comps, Cpx z) {
    for (size_t i = 0; i < comps.size(); ++i) {
        for (size_t fi = 0; fi < comps[i].faces.size(); ++fi) {
            if (!comps[i].faces[fi].bounded) continue;
            if (point_in_face(comps[i], static_cast<int>(fi), z)) return static_cast<int>(i);
        }
    }
    return -1;
}

void check_level_graph_invariants(const LevelGraph& g) {
    for (const auto& v : g.verts) {
        int deg = static_cast<int>(v.rotation.size());
        if (deg < 4 || deg % 2 != 0)
            throw Error("graph", "vertex degree must be even and at least 4");
    }
    int V = static_cast<int>(g.verts.size());
    int E = static_cast<int>(g.arcs.size());
    int F = static_cast<int>(g.faces.size());
    if (!g.verts.empty() || !g.arcs.empty()) {
        bool loop_only = g.verts.empty() && g.arcs.size() == 1 && g.arcs[0].closed();
        if (loop_only) {
            if (F != 2) throw Error("graph", "a closed curve must have two faces");
        } else if (V - E + F != 2) {
            throw Error("graph", "Euler characteristic violated");
        }
    }
    // every arc incident to the unbounded face
    if (g.unbounded_face >= 0) {
        std::vector<char> on_unbounded(g.arcs.size(), 0);
        for (const ArcEnd& d : g.faces[g.unbounded_face].boundary) on_unbounded[d.arc] = 1;
        for (const auto& a : g.arcs)
            if (!a.closed() && !on_unbounded[a.id])
                throw Error("graph", "arc not incident to the unbounded face");
    }
}

}  // namespace clc
