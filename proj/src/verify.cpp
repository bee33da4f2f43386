#include "clc/verify.hpp"

#include "clc/realize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace clc {

namespace {

constexpr double kPi = 3.14159265358979323846;

Cpx newton_value(const AnalyticFunction& f, const AnalyticFunction& fp, Cpx target, Cpx init,
                 const char* what) {
    Cpx z = init;
    for (int it = 0; it < 80; ++it) {
        Cpx fv = f.eval(z);
        if (std::abs(fv - target) <= 1e-12 * (1 + std::abs(target))) return z;
        Cpx d = fp.eval(z);
        if (std::abs(d) < 1e-14) break;
        Cpx step = (fv - target) / d;
        // damp huge steps so the iterate stays in the right branch
        double m = std::abs(step);
        if (m > 0.5) step *= 0.5 / m;
        z -= step;
    }
    throw Error("verify", std::string("Newton did not converge (") + what + ")");
}

struct BandTask {
    std::vector<Cpx> anchors;  // arg-0 anchor probes on the outer boundary
    double r_out = 0;
    const Configuration* node = nullptr;
    int depth = 0;
};

// Anchor probes for the marks of a member face (or outer walk).
std::vector<Cpx> anchor_probes(const ConfigMember& m, bool outer, int face) {
    const LevelGraph& g = m.skeleton;
    std::vector<MarkId> marks = outer ? m.outer_marks() : m.face_marks(face);
    std::vector<Cpx> out;
    std::map<std::pair<int, int>, double> sector_mid;
    std::vector<ArcEnd> walk = outer ? m.outer_walk_ccw() : g.faces[face].boundary;
    std::map<int, int> visits;
    auto angle_of = [&](int v, const ArcEnd& e) {
        const auto& rot = g.verts[v].rotation;
        for (size_t i = 0; i < rot.size(); ++i)
            if (rot[i] == e) return g.verts[v].rot_angles[i];
        throw Error("verify", "arc-end missing from rotation");
    };
    size_t n = walk.size();
    for (size_t i = 0; i < n; ++i) {
        const ArcEnd& d = walk[i];
        const ArcEnd& prev = walk[(i + n - 1) % n];
        int tail = g.arcs[d.arc].end_vertex[d.end];
        if (tail < 0) continue;
        double a0, a1;
        if (outer) {
            a0 = angle_of(tail, ArcEnd{prev.arc, 1 - prev.end});
            a1 = angle_of(tail, d);
        } else {
            a0 = angle_of(tail, d);
            a1 = angle_of(tail, ArcEnd{prev.arc, 1 - prev.end});
        }
        double span = std::fmod(a1 - a0, 2 * kPi);
        if (span <= 0) span += 2 * kPi;
        sector_mid[{tail, visits[tail]++}] = a0 + 0.5 * span;
    }
    for (const MarkId& mk : marks) {
        if (mk.arc >= 0) {
            out.push_back(g.arcs[mk.arc].marks[mk.ordinal].pos);
        } else {
            out.push_back(g.verts[mk.vertex].pos +
                          1e-3 * std::polar(1.0, sector_mid.at({mk.vertex, mk.visit})));
        }
    }
    return out;
}

// The outermost member subtree that has usable geometry (skips implied
// members, which have no function-side curves).
const Configuration* outermost_real(const Configuration& cfg) {
    if (cfg.member.is_point) return cfg.member.implied ? nullptr : &cfg;
    bool real_graph = !cfg.member.implied;
    for (const auto& v : cfg.member.skeleton.verts) real_graph &= !v.implied;
    for (const auto& a : cfg.member.skeleton.arcs) real_graph &= !a.is_extension;
    if (real_graph) return &cfg;
    // descend: with one real child chain this stays well defined
    const Configuration* found = nullptr;
    for (const auto& c : cfg.children) {
        const Configuration* r = outermost_real(c);
        if (r) {
            if (found) throw Error("verify", "several disjoint real components to verify");
            found = r;
        }
    }
    return found;
}

void emit_band_cells(const AnalyticFunction& f, const AnalyticFunction& fp, const BandTask& band,
                     const VerifyOptions& opts, std::vector<PolarRectangleCell>& cells,
                     std::vector<BandTask>& queue) {
    double r_in = band.node->member.is_point ? 0.0 : band.node->member.H;
    int N = opts.grid;
    for (size_t a = 0; a < band.anchors.size(); ++a) {
        PolarRectangleCell cell;
        cell.id = static_cast<int>(cells.size());
        cell.r_in = r_in;
        cell.r_out = band.r_out;
        cell.anchor_z = band.anchors[a];
        cell.depth = band.depth;
        cell.nr = N;
        cell.nt = N;
        cell.z.resize(size_t(N) * N);
        cell.values.resize(size_t(N) * N);
        double lo = r_in > 0 ? std::log(r_in) : std::log(band.r_out) - 6.0;
        double hi = std::log(band.r_out);
        Cpx init = band.anchors[a];
        for (int j = 0; j < N; ++j) {
            double r = std::exp(hi + (lo - hi) * (j + 0.5) / N);
            Cpx row_init = init;
            for (int k = 0; k < N; ++k) {
                double th = 2 * kPi * (k + 0.5) / N;
                Cpx v = std::polar(r, th);
                Cpx z = newton_value(f, fp, v, row_init, "cell grid");
                cell.z[size_t(j) * N + k] = z;
                cell.values[size_t(j) * N + k] = v;
                row_init = z;
                if (k == 0) init = z;  // start of the next row
            }
        }
        cells.push_back(std::move(cell));
    }
    if (!band.node->member.is_point) {
        const ConfigMember& m = band.node->member;
        auto bf = m.bounded_faces();
        for (size_t i = 0; i < bf.size(); ++i) {
            BandTask t;
            t.anchors = anchor_probes(m, false, bf[i]);
            t.r_out = m.H;
            t.node = &band.node->children[i];
            t.depth = band.depth + 1;
            queue.push_back(t);
        }
    }
}

}  // namespace

std::vector<PolarRectangleCell> decompose(const AnalyticFunction& f, const Configuration& config,
                                          double boundary_level, Cpx inside,
                                          const VerifyOptions& opts) {
    AnalyticFunction fp = f.derivative();
    std::vector<PolarRectangleCell> cells;
    std::vector<BandTask> queue;

    if (boundary_level > 0) {
        // trace the boundary level curve around `inside` and mark it
        GradientPath up;
        bool seeded = false;
        for (int attempt = 0; attempt < 24 && !seeded; ++attempt) {
            double rad = attempt == 0 ? 0.0 : 1e-4 * std::pow(3.0, attempt % 8);
            Cpx s0 = inside + rad * std::polar(1.0, 0.77 * attempt);
            try {
                if (std::abs(f.eval(s0)) >= boundary_level) continue;
                up = trace_gradient(f, s0, GradDirection::Ascent, boundary_level);
                seeded = !up.hit_critical;
            } catch (const Error&) {
            }
        }
        if (!seeded)
            throw Error("verify", "could not reach the boundary level from the inside point");
        LevelArcTrace loop = trace_level_curve(f, up.points.back(), boundary_level);
        if (!loop.closed) throw Error("verify", "boundary level curve did not close");
        LevelGraph g;
        g.level = boundary_level;
        LevelArc arc;
        arc.id = 0;
        arc.level = boundary_level;
        arc.pts = loop.pts;
        g.arcs.push_back(arc);
        build_faces(g);
        distinguished_points(f, g);
        // when the boundary level sits at/below the top member, descend to
        // the unique real child the loop actually encloses
        const Configuration* node = &config;
        while (!node->member.is_point &&
               boundary_level <= node->member.H * (1 + 1e-9)) {
            const Configuration* next = nullptr;
            for (const auto& c : node->children) {
                bool real_child = !c.member.is_point || !c.member.implied;
                if (c.member.is_point && c.member.implied) real_child = false;
                if (!real_child) continue;
                Cpx probe = c.member.is_point ? c.member.point_pos
                                              : c.member.skeleton.arcs[0].pts[0];
                if (winding_number(loop.pts, probe) != 0) {
                    if (next) throw Error("verify", "boundary loop encloses several children");
                    next = &c;
                }
            }
            if (!next) throw Error("verify", "boundary loop encloses no real child");
            node = next;
        }
        BandTask top;
        for (const auto& mk : g.arcs[0].marks) top.anchors.push_back(mk.pos);
        if (top.anchors.empty()) throw Error("verify", "no distinguished point on the boundary");
        top.r_out = boundary_level;
        top.node = node;
        top.depth = 0;
        queue.push_back(top);
    } else {
        const Configuration* real = outermost_real(config);
        if (!real) throw Error("verify", "no real structure to verify");
        if (real->member.is_point)
            throw Error("verify", "a bare zero needs a positive boundary level");
        const ConfigMember& m = real->member;
        auto bf = m.bounded_faces();
        for (size_t i = 0; i < bf.size(); ++i) {
            BandTask t;
            t.anchors = anchor_probes(m, false, bf[i]);
            t.r_out = m.H;
            t.node = &real->children[i];
            t.depth = 0;
            queue.push_back(t);
        }
    }

    for (size_t qi = 0; qi < queue.size(); ++qi) {
        BandTask task = queue[qi];  // copy: emit_band_cells grows the queue
        emit_band_cells(f, fp, task, opts, cells, queue);
    }

    // cell-level injectivity of f itself (sampled)
    for (const auto& c : cells) {
        for (size_t i = 0; i < c.z.size(); ++i) {
            for (size_t j = i + 1; j < c.z.size(); ++j) {
                if (std::abs(c.z[i] - c.z[j]) < 1e-9 &&
                    std::abs(c.values[i] - c.values[j]) > 1e-7)
                    throw Error("verify",
                                "injectivity sample failure in cell " + std::to_string(c.id));
            }
        }
    }
    return cells;
}

double build_phi(const AnalyticFunction& f, const AnalyticFunction& p,
                 std::vector<PolarRectangleCell>& cells, int& alignment,
                 const VerifyOptions& opts) {
    (void)opts;
    (void)f;
    AnalyticFunction pp = p.derivative();
    if (cells.empty()) throw Error("verify", "no cells");

    // alignment candidates: model-side preimages of the first anchor value
    Cpx v0 = cells[0].values[0];
    std::vector<Cpx> candidates;
    if (auto coeffs = p.polynomial_coeffs()) {
        std::vector<Cpx> shifted = *coeffs;
        shifted[0] -= v0;
        candidates = poly_roots(shifted);
    } else {
        throw Error("verify", "the model must be a polynomial");
    }

    double best_err = 1e300;
    for (size_t cand = 0; cand < candidates.size(); ++cand) {
        double err = 0;
        bool ok = true;
        std::vector<std::vector<Cpx>> ws(cells.size());
        Cpx chain_init = candidates[cand];
        for (size_t ci = 0; ci < cells.size() && ok; ++ci) {
            const auto& c = cells[ci];
            ws[ci].resize(c.z.size());
            // seed this cell from the geometrically nearest already-solved
            // sample (continuation through shared boundaries), else chain
            Cpx init = chain_init;
            double bd = 1e300;
            for (size_t cj = 0; cj < ci; ++cj) {
                for (size_t s = 0; s < cells[cj].z.size(); s += 7) {
                    double d = std::abs(cells[cj].z[s] - c.z[0]);
                    if (d < bd) {
                        bd = d;
                        init = ws[cj][s];
                    }
                }
            }
            try {
                for (int j = 0; j < c.nr && ok; ++j) {
                    Cpx row_init = init;
                    for (int k = 0; k < c.nt; ++k) {
                        size_t idx = size_t(j) * c.nt + k;
                        Cpx target = c.values[idx];
                        Cpx w = newton_value(p, pp, target, k == 0 ? init : row_init, "phi grid");
                        ws[ci][idx] = w;
                        row_init = w;
                        if (k == 0) init = w;
                        err = std::max(err, std::abs(p.eval(w) - target));
                    }
                }
            } catch (const Error&) {
                ok = false;
            }
        }
        if (!ok) continue;
        // global injectivity across all samples rules out wrong alignments
        // that fold two source cells onto one model branch
        int collisions = 0;
        for (size_t a = 0; a < cells.size(); ++a) {
            for (size_t b = a + 1; b < cells.size(); ++b) {
                if (cells[a].depth != cells[b].depth) continue;
                for (size_t s = 0; s < ws[a].size(); s += 13) {
                    for (size_t t = 0; t < ws[b].size(); t += 13) {
                        if (std::abs(ws[a][s] - ws[b][t]) < 1e-7 &&
                            std::abs(cells[a].z[s] - cells[b].z[t]) > 1e-6)
                            ++collisions;
                    }
                }
            }
        }
        if (collisions > 0) continue;
        for (size_t ci = 0; ci < cells.size(); ++ci) cells[ci].w = std::move(ws[ci]);
        alignment = static_cast<int>(cand);
        best_err = err;
        return best_err;
    }
    throw Error("verify", "no anchor alignment produced a consistent model map");
}

namespace {

double stitch_continuity(const AnalyticFunction& f, const AnalyticFunction& p,
                         const std::vector<PolarRectangleCell>& cells,
                         const std::vector<Cpx>& pinch_points) {
    AnalyticFunction fp = f.derivative();
    AnalyticFunction pp = p.derivative();
    double worst = 0;
    // compare phi across shared boundaries: for neighboring samples of
    // different cells that are geometrically adjacent, solve the midpoint
    // value from both sides
    for (size_t a = 0; a < cells.size(); ++a) {
        for (size_t b = a + 1; b < cells.size(); ++b) {
            int checked = 0;
            for (size_t s = 0; s < cells[a].z.size() && checked < 12; s += 5) {
                // nearest sample of b
                size_t bt = 0;
                double bd = 1e300;
                for (size_t t = 0; t < cells[b].z.size(); t += 3) {
                    double d = std::abs(cells[a].z[s] - cells[b].z[t]);
                    if (d < bd) {
                        bd = d;
                        bt = t;
                    }
                }
                // adjacency in z-space: within a couple of local grid steps
                size_t s2 = s + 1 < cells[a].z.size() ? s + 1 : s - 1;
                double spacing = std::abs(cells[a].z[s] - cells[a].z[s2]) + 1e-9;
                if (bd > 2.5 * spacing) continue;
                // cells that meet only at a zero or a critical point sit on
                // different branches there; skip the pinch neighborhoods
                if (std::abs(cells[a].values[s]) < 0.02 * cells[a].r_out) continue;
                Cpx mid = 0.5 * (cells[a].z[s] + cells[b].z[bt]);
                bool pinched = false;
                for (Cpx q : pinch_points)
                    if (std::abs(mid - q) < 5e-3) pinched = true;
                if (pinched) continue;
                Cpx v;
                try {
                    v = f.eval(mid);
                    Cpx wa = newton_value(p, pp, v, cells[a].w[s], "stitch a");
                    Cpx wb = newton_value(p, pp, v, cells[b].w[bt], "stitch b");
                    worst = std::max(worst, std::abs(wa - wb));
                    ++checked;
                } catch (const Error&) {
                }
            }
        }
    }
    return worst;
}

double cr_residual_of(const std::vector<PolarRectangleCell>& cells) {
    double worst = 0;
    for (const auto& c : cells) {
        for (int j = 1; j + 1 < c.nr; ++j) {
            for (int k = 1; k + 1 < c.nt; ++k) {
                auto at = [&](int jj, int kk) { return size_t(jj) * c.nt + kk; };
                Cpx dzr = c.z[at(j + 1, k)] - c.z[at(j - 1, k)];
                Cpx dzt = c.z[at(j, k + 1)] - c.z[at(j, k - 1)];
                Cpx dwr = c.w[at(j + 1, k)] - c.w[at(j - 1, k)];
                Cpx dwt = c.w[at(j, k + 1)] - c.w[at(j, k - 1)];
                if (std::abs(dzr) < 1e-12 || std::abs(dzt) < 1e-12) continue;
                Cpx d1 = dwr / dzr, d2 = dwt / dzt;
                double scale = std::max(std::abs(d1), std::abs(d2));
                if (scale < 1e-12) continue;
                worst = std::max(worst, std::abs(d1 - d2) / scale);
            }
        }
    }
    return worst;
}

VerifyOutput run_verify(const AnalyticFunction& f, const Configuration& config,
                        double boundary_level, Cpx inside, const AnalyticFunction& p,
                        const VerifyOptions& opts) {
    VerifyOutput out;

    // the match stage: the model's configuration must equal the source's
    try {
        double top_h = 0;
        std::function<void(const Configuration&)> scan = [&](const Configuration& c) {
            if (!c.member.is_point) top_h = std::max(top_h, c.member.H);
            for (const auto& ch : c.children) scan(ch);
        };
        scan(config);
        double pl = std::max(boundary_level, 1.5 * top_h);
        if (pl <= 0) pl = 1.0;
        Configuration cp = extract_config(p, pl);
        out.config_matched = config_equal(config, cp);
    } catch (const Error&) {
        out.config_matched = false;
    }

    out.cells = decompose(f, config, boundary_level, inside, opts);
    out.report.cell_count = static_cast<int>(out.cells.size());
    double err = build_phi(f, p, out.cells, out.alignment, opts);
    for (const auto& c : out.cells) out.report.samples += static_cast<long long>(c.z.size());
    out.report.max_model_error = err;
    std::vector<Cpx> pinch;
    std::function<void(const Configuration&)> collect = [&](const Configuration& c) {
        if (c.member.is_point) {
            pinch.push_back(c.member.point_pos);
        } else {
            for (const auto& v : c.member.skeleton.verts) pinch.push_back(v.pos);
        }
        for (const auto& ch : c.children) collect(ch);
    };
    collect(config);
    out.report.boundary_continuity_error = stitch_continuity(f, p, out.cells, pinch);
    out.cr_residual = cr_residual_of(out.cells);

    int violations = 0;
    for (const auto& c : out.cells) {
        for (size_t i = 0; i < c.w.size(); ++i)
            for (size_t j = i + 1; j < c.w.size(); ++j)
                if (std::abs(c.w[i] - c.w[j]) < 1e-9 && std::abs(c.z[i] - c.z[j]) >= 1e-9)
                    ++violations;
    }
    out.report.injectivity_violations = violations;
    return out;
}

}  // namespace

VerifyOutput verify_model_with_config(const AnalyticFunction& f, const Configuration& config,
                                      double boundary_level, Cpx inside, const AnalyticFunction& p,
                                      const VerifyOptions& opts) {
    return run_verify(f, config, boundary_level, inside, p, opts);
}

VerifyOutput verify_model(const AnalyticFunction& f, const std::vector<Cpx>& domain,
                          const AnalyticFunction& p, const VerifyOptions& opts) {
    if (!f.polynomial_coeffs())
        throw Error("verify",
                    "non-polynomial sources need a precomputed configuration "
                    "(use verify_model_with_config)");
    // boundary level above |f| on the domain polygon (edges sampled)
    double mx = 0;
    for (size_t i = 0; i < domain.size(); ++i) {
        Cpx a = domain[i], b = domain[(i + 1) % domain.size()];
        for (int k = 0; k <= 16; ++k) mx = std::max(mx, std::abs(f.eval(a + (b - a) * (k / 16.0))));
    }
    Cpx centroid = 0;
    for (Cpx z : domain) centroid += z;
    centroid /= double(domain.size());

    double level = 1.25 * mx;
    GfbPair pair;
    pair.f = f;
    pair.boundary_level = level;
    pair.region = polynomial_region(f, level);
    pair.seed = centroid;
    Configuration cfg = extract_config(pair);
    return run_verify(f, cfg, level, centroid, p, opts);
}

}  // namespace clc
