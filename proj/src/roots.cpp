#include "clc/roots.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace clc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Phase step between two nonzero values, unwrapped into (-pi, pi].
double phase_step(Cpx a, Cpx b) { return std::arg(b / a); }

// Recursive bisection until each sub-step's jump is below pi/2.
double arg_between(const AnalyticFunction& f, Cpx za, Cpx zb, Cpx fa, Cpx fb, double min_mod,
                   int depth) {
    double d = phase_step(fa, fb);
    if (std::abs(d) <= kPi / 2) return d;
    if (depth > 48) throw Error("winding", "path passes too close to a zero");
    Cpx zm = 0.5 * (za + zb);
    Cpx fm = f.eval(zm);
    if (std::abs(fm) <= min_mod) throw Error("winding", "path passes through a zero");
    return arg_between(f, za, zm, fa, fm, min_mod, depth + 1) +
           arg_between(f, zm, zb, fm, fb, min_mod, depth + 1);
}

}  // namespace

double arg_variation(const AnalyticFunction& f, const std::vector<Cpx>& path, double min_mod) {
    if (path.size() < 2) return 0.0;
    double total = 0.0;
    Cpx fprev = f.eval(path[0]);
    if (std::abs(fprev) <= min_mod) throw Error("winding", "path passes through a zero");
    for (size_t i = 1; i < path.size(); ++i) {
        Cpx fi = f.eval(path[i]);
        if (std::abs(fi) <= min_mod) throw Error("winding", "path passes through a zero");
        total += arg_between(f, path[i - 1], path[i], fprev, fi, min_mod, 0);
        fprev = fi;
    }
    return total;
}

int winding_count(const AnalyticFunction& f, const std::vector<Cpx>& closed_path, double min_mod) {
    std::vector<Cpx> path = closed_path;
    if (path.size() < 3) throw Error("winding", "path too short");
    if (std::abs(path.front() - path.back()) > 1e-12) path.push_back(path.front());
    double w = arg_variation(f, path, min_mod) / (2 * kPi);
    double r = std::round(w);
    if (std::abs(w - r) >= tol::winding_residue) {
        // refine once by doubling samples on each segment
        std::vector<Cpx> fine;
        fine.reserve(path.size() * 2);
        for (size_t i = 0; i + 1 < path.size(); ++i) {
            fine.push_back(path[i]);
            fine.push_back(0.5 * (path[i] + path[i + 1]));
        }
        fine.push_back(path.back());
        w = arg_variation(f, fine, min_mod) / (2 * kPi);
        r = std::round(w);
        if (std::abs(w - r) >= tol::winding_residue)
            throw Error("winding", "residue too large after refinement");
    }
    return static_cast<int>(r);
}

std::vector<Cpx> circle_path(Cpx center, double radius, int n) {
    std::vector<Cpx> p;
    p.reserve(n + 1);
    for (int i = 0; i <= n; ++i) {
        double t = 2 * kPi * i / n;
        p.push_back(center + radius * Cpx(std::cos(t), std::sin(t)));
    }
    return p;
}

std::vector<Cpx> rect_path(const Rect& r, int per_side) {
    std::vector<Cpx> p;
    Cpx c[4] = {r.lo, Cpx(r.hi.real(), r.lo.imag()), r.hi, Cpx(r.lo.real(), r.hi.imag())};
    for (int s = 0; s < 4; ++s) {
        Cpx a = c[s], b = c[(s + 1) % 4];
        for (int i = 0; i < per_side; ++i) p.push_back(a + (b - a) * (double(i) / per_side));
    }
    p.push_back(c[0]);
    return p;
}

int winding_count_rect(const AnalyticFunction& f, const Rect& r) {
    return winding_count(f, rect_path(r));
}

int winding_count_circle(const AnalyticFunction& f, Cpx center, double radius) {
    return winding_count(f, circle_path(center, radius));
}

namespace {

// Minimum |g| over the samples of a rectangle boundary.
double boundary_min(const AnalyticFunction& g, const Rect& r) {
    double m = 1e300;
    for (Cpx z : rect_path(r, 8)) m = std::min(m, std::abs(g.eval(z)));
    return m;
}

// Newton on f/f' converges quadratically to roots of any multiplicity. The
// simple-zero surrogate f/f' is iterated to step convergence so that multiple
// roots land well within the multiplicity-probe circle.
bool newton_refine(const AnalyticFunction& f, const AnalyticFunction& fp,
                   const AnalyticFunction& fpp, Cpx& z) {
    for (int it = 0; it < tol::max_iter; ++it) {
        Cpx fv = f.eval(z);
        Cpx fpv = fp.eval(z);
        Cpx denom = fpv * fpv - fv * fpp.eval(z);
        if (std::abs(denom) == 0.0) break;
        Cpx step = fv * fpv / denom;
        z -= step;
        if (!is_finite(z)) return false;
        if (std::abs(step) < 1e-13) break;
    }
    return std::abs(f.eval(z)) <= tol::zero_tol;
}

std::optional<int> try_rect_winding(const AnalyticFunction& g, const Rect& r) {
    if (boundary_min(g, r) <= 1e-7) return std::nullopt;
    try {
        return winding_count(g, rect_path(r, 24));
    } catch (const Error&) {
        return std::nullopt;
    }
}

void subdivide(const AnalyticFunction& g, const Rect& r, int count, std::vector<Cpx>& seeds) {
    if (count <= 0) return;
    if (r.diameter() <= 1e-3) {
        seeds.push_back(r.center());
        return;
    }
    // split fractions jittered until all four quadrant boundaries clear roots
    static const double fracs[] = {0.5, 0.53, 0.47, 0.57, 0.43, 0.61, 0.39, 0.67, 0.33};
    for (double fx : fracs) {
        double mx = r.lo.real() + fx * r.width();
        double my = r.lo.imag() + fx * r.height();
        Rect quads[4] = {
            {r.lo, Cpx(mx, my)},
            {Cpx(mx, r.lo.imag()), Cpx(r.hi.real(), my)},
            {Cpx(r.lo.real(), my), Cpx(mx, r.hi.imag())},
            {Cpx(mx, my), r.hi},
        };
        int windings[4];
        int sum = 0;
        bool ok = true;
        for (int q = 0; q < 4 && ok; ++q) {
            auto w = try_rect_winding(g, quads[q]);
            if (!w) {
                ok = false;
            } else {
                windings[q] = *w;
                sum += *w;
            }
        }
        if (!ok || sum != count) continue;
        for (int q = 0; q < 4; ++q)
            if (windings[q] > 0) subdivide(g, quads[q], windings[q], seeds);
        return;
    }
    // unsplittable tight cluster or multiple root: hand it to Newton whole
    seeds.push_back(r.center());
}

}  // namespace

std::vector<RootRecord> find_roots(const AnalyticFunction& f, const Rect& region, RootKind kind) {
    AnalyticFunction g = kind == RootKind::ZeroOfF ? f : f.derivative();
    if (boundary_min(g, region) < tol::root_tol)
        throw Error("find_roots", "region boundary is too close to a root");

    int total = winding_count(g, rect_path(region, 32));
    std::vector<RootRecord> out;
    if (total == 0) return out;

    std::vector<Cpx> seeds;
    subdivide(g, region, total, seeds);

    AnalyticFunction gp = g.derivative();
    AnalyticFunction gpp = gp.derivative();
    for (Cpx seed : seeds) {
        Cpx z = seed;
        if (!newton_refine(g, gp, gpp, z))
            throw Error("find_roots", "Newton refinement did not converge");
        if (!region.contains(z)) continue;
        bool dup = false;
        for (const auto& r : out)
            if (std::abs(r.location - z) < 1e-6) dup = true;
        if (dup) continue;
        RootRecord rec;
        rec.location = z;
        rec.kind = kind;
        rec.multiplicity = winding_count(g, circle_path(z, 1e-4, 48), 1e-300);
        if (rec.multiplicity < 1) throw Error("find_roots", "multiplicity check failed");
        out.push_back(rec);
    }

    int sum = 0;
    for (const auto& r : out) sum += r.multiplicity;
    if (sum != total)
        throw Error("find_roots", "multiplicities do not account for the boundary winding");
    std::sort(out.begin(), out.end(), [](const RootRecord& a, const RootRecord& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return out;
}

}  // namespace clc
