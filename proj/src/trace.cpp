#include "clc/trace.hpp"

#include <algorithm>
#include <cmath>

namespace clc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Unit tangent of the level set at z; dir=+1 keeps |f| < level on the left.
Cpx level_tangent(Cpx fv, Cpx fpv, int dir) {
    Cpx t = Cpx(0, 1) * fv * std::conj(fpv);
    double m = std::abs(t);
    if (m == 0.0) return Cpx(0, 0);
    return double(dir) * t / m;
}

Cpx unit_gradient(Cpx fv, Cpx fpv) {
    Cpx g = fv * std::conj(fpv);
    double m = std::abs(g);
    if (m == 0.0) return Cpx(0, 0);
    return g / m;
}

double seg_point_dist(Cpx a, Cpx b, Cpx p) {
    Cpx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace

Cpx correct_to_level(const AnalyticFunction& f, const AnalyticFunction& fp, Cpx z, double level) {
    for (int it = 0; it < 8; ++it) {
        Cpx fv = f.eval(z);
        double m = std::abs(fv);
        if (std::abs(m - level) <= tol::level_tol * level) return z;
        Cpx fpv = fp.eval(z);
        double fpm = std::abs(fpv);
        if (fpm < tol::crit_tol) throw Error("trace", "step collapse near a critical point");
        z += unit_gradient(fv, fpv) * ((level - m) / fpm);
    }
    Cpx fv = f.eval(z);
    if (std::abs(std::abs(fv) - level) > 16 * tol::level_tol * level)
        throw Error("trace", "could not correct onto the level set");
    return z;
}

TraceResult trace_level_curve_dir(const AnalyticFunction& f, Cpx seed, double level, int dir,
                                  const TraceOptions& opts) {
    AnalyticFunction fp = f.derivative();
    AnalyticFunction fpp = fp.derivative();

    if (std::abs(std::abs(f.eval(seed)) - level) > 1e-3 * level)
        throw Error("trace", "seed is not on the requested level");
    Cpx z = correct_to_level(f, fp, seed, level);
    if (opts.clip && !opts.clip(z)) throw Error("trace", "seed outside the clip region");

    TraceResult res;
    res.pts.push_back(z);
    double traveled = 0.0;
    double max_step_used = 0.0;
    const Cpx start = z;

    auto near_snap = [&](Cpx a, Cpx b) -> int {
        for (size_t i = 0; i < opts.snap_points.size(); ++i) {
            if (static_cast<int>(i) == opts.suppress_snap && traveled < opts.suppress_dist)
                continue;
            if (seg_point_dist(a, b, opts.snap_points[i]) < opts.snap_radius)
                return static_cast<int>(i);
        }
        return -1;
    };

    while (true) {
        Cpx fv = f.eval(z);
        Cpx fpv = fp.eval(z);
        double fpm = std::abs(fpv);
        if (fpm < tol::crit_tol) {
            res.end = TraceEnd::StepCollapse;
            return res;
        }
        Cpx fppv = fpp.eval(z);
        double fppm = std::abs(fppv);
        double h = std::min(opts.step_max, 0.1 * std::abs(fv) / fpm);
        if (fppm > 1e-12) {
            // keeps polyline sag below ~1e-7 so halved-step retraces agree
            h = std::min(h, std::sqrt(8e-7 * fpm / fppm));
            h = std::min(h, 0.2 * fpm / fppm);
        }
        h = std::max(h, 1e-9);

        Cpx znew;
        bool ok = false;
        for (int attempt = 0; attempt < 24 && !ok; ++attempt) {
            Cpx t0 = level_tangent(fv, fpv, dir);
            Cpx zm = z + 0.5 * h * t0;
            Cpx t1 = level_tangent(f.eval(zm), fp.eval(zm), dir);
            if (std::abs(t1) == 0.0) t1 = t0;
            try {
                znew = correct_to_level(f, fp, z + h * t1, level);
                ok = true;
            } catch (const Error&) {
                h *= 0.5;
            }
        }
        if (!ok) {
            res.end = TraceEnd::StepCollapse;
            return res;
        }

        int si = near_snap(z, znew);
        if (si >= 0) {
            res.pts.push_back(opts.snap_points[si]);
            res.end = TraceEnd::SnapPoint;
            res.snap_index = si;
            return res;
        }

        if (opts.clip && !opts.clip(znew)) {
            // bisect the exit point against the clip predicate
            Cpx in = z, out = znew;
            for (int it = 0; it < 60; ++it) {
                Cpx mid = 0.5 * (in + out);
                (opts.clip(mid) ? in : out) = mid;
            }
            res.pts.push_back(in);
            res.end = TraceEnd::Clipped;
            return res;
        }

        double used = std::abs(znew - z);
        traveled += used;
        max_step_used = std::max(max_step_used, used);
        res.pts.push_back(znew);
        z = znew;

        if (traveled > 8 * max_step_used && std::abs(z - start) < 2 * used) {
            res.pts.back() = start;
            res.end = TraceEnd::Closed;
            return res;
        }
        if (traveled > opts.length_limit) {
            res.end = TraceEnd::LengthLimit;
            return res;
        }
    }
}

LevelArcTrace trace_level_curve(const AnalyticFunction& f, Cpx seed, double level,
                                const TraceOptions& opts) {
    TraceResult fwd = trace_level_curve_dir(f, seed, level, +1, opts);
    LevelArcTrace arc;
    if (fwd.end == TraceEnd::Closed) {
        arc.pts = std::move(fwd.pts);
        arc.closed = true;
        return arc;
    }
    if (fwd.end == TraceEnd::LengthLimit) throw Error("trace", "level curve exceeds length limit");
    if (fwd.end == TraceEnd::StepCollapse && opts.snap_points.empty())
        throw Error("trace", "step collapse near an unresolved singularity");

    TraceResult bwd = trace_level_curve_dir(f, seed, level, -1, opts);
    if (bwd.end == TraceEnd::LengthLimit) throw Error("trace", "level curve exceeds length limit");

    arc.pts.assign(bwd.pts.rbegin(), bwd.pts.rend());
    arc.pts.insert(arc.pts.end(), fwd.pts.begin() + 1, fwd.pts.end());
    arc.snap_start = bwd.snap_index;
    arc.snap_end = fwd.snap_index;
    arc.clipped_start = bwd.end == TraceEnd::Clipped;
    arc.clipped_end = fwd.end == TraceEnd::Clipped;
    return arc;
}

GradientPath trace_gradient(const AnalyticFunction& f, Cpx start, GradDirection dir,
                            double stop_level, const TraceOptions& opts) {
    AnalyticFunction fp = f.derivative();
    GradientPath path;
    path.direction = dir;

    Cpx z = start;
    Cpx f0 = f.eval(z);
    if (std::abs(f0) <= tol::zero_tol) throw Error("trace", "gradient start is a zero of f");
    if (std::abs(fp.eval(z)) <= tol::crit_tol)
        throw Error("trace", "gradient start is a critical point");
    path.start_level = std::abs(f0);
    double sign = dir == GradDirection::Ascent ? 1.0 : -1.0;
    if ((stop_level - path.start_level) * sign < 0)
        throw Error("trace", "stop level is behind the start level");

    // arg f is constant along gradient lines; track the lifted value.
    double theta0 = std::arg(f0);
    double lift = theta0;
    path.points.push_back(z);

    int guard = 0;
    while (true) {
        if (++guard > 2000000) throw Error("trace", "gradient trace exceeds step limit");
        Cpx fv = f.eval(z);
        double m = std::abs(fv);
        if ((m - stop_level) * sign >= 0) break;
        Cpx fpv = fp.eval(z);
        double fpm = std::abs(fpv);
        if (fpm < tol::crit_tol) {
            path.hit_critical = true;
            break;
        }
        double h = std::min(opts.step_max * 2, 0.1 * m / fpm);
        // do not overshoot the stop level: d|f|/ds = |f'| along the gradient
        h = std::min(h, std::abs(stop_level - m) / fpm * 1.25 + 1e-12);

        // strict monotone progress in |f|; a collapsing step means the flow
        // is running into a saddle
        Cpx znew;
        Cpx fn;
        while (true) {
            Cpx g0 = sign * unit_gradient(fv, fpv);
            Cpx zm = z + 0.5 * h * g0;
            Cpx gm = sign * unit_gradient(f.eval(zm), fp.eval(zm));
            if (std::abs(gm) == 0.0) gm = g0;
            znew = z + h * gm;
            fn = f.eval(znew);
            if ((std::abs(fn) - m) * sign > 0) break;
            h *= 0.5;
            if (h < 1e-10) {
                path.hit_critical = true;
                break;
            }
        }
        if (path.hit_critical) break;

        if (opts.clip && !opts.clip(znew)) throw Error("trace", "gradient path leaves the region");

        // transversal correction: restore arg f = theta0 along the level tangent
        Cpx fpn = fp.eval(znew);
        double fpnm = std::abs(fpn);
        if (fpnm > tol::crit_tol) {
            double lifted = lift + std::remainder(std::arg(fn) - lift, 2 * kPi);
            double err = lifted - theta0;
            Cpx t = Cpx(0, 1) * fn * std::conj(fpn);
            t /= std::abs(t);
            znew -= t * (err * std::abs(fn) / fpnm);
            fn = f.eval(znew);
        }
        lift = lift + std::remainder(std::arg(fn) - lift, 2 * kPi);
        z = znew;
        path.points.push_back(z);
    }

    if (!path.hit_critical) {
        // land exactly on stop_level * e^{i theta0} by complex Newton
        Cpx target = std::polar(stop_level, theta0);
        for (int it = 0; it < 32; ++it) {
            Cpx fv = f.eval(z);
            if (std::abs(fv - target) < 1e-13 * stop_level) break;
            Cpx fpv = fp.eval(z);
            if (std::abs(fpv) < tol::crit_tol) break;
            z -= (fv - target) / fpv;
        }
        Cpx fn = f.eval(z);
        double lifted = lift + std::remainder(std::arg(fn) - lift, 2 * kPi);
        if (std::abs(lifted - theta0) > tol::arg_tol)
            throw Error("trace", "arg drift along gradient path exceeds tolerance");
        path.points.back() = z;
    }
    path.end_level = std::abs(f.eval(path.points.back()));
    return path;
}

}  // namespace clc
