// Test-only oracles, independent of the library's tracing/winding paths.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "clc/complexfn.hpp"

namespace oracle {

using clc::Cpx;

// Marching squares on |f| - level over a uniform grid: returns the segment
// soup of the implicit curve. Deliberately brute force.
struct Segment {
    Cpx a, b;
};

inline std::vector<Segment> marching_squares(const std::function<double(Cpx)>& g, Cpx lo, Cpx hi,
                                             int n) {
    std::vector<double> vals((n + 1) * size_t(n + 1));
    double dx = (hi.real() - lo.real()) / n;
    double dy = (hi.imag() - lo.imag()) / n;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            vals[j * size_t(n + 1) + i] = g(Cpx(lo.real() + i * dx, lo.imag() + j * dy));

    auto interp = [&](Cpx p, Cpx q, double vp, double vq) {
        double t = vp / (vp - vq);
        return p + t * (q - p);
    };

    std::vector<Segment> segs;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            Cpx p00(lo.real() + i * dx, lo.imag() + j * dy);
            Cpx p10 = p00 + Cpx(dx, 0), p01 = p00 + Cpx(0, dy), p11 = p00 + Cpx(dx, dy);
            double v00 = vals[j * size_t(n + 1) + i], v10 = vals[j * size_t(n + 1) + i + 1];
            double v01 = vals[(j + 1) * size_t(n + 1) + i],
                   v11 = vals[(j + 1) * size_t(n + 1) + i + 1];
            std::vector<Cpx> xs;
            if ((v00 < 0) != (v10 < 0)) xs.push_back(interp(p00, p10, v00, v10));
            if ((v10 < 0) != (v11 < 0)) xs.push_back(interp(p10, p11, v10, v11));
            if ((v11 < 0) != (v01 < 0)) xs.push_back(interp(p11, p01, v11, v01));
            if ((v01 < 0) != (v00 < 0)) xs.push_back(interp(p01, p00, v01, v00));
            if (xs.size() == 2) segs.push_back({xs[0], xs[1]});
            if (xs.size() == 4) {
                // ambiguous saddle cell: split by the center sample
                double vc = g(0.5 * (p00 + p11));
                if ((vc < 0) == (v00 < 0)) {
                    segs.push_back({xs[0], xs[3]});
                    segs.push_back({xs[1], xs[2]});
                } else {
                    segs.push_back({xs[0], xs[1]});
                    segs.push_back({xs[2], xs[3]});
                }
            }
        }
    }
    return segs;
}

inline double dist_to_segments(const std::vector<Segment>& segs, Cpx p) {
    double best = 1e300;
    for (const auto& s : segs) {
        Cpx ab = s.b - s.a;
        double len2 = std::norm(ab);
        double t = len2 == 0 ? 0 : ((p - s.a) * std::conj(ab)).real() / len2;
        t = std::min(1.0, std::max(0.0, t));
        best = std::min(best, std::abs(p - (s.a + t * ab)));
    }
    return best;
}

inline Cpx central_diff(const clc::AnalyticFunction& f, Cpx z, double h = 1e-5) {
    return (f.eval(z + Cpx(h, 0)) - f.eval(z - Cpx(h, 0))) / (2 * h);
}

// Dense brute-force arg integral along a polyline (no adaptive machinery).
inline double brute_arg_variation(const clc::AnalyticFunction& f, const std::vector<Cpx>& path,
                                  int subdiv = 64) {
    double total = 0;
    Cpx prev = f.eval(path[0]);
    for (size_t i = 1; i < path.size(); ++i) {
        for (int k = 1; k <= subdiv; ++k) {
            Cpx z = path[i - 1] + (path[i] - path[i - 1]) * (double(k) / subdiv);
            Cpx v = f.eval(z);
            total += std::arg(v / prev);
            prev = v;
        }
    }
    return total;
}

inline std::mt19937_64 rng(uint64_t seed) { return std::mt19937_64(seed); }

inline Cpx random_in_disk(std::mt19937_64& g, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    while (true) {
        Cpx z(u(g), u(g));
        if (std::abs(z) <= radius) return z;
    }
}

// Random monic polynomial with all roots in a disk.
inline std::vector<Cpx> random_monic(std::mt19937_64& g, int degree, double root_radius) {
    std::vector<Cpx> coeffs{Cpx(1)};
    for (int i = 0; i < degree; ++i) {
        Cpx r = random_in_disk(g, root_radius);
        std::vector<Cpx> next(coeffs.size() + 1, Cpx(0));
        for (size_t j = 0; j < coeffs.size(); ++j) {
            next[j + 1] += coeffs[j];
            next[j] -= r * coeffs[j];
        }
        coeffs = std::move(next);
    }
    return coeffs;  // ascending, c0..cn
}

}  // namespace oracle
