#include "clc/realize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace clc {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Cpx poly_eval(const std::vector<Cpx>& coeffs, Cpx z) {
    Cpx r = 0;
    for (size_t i = coeffs.size(); i-- > 0;) r = r * z + coeffs[i];
    return r;
}

std::vector<Cpx> poly_derivative(const std::vector<Cpx>& coeffs) {
    std::vector<Cpx> d;
    for (size_t i = 1; i < coeffs.size(); ++i) d.push_back(double(i) * coeffs[i]);
    if (d.empty()) d.push_back(Cpx(0));
    return d;
}

std::vector<Cpx> poly_roots(const std::vector<Cpx>& coeffs) {
    std::vector<Cpx> c = coeffs;
    while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
    int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return {};
    for (auto& x : c) x /= c.back();
    std::vector<Cpx> r(n);
    for (int i = 0; i < n; ++i) r[i] = std::polar(0.4 + 0.9 * i / std::max(1, n), 2 * kPi * i / n + 0.5);
    for (int it = 0; it < 400; ++it) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            Cpx num = poly_eval(c, r[i]);
            Cpx den = 1;
            for (int j = 0; j < n; ++j)
                if (j != i) den *= r[i] - r[j];
            if (std::abs(den) == 0.0) den = 1e-30;
            Cpx step = num / den;
            r[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    std::sort(r.begin(), r.end(), [](Cpx a, Cpx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return r;
}

std::vector<Cpx> normalize(const std::vector<Cpx>& coeffs, double* canonical_angle) {
    std::vector<Cpx> c = coeffs;
    while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
    int n = static_cast<int>(c.size()) - 1;
    if (n < 1) throw Error("normalize", "degree must be at least 1");

    // center: root sum zero <=> c_{n-1} = 0 after the shift z -> z + m
    Cpx m = -c[n - 1] / (double(n) * c[n]);
    std::vector<Cpx> shifted = c;
    // Horner-style Taylor shift
    for (int i = 0; i < n; ++i)
        for (int j = n - 1; j >= i; --j) shifted[j] += m * shifted[j + 1];

    // scale: principal a with a^n = 1/c_n
    Cpx lead = shifted[n];
    double mod = std::pow(std::abs(lead), -1.0 / n);
    double ang = -std::arg(lead) / n;
    Cpx a = std::polar(mod, ang);
    std::vector<Cpx> out(shifted.size());
    Cpx ak = 1;
    for (int k = 0; k <= n; ++k) {
        out[k] = shifted[k] * ak;
        ak *= a;
    }
    out[n] = 1;          // exact monic
    out[n - 1] = 0;      // exact centered
    if (canonical_angle) *canonical_angle = ang;
    return out;
}

namespace {

// Critical value targets (with multiplicity) prescribed by a configuration.
void collect_targets(const Configuration& cfg, std::vector<Cpx>& out) {
    if (cfg.member.is_point) {
        for (int i = 1; i < cfg.member.point_z; ++i) out.push_back(Cpx(0));
        return;
    }
    for (const auto& v : cfg.member.skeleton.verts) {
        int mult = static_cast<int>(v.rotation.size()) / 2 - 1;
        for (int i = 0; i < mult; ++i)
            out.push_back(std::polar(cfg.member.H, v.vertex_arg));
    }
    for (const auto& c : cfg.children) collect_targets(c, out);
}

// Critical values of a monic centered polynomial, one per critical point
// with multiplicity.
std::vector<Cpx> critical_values(const std::vector<Cpx>& coeffs) {
    auto dp = poly_derivative(coeffs);
    auto crits = poly_roots(dp);
    std::vector<Cpx> vals;
    for (Cpx c : crits) vals.push_back(poly_eval(coeffs, c));
    return vals;
}

// Min-cost matching of two equal-size small point sets (<= 5), brute force.
double match_cost(const std::vector<Cpx>& a, const std::vector<Cpx>& b) {
    size_t n = a.size();
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        double c = 0;
        for (size_t i = 0; i < n; ++i) c += std::norm(a[i] - b[perm[i]]);
        if (c < best) best = c;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

struct Search {
    int n;                       // polynomial degree
    std::vector<Cpx> targets;    // n-1 critical values
    double objective(const std::vector<double>& x) const {
        std::vector<Cpx> coeffs(n + 1, Cpx(0));
        coeffs[n] = 1;
        for (int k = 0; k <= n - 2; ++k) coeffs[k] = Cpx(x[2 * k], x[2 * k + 1]);
        auto vals = critical_values(coeffs);
        if (vals.size() != targets.size()) return 1e300;
        return match_cost(vals, targets);
    }
    std::vector<Cpx> coeffs_of(const std::vector<double>& x) const {
        std::vector<Cpx> coeffs(n + 1, Cpx(0));
        coeffs[n] = 1;
        for (int k = 0; k <= n - 2; ++k) coeffs[k] = Cpx(x[2 * k], x[2 * k + 1]);
        return coeffs;
    }
};

// Coordinate-wise adaptive-step descent; the objective is piecewise smooth.
double coordinate_descent(const Search& s, std::vector<double>& x, double step0) {
    double f = s.objective(x);
    std::vector<double> step(x.size(), step0);
    for (int sweep = 0; sweep < 600; ++sweep) {
        double before = f;
        for (size_t i = 0; i < x.size(); ++i) {
            for (int tries = 0; tries < 24; ++tries) {
                double old = x[i];
                x[i] = old + step[i];
                double fp = s.objective(x);
                if (fp < f) {
                    f = fp;
                    step[i] *= 1.4;
                    break;
                }
                x[i] = old - step[i];
                double fm = s.objective(x);
                if (fm < f) {
                    f = fm;
                    step[i] *= 1.4;
                    break;
                }
                x[i] = old;
                step[i] *= 0.5;
                if (step[i] < 1e-13) break;
            }
        }
        double maxstep = *std::max_element(step.begin(), step.end());
        if (f < 1e-24 || (before - f) < 1e-18 * (1 + f)) {
            if (maxstep < 1e-11 || f < 1e-24) break;
        }
    }
    return f;
}

}  // namespace

RealizationResult realize(const Configuration& target, uint64_t seed, int max_restarts) {
    auto violations = validate(target);
    if (!violations.empty())
        throw Error("realize", "target configuration is invalid: " + violations.front());
    int n = total_degree(target);
    if (n > kDegreeCap) throw Error("realize", "target degree exceeds the cap");

    RealizationResult res;
    if (target.is_point()) {
        // pure power: p(z) = z^n
        res.coefficients.assign(n + 1, Cpx(0));
        res.coefficients[n] = 1;
        res.achieved_config = extract_config(AnalyticFunction::from_coeffs(res.coefficients), 1.0);
        res.residual = 0;
        res.success = config_equal(res.achieved_config, target);
        res.attempts = 1;
        return res;
    }

    Search s;
    s.n = n;
    collect_targets(target, s.targets);
    if (static_cast<int>(s.targets.size()) != n - 1)
        throw Error("realize", "configuration critical multiplicities do not sum to degree-1");
    double maxH = 0;
    for (Cpx t : s.targets) maxH = std::max(maxH, std::abs(t));

    double best_res = 1e300;
    std::vector<Cpx> best_coeffs;
    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        std::mt19937_64 rng(seed * 1000003 + attempt);
        std::uniform_real_distribution<double> u(-1, 1);
        // roots in the unit disk, then scale so the top critical modulus
        // matches the top target modulus
        std::vector<Cpx> roots(n);
        for (auto& r : roots) {
            do {
                r = Cpx(u(rng), u(rng));
            } while (std::abs(r) > 1);
        }
        Cpx mean = std::accumulate(roots.begin(), roots.end(), Cpx(0)) / double(n);
        for (auto& r : roots) r -= mean;
        std::vector<Cpx> coeffs{Cpx(1)};
        for (Cpx r : roots) {
            std::vector<Cpx> nxt(coeffs.size() + 1, Cpx(0));
            for (size_t j = 0; j < coeffs.size(); ++j) {
                nxt[j + 1] += coeffs[j];
                nxt[j] -= r * coeffs[j];
            }
            coeffs = std::move(nxt);
        }
        std::reverse(coeffs.begin(), coeffs.end());
        double m0 = 0;
        for (Cpx v : critical_values(coeffs)) m0 = std::max(m0, std::abs(v));
        if (m0 > 0 && maxH > 0) {
            double sc = std::pow(m0 / maxH, 1.0 / n);
            Cpx sk = 1;
            for (int k = 0; k <= n; ++k) {
                coeffs[k] *= sk / std::pow(sc, n);
                sk *= sc;
            }
            coeffs[n] = 1;
        }

        std::vector<double> x(2 * (n - 1));
        for (int k = 0; k <= n - 2; ++k) {
            x[2 * k] = coeffs[k].real();
            x[2 * k + 1] = coeffs[k].imag();
        }
        double f = coordinate_descent(s, x, 0.2 * std::max(1.0, maxH));
        if (f < best_res) {
            best_res = f;
            best_coeffs = s.coeffs_of(x);
        }
        res.attempts = attempt + 1;
        if (f < 1e-16) {
            std::vector<Cpx> cand = s.coeffs_of(x);
            double eps_top = 1.5 * std::max(maxH, 1e-3);
            Configuration got;
            try {
                got = extract_config(AnalyticFunction::from_coeffs(cand), eps_top);
            } catch (const Error&) {
                continue;
            }
            if (config_equal(got, target)) {
                res.coefficients = normalize(cand, &res.canonical_angle);
                // normalize is gauge only; re-extract so the reported config
                // belongs to the reported coefficients
                res.achieved_config =
                    extract_config(AnalyticFunction::from_coeffs(res.coefficients), eps_top);
                if (!config_equal(res.achieved_config, target)) continue;
                res.residual = f;
                res.success = true;
                return res;
            }
        }
    }
    res.coefficients = best_coeffs;
    res.residual = best_res;
    res.success = false;
    return res;
}

}  // namespace clc
