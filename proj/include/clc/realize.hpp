#pragma once

#include "clc/extract.hpp"

namespace clc {

struct RealizationResult {
    std::vector<Cpx> coefficients;  // ascending, monic, centered
    Configuration achieved_config;
    double residual = 0;
    int attempts = 0;
    bool success = false;
    double canonical_angle = 0;
};

inline constexpr int kDegreeCap = 6;

// Searches monic centered polynomials of degree total_degree(target) whose
// critical values match the target's (H, vertex arg) data, then accepts only
// when the extracted configuration equals the target exactly. Deterministic
// for a fixed seed. Throws on invalid targets; returns success=false with
// the best residual when every restart misses.
RealizationResult realize(const Configuration& target, uint64_t seed = 1, int max_restarts = 24);

// Gauge fixing of the affine precomposition freedom: monic and centered
// (root sum zero). The leftover n-fold rotation is reported as an angle.
std::vector<Cpx> normalize(const std::vector<Cpx>& coeffs, double* canonical_angle = nullptr);

// Small dense-polynomial helpers used by the search.
Cpx poly_eval(const std::vector<Cpx>& coeffs, Cpx z);
std::vector<Cpx> poly_derivative(const std::vector<Cpx>& coeffs);
std::vector<Cpx> poly_roots(const std::vector<Cpx>& coeffs);  // Durand-Kerner

}  // namespace clc
