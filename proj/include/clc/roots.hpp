#pragma once

#include <vector>

#include "clc/complexfn.hpp"

namespace clc {

namespace tol {
inline constexpr double zero_tol = 1e-10;       // |f| at an accepted root
inline constexpr double root_tol = 1e-6;        // clearance a region boundary must keep
inline constexpr double crit_tol = 1e-6;        // |f'| below which a point counts as critical
inline constexpr double level_tol = 1e-8;       // relative on-level tolerance for traced points
inline constexpr double arg_tol = 1e-6;         // permitted arg(f) drift along a gradient path
inline constexpr double h_quant = 1e-6;         // quantization of H and vertex args
inline constexpr double winding_residue = 0.05; // max distance of a winding sum from an integer
inline constexpr int max_iter = 100;
}  // namespace tol

struct Rect {
    Cpx lo, hi;  // lower-left, upper-right
    double width() const { return hi.real() - lo.real(); }
    double height() const { return hi.imag() - lo.imag(); }
    double diameter() const { return std::abs(hi - lo); }
    Cpx center() const { return 0.5 * (lo + hi); }
    bool contains(Cpx z) const {
        return z.real() >= lo.real() && z.real() <= hi.real() && z.imag() >= lo.imag() &&
               z.imag() <= hi.imag();
    }
};

enum class RootKind { ZeroOfF, ZeroOfFPrime };

struct RootRecord {
    Cpx location;
    int multiplicity = 1;
    RootKind kind = RootKind::ZeroOfF;
};

// Net change of the continuous argument of f along a polyline path, in
// radians. Phase is unwrapped step by step; any step whose phase jump
// exceeds pi/2 is bisected. Throws if |f| drops to min_mod on the path.
double arg_variation(const AnalyticFunction& f, const std::vector<Cpx>& path,
                     double min_mod = tol::zero_tol);

// (1/2pi) * arg variation around a closed polyline, snapped to an integer.
// Errors if the residue exceeds tol::winding_residue after refinement.
int winding_count(const AnalyticFunction& f, const std::vector<Cpx>& closed_path,
                  double min_mod = tol::zero_tol);

int winding_count_rect(const AnalyticFunction& f, const Rect& r);
int winding_count_circle(const AnalyticFunction& f, Cpx center, double radius);

// All roots of f (kind ZeroOfF) or f' (ZeroOfFPrime) in the region, found by
// argument-principle subdivision down to cells of diameter <= 1e-3, then
// Newton refinement on f/f' (quadratic also at multiple roots); multiplicity
// is the winding of a radius-1e-4 circle around the refined root.
std::vector<RootRecord> find_roots(const AnalyticFunction& f, const Rect& region,
                                   RootKind kind = RootKind::ZeroOfF);

std::vector<Cpx> circle_path(Cpx center, double radius, int n = 64);
std::vector<Cpx> rect_path(const Rect& r, int per_side = 16);

}  // namespace clc
