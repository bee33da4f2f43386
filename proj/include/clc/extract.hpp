#pragma once

#include <optional>

#include "clc/config.hpp"

namespace clc {

// A generalized finite Blaschke product at an arbitrary boundary level:
// f analytic on the closure of G, |f| = boundary_level and f' != 0 on the
// boundary, G the bounded face of the level-set component picked by seed
// (default: the outermost component, which must enclose every zero).
struct GfbPair {
    AnalyticFunction f;
    double boundary_level = 1.0;
    Rect region;
    std::optional<Cpx> seed;
};

// Marks every point of the traced graph where f takes a positive real value
// (argument zero), by unwrapping arg f along each arc and Newton-refining
// each crossing onto f(z) = level. Validates that each bounded face carries
// exactly winding_count(f, boundary) marks.
void distinguished_points(const AnalyticFunction& f, LevelGraph& g);

// Pi(f, G): the recursive critical level-curve configuration.
Configuration extract_config(const GfbPair& pair);

// Polynomial convenience: working region from a coefficient bound.
Configuration extract_config(const AnalyticFunction& f, double level,
                             std::optional<Cpx> seed = std::nullopt);

// Default extraction level for a polynomial: safely above every critical
// modulus so the outermost level component is a simple closed curve.
double default_extract_level(const AnalyticFunction& f, const Rect& region);

Rect polynomial_region(const AnalyticFunction& f, double level);

// Angular sector of the unbounded face at each outer-walk vertex visit,
// aligned with ConfigMember::outer_marks() vertex entries.
struct VisitSector {
    int vertex = -1;
    int visit = -1;
    double angle_from = 0, angle_to = 0;  // CCW interval
};
std::vector<VisitSector> outer_visit_sectors(const ConfigMember& m);

}  // namespace clc
