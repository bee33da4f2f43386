#pragma once

#include "clc/extract.hpp"
#include "clc/json_io.hpp"

namespace clc {

// One polar-rectangle cell: f restricted to it is injective and its image is
// the annulus sector [r_in, r_out] x [0, 2pi) anchored at a distinguished
// point. Samples are stored row-major (nr radial rows, nt angular columns).
struct PolarRectangleCell {
    int id = -1;
    double r_in = 0, r_out = 0;
    Cpx anchor_z;                 // distinguished point on the outer boundary
    int depth = 0;                // band nesting depth
    int nr = 0, nt = 0;
    std::vector<Cpx> z;           // source samples (f side)
    std::vector<Cpx> w;           // matched model samples (p side); empty until build_phi
    std::vector<Cpx> values;      // common image values f(z) = p(w)
};

struct VerifyOutput {
    ModelReport report;
    std::vector<PolarRectangleCell> cells;
    double cr_residual = 0;        // worst relative Cauchy-Riemann residual of phi
    bool config_matched = false;
    int alignment = -1;            // accepted anchor candidate on the p side
};

struct VerifyOptions {
    int grid = 32;                  // samples per cell side
    double model_tol = 1e-6;
    int max_restarts_alignment = 16;
};

// Cuts the source structure along member level curves and gradient lines
// through the distinguished points; one cell per band sector. The top band
// descends from boundary_level (traced around `inside`) unless the level is
// zero, in which case bands start at the configuration's real members.
std::vector<PolarRectangleCell> decompose(const AnalyticFunction& f, const Configuration& config,
                                          double boundary_level, Cpx inside,
                                          const VerifyOptions& opts = {});

// Fills cell.w by Newton continuation from an anchor alignment; returns the
// worst |f(z) - p(w)| over all samples. Throws when no alignment closes up.
double build_phi(const AnalyticFunction& f, const AnalyticFunction& p,
                 std::vector<PolarRectangleCell>& cells, int& alignment,
                 const VerifyOptions& opts = {});

// Full pipeline: structure of f on the domain, configuration match against
// p, cell decomposition, phi construction, and the numeric report.
VerifyOutput verify_model(const AnalyticFunction& f, const std::vector<Cpx>& domain,
                          const AnalyticFunction& p, const VerifyOptions& opts = {});

// Variant reusing a precomputed configuration of f (the extender's output).
VerifyOutput verify_model_with_config(const AnalyticFunction& f, const Configuration& config,
                                      double boundary_level, Cpx inside, const AnalyticFunction& p,
                                      const VerifyOptions& opts = {});

}  // namespace clc
