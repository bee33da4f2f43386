#pragma once

#include <functional>
#include <vector>

#include "clc/roots.hpp"

namespace clc {

// Predicate that is true inside the allowed region. Traces stop on exit and
// refine the exact exit point by bisection.
using RegionTest = std::function<bool(Cpx)>;

enum class TraceEnd { Closed, SnapPoint, Clipped, StepCollapse, LengthLimit };

struct TraceResult {
    std::vector<Cpx> pts;
    TraceEnd end = TraceEnd::Closed;
    int snap_index = -1;  // index into the snap-point list when end == SnapPoint
};

struct TraceOptions {
    double step_max = 0.01;
    double length_limit = 1e4;
    std::vector<Cpx> snap_points;   // refined critical points lying on the level
    double snap_radius = 1.5e-3;
    // snapping to this point is suppressed until the trace has traveled
    // suppress_dist (used when the trace starts at that critical point)
    int suppress_snap = -1;
    double suppress_dist = 0;
    RegionTest clip;                // empty = unclipped
};

// Follows {|f| = level} from seed in one direction (+1 keeps the region
// |f| < level on the left). Predictor along i*f*conj(f'), Newton correction
// back onto the level after every step; step size adapts to curvature so a
// halved-step retrace stays within 10*level_tol of the polyline.
TraceResult trace_level_curve_dir(const AnalyticFunction& f, Cpx seed, double level, int dir,
                                  const TraceOptions& opts = {});

struct LevelArcTrace {
    std::vector<Cpx> pts;
    bool closed = false;
    // Endpoint annotations, one per open end: snap index or -1 when clipped.
    int snap_start = -1, snap_end = -1;
    bool clipped_start = false, clipped_end = false;
};

// Both directions from the seed merged into one arc (or a closed loop).
LevelArcTrace trace_level_curve(const AnalyticFunction& f, Cpx seed, double level,
                                const TraceOptions& opts = {});

enum class GradDirection { Ascent, Descent };

struct GradientPath {
    std::vector<Cpx> points;
    GradDirection direction = GradDirection::Ascent;
    double start_level = 0, end_level = 0;
    bool hit_critical = false;  // stopped at a critical point before stop_level
};

// Steepest ascent/descent line of |f| from start until |f| reaches
// stop_level. arg(f) is held constant along the way (corrected each step);
// total drift beyond tol::arg_tol is an error.
GradientPath trace_gradient(const AnalyticFunction& f, Cpx start, GradDirection dir,
                            double stop_level, const TraceOptions& opts = {});

// Newton-corrects z onto {|f| = level} along the gradient direction.
Cpx correct_to_level(const AnalyticFunction& f, const AnalyticFunction& fp, Cpx z, double level);

}  // namespace clc
