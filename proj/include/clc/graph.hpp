#pragma once

#include <vector>

#include "clc/trace.hpp"

namespace clc {

// A dart: directed traversal of an arc starting at the given end (0 = from
// pts.front(), 1 = from pts.back()).
struct ArcEnd {
    int arc = -1;
    int end = 0;
    bool operator==(const ArcEnd& o) const { return arc == o.arc && end == o.end; }
};

struct DistMark {
    Cpx pos;
    double t = 0;  // position along the arc: index into pts plus fraction
};

struct LevelArc {
    int id = -1;
    std::vector<Cpx> pts;
    double level = 0;
    int end_vertex[2] = {-1, -1};  // -1,-1 for a closed loop
    bool is_extension = false;     // virtual piece (extension path / joined circle)
    double ext_delta_arg = 0;      // assigned arg change for virtual pieces
    double ext_arg0 = 0;           // arg at the forward start of a virtual piece
    int ext_marks = 0;             // distinguished marks carried by a virtual piece
    std::vector<DistMark> marks;   // distinguished points, increasing t
    bool closed() const { return end_vertex[0] < 0 && end_vertex[1] < 0; }
};

struct GraphVertex {
    int id = -1;
    Cpx pos;
    double vertex_arg = 0;  // arg f in [0, 2pi)
    int fprime_mult = 1;    // multiplicity as a zero of f'; degree = 2(mult+1)
    bool implied = false;
    std::vector<ArcEnd> rotation;  // incident arc-ends in CCW order
    std::vector<double> rot_angles;
};

struct Face {
    std::vector<ArcEnd> boundary;  // darts with the face on their left
    bool bounded = false;
    Cpx inner_pt;    // sample interior point (bounded faces)
    int zcount = 0;  // zeros of f inside, counted with multiplicity
};

struct LevelGraph {
    double level = 0;
    std::vector<GraphVertex> verts;
    std::vector<LevelArc> arcs;
    std::vector<Face> faces;
    int unbounded_face = -1;

    int degree(int v) const { return static_cast<int>(verts[v].rotation.size()); }
    std::vector<Cpx> face_polyline(const Face& f) const;
};

// Geometry helpers.
double signed_area(const std::vector<Cpx>& poly);
int winding_number(const std::vector<Cpx>& poly, Cpx p);
bool point_in_face(const LevelGraph& g, int face, Cpx p);

// Enumerates face orbits from the rotation system alone (next dart =
// reverse, then rotate; face kept on the dart's left). Does not decide
// boundedness.
void enumerate_face_orbits(LevelGraph& g);

// Classifies orbits by signed area and picks interior sample points.
// Requires arc geometry.
void annotate_faces_geometric(LevelGraph& g);

// Both steps: the standard face construction for traced graphs.
void build_faces(LevelGraph& g);

// Critical points of f that lie on the given level (vertex candidates).
struct OnLevelCritical {
    Cpx pos;
    int fprime_mult = 1;
};

// Traces every component of {|f| = level} inside the region: branches out of
// each on-level critical point (vertices of the graph), then closed curves
// reached by gradient ascent from each enclosed zero. One LevelGraph per
// connected component.
std::vector<LevelGraph> build_level_graphs(const AnalyticFunction& f, double level,
                                           const Rect& region,
                                           const std::vector<OnLevelCritical>& on_level,
                                           const std::vector<Cpx>& zeros);

// Component selection: the graph whose bounded faces contain z.
int component_containing(const std::vector<LevelGraph>& comps, Cpx z);

// Outgoing level-curve directions at a critical point, found by sampling
// |f| - level sign changes on a radius-1e-3 circle; 2(mult+1) of them.
std::vector<double> branch_angles(const AnalyticFunction& f, Cpx v, double level, int expected);

void check_level_graph_invariants(const LevelGraph& g);  // throws on violation

}  // namespace clc
