#pragma once

#include <string>

#include "clc/graph.hpp"

namespace clc {

// One entry in the cyclic sequence of distinguished points around a face
// boundary or around the outer walk. A distinguished vertex contributes one
// entry per visit (each visit stands for a distinct sector).
struct MarkId {
    int arc = -1;      // arc-interior mark: arc id + ordinal along the arc
    int ordinal = -1;
    int vertex = -1;   // vertex mark (quantized arg 0)
    int visit = -1;    // which visit along the walk
    bool operator==(const MarkId& o) const {
        return arc == o.arc && ordinal == o.ordinal && vertex == o.vertex && visit == o.visit;
    }
};

struct MemberFaceData {
    int face = -1;  // index into skeleton.faces
    int z = 0;      // prescribed zero count of the face
};

// A member of P_a: a single point (zero) or a critical level curve graph
// with auxiliary data (H, per-face zero counts, distinguished marks on the
// arcs, vertex arguments).
struct ConfigMember {
    bool is_point = false;
    int point_z = 1;
    bool implied = false;  // bookkeeping only; not part of the member identity
    Cpx point_pos{};
    double H = 0;
    LevelGraph skeleton;
    std::vector<MemberFaceData> face_data;  // one per bounded face, in face order

    std::vector<int> bounded_faces() const;
    // Distinguished marks around a face boundary, in face-walk cyclic order.
    std::vector<MarkId> face_marks(int face_index) const;
    // The unbounded-face orbit reversed, i.e. counterclockwise around the
    // member, so that it is co-oriented with enclosing face walks.
    std::vector<ArcEnd> outer_walk_ccw() const;
    // Distinguished marks along outer_walk_ccw().
    std::vector<MarkId> outer_marks() const;
};

// Recursive PC_a member: a ConfigMember plus, per bounded face, a child
// configuration and an orientation-preserving gradient map. The map is a
// cyclic offset: face mark i pairs with child outer mark (i + offset) mod k.
struct Configuration {
    ConfigMember member;
    int level = 0;
    std::vector<Configuration> children;     // parallel to member.face_data
    std::vector<int> gradient_offsets;       // parallel to children

    bool is_point() const { return member.is_point; }
};

enum class HCompare { Quantized, Ordinal };

long long quantize(double v);              // round to h_quant grid
long long quantize_arg(double a);          // arg in [0,2pi) with wrap to 0

std::vector<std::string> validate(const Configuration& config);

// Encoding invariant under relabeling and cyclic starting choice but not
// reflection; includes quantized H and vertex args, z(D), cyclic mark order,
// gradient offsets and recursive child encodings; minimal over starts.
std::string canonical_form(const Configuration& config,
                           HCompare mode = HCompare::Quantized);

bool config_equal(const Configuration& a, const Configuration& b,
                  HCompare mode = HCompare::Quantized);

int total_degree(const Configuration& config);

// Recomputes recursion depths bottom-up (points are level 0).
void assign_levels(Configuration& config);

}  // namespace clc
