#include "clc/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace clc {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr long long kArgQuanta = 6283185;  // round(2pi / h_quant)
}  // namespace

long long quantize(double v) { return std::llround(v / tol::h_quant); }

long long quantize_arg(double a) {
    a = std::fmod(a, 2 * kPi);
    if (a < 0) a += 2 * kPi;
    long long q = std::llround(a / tol::h_quant);
    if (q >= kArgQuanta) q = 0;
    return q;
}

std::vector<int> ConfigMember::bounded_faces() const {
    std::vector<int> out;
    for (size_t i = 0; i < skeleton.faces.size(); ++i)
        if (skeleton.faces[i].bounded) out.push_back(static_cast<int>(i));
    return out;
}

namespace {

// Marks along a dart cycle, honoring direction; a vertex whose quantized
// argument is zero contributes one mark per visit.
std::vector<MarkId> walk_marks(const ConfigMember& m, const std::vector<ArcEnd>& cycle) {
    std::vector<MarkId> out;
    std::map<int, int> visits;
    for (const ArcEnd& d : cycle) {
        const LevelArc& a = m.skeleton.arcs[d.arc];
        int tail = a.end_vertex[d.end];
        if (tail >= 0 && quantize_arg(m.skeleton.verts[tail].vertex_arg) == 0) {
            MarkId mk;
            mk.vertex = tail;
            mk.visit = visits[tail]++;
            out.push_back(mk);
        }
        int n = static_cast<int>(a.marks.size());
        for (int i = 0; i < n; ++i) {
            MarkId mk;
            mk.arc = d.arc;
            mk.ordinal = d.end == 0 ? i : n - 1 - i;
            out.push_back(mk);
        }
    }
    return out;
}

}  // namespace

std::vector<MarkId> ConfigMember::face_marks(int face_index) const {
    return walk_marks(*this, skeleton.faces[face_index].boundary);
}

std::vector<ArcEnd> ConfigMember::outer_walk_ccw() const {
    if (skeleton.unbounded_face < 0) throw Error("config", "unbounded face not identified");
    const auto& fwd = skeleton.faces[skeleton.unbounded_face].boundary;
    std::vector<ArcEnd> rev;
    rev.reserve(fwd.size());
    for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) rev.push_back({it->arc, 1 - it->end});
    return rev;
}

std::vector<MarkId> ConfigMember::outer_marks() const { return walk_marks(*this, outer_walk_ccw()); }

int total_degree(const Configuration& config) {
    if (config.member.is_point) return config.member.point_z;
    int z = 0;
    for (const auto& fd : config.member.face_data) z += fd.z;
    return z;
}

void assign_levels(Configuration& config) {
    if (config.member.is_point) {
        config.level = 0;
        return;
    }
    int mx = -1;
    for (auto& c : config.children) {
        assign_levels(c);
        mx = std::max(mx, c.level);
    }
    config.level = mx + 1;
}

// ---- validation ---------------------------------------------------------

namespace {

void validate_member(const Configuration& cfg, const std::string& path,
                     std::vector<std::string>& out) {
    const ConfigMember& m = cfg.member;
    if (m.is_point) {
        if (m.point_z < 1) out.push_back(path + ": single point multiplicity must be >= 1");
        if (!cfg.children.empty()) out.push_back(path + ": single point cannot have children");
        return;
    }
    const LevelGraph& g = m.skeleton;
    if (m.H <= 0) out.push_back(path + ": graph member needs H > 0");
    if (g.verts.empty()) out.push_back(path + ": graph member needs at least one vertex");
    for (const auto& v : g.verts) {
        int deg = static_cast<int>(v.rotation.size());
        if (deg < 4 || deg % 2 != 0)
            out.push_back(path + ": vertex degree must be even and at least 4");
        if (v.vertex_arg < 0 || v.vertex_arg >= 2 * kPi)
            out.push_back(path + ": vertex arg outside [0, 2pi)");
    }
    if (g.unbounded_face < 0) {
        out.push_back(path + ": unbounded face not identified");
        return;
    }
    // connectivity over arcs
    if (!g.arcs.empty()) {
        std::vector<char> seen(g.verts.size(), 0);
        std::vector<int> stack;
        int v0 = g.arcs[0].end_vertex[0];
        if (v0 >= 0) {
            stack.push_back(v0);
            seen[v0] = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                for (const ArcEnd& d : g.verts[v].rotation) {
                    int w = g.arcs[d.arc].end_vertex[1 - d.end];
                    if (w >= 0 && !seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                }
            }
            for (size_t v = 0; v < seen.size(); ++v)
                if (!seen[v]) out.push_back(path + ": graph is not connected");
        }
    }
    // every arc incident to the unbounded face
    {
        std::set<int> on_unbounded;
        for (const ArcEnd& d : g.faces[g.unbounded_face].boundary) on_unbounded.insert(d.arc);
        for (const auto& a : g.arcs)
            if (!on_unbounded.count(a.id))
                out.push_back(path + ": arc " + std::to_string(a.id) +
                              " not incident to the unbounded face");
    }
    // face data: z counts and mark counts
    auto bf = m.bounded_faces();
    if (bf.size() != m.face_data.size() || bf.size() != cfg.children.size() ||
        cfg.children.size() != cfg.gradient_offsets.size()) {
        out.push_back(path + ": face data/children size mismatch");
        return;
    }
    for (size_t i = 0; i < bf.size(); ++i) {
        const auto& fd = m.face_data[i];
        if (fd.face != bf[i]) out.push_back(path + ": face data out of order");
        if (fd.z < 1) out.push_back(path + ": z(D) must be >= 1");
        auto marks = m.face_marks(bf[i]);
        if (static_cast<int>(marks.size()) != fd.z)
            out.push_back(path + ": face " + std::to_string(i) + " has " +
                          std::to_string(marks.size()) + " distinguished points, z=" +
                          std::to_string(fd.z));
    }
    // a(x) = 0 iff x is a distinguished point: vertex marks are derived from
    // quantized args, so only the argument ordering rule remains. For each
    // face and each ordered vertex pair with a(x1) >= a(x2), a distinguished
    // point must sit strictly between them in positive cyclic order.
    for (int fi : bf) {
        struct Item {
            bool is_mark;
            long long qarg;  // for vertices
        };
        std::vector<Item> ring;
        std::map<int, int> visits;
        for (const ArcEnd& d : g.faces[fi].boundary) {
            const LevelArc& a = g.arcs[d.arc];
            int tail = a.end_vertex[d.end];
            if (tail >= 0) {
                long long q = quantize_arg(g.verts[tail].vertex_arg);
                if (q == 0) ring.push_back({true, 0});
                ring.push_back({false, q});
            }
            for (size_t k = 0; k < a.marks.size(); ++k) ring.push_back({true, 0});
        }
        size_t n = ring.size();
        for (size_t i = 0; i < n; ++i) {
            if (ring[i].is_mark) continue;
            for (size_t j = 0; j < n; ++j) {
                if (i == j || ring[j].is_mark) continue;
                if (ring[i].qarg < ring[j].qarg) continue;
                bool found = false;
                for (size_t k = (i + 1) % n; k != j; k = (k + 1) % n)
                    if (ring[k].is_mark) found = true;
                if (!found)
                    out.push_back(path + ": argument ordering violated on face " +
                                  std::to_string(fi));
            }
        }
    }
}

void validate_rec(const Configuration& cfg, const std::string& path,
                  std::vector<std::string>& out) {
    validate_member(cfg, path, out);
    if (cfg.member.is_point) {
        if (cfg.level != 0) out.push_back(path + ": single point must be level 0");
        return;
    }
    int maxlev = -1;
    for (size_t i = 0; i < cfg.children.size(); ++i) {
        const Configuration& c = cfg.children[i];
        std::string cpath = path + ".child[" + std::to_string(i) + "]";
        if (i < cfg.member.face_data.size()) {
            if (total_degree(c) != cfg.member.face_data[i].z)
                out.push_back(cpath + ": Z(child) != z(D)");
        }
        double childH = c.member.is_point ? 0.0 : c.member.H;
        if (!(childH < cfg.member.H)) out.push_back(cpath + ": H monotonicity violated");
        // gradient offset range
        if (i < cfg.gradient_offsets.size() && !c.member.is_point) {
            int k = static_cast<int>(c.member.outer_marks().size());
            int fk = cfg.member.face_data.empty()
                         ? 0
                         : static_cast<int>(
                               cfg.member.face_marks(cfg.member.face_data[i].face).size());
            if (k != fk)
                out.push_back(cpath + ": gradient map endpoint counts differ");
            else if (k > 0 && (cfg.gradient_offsets[i] < 0 || cfg.gradient_offsets[i] >= k))
                out.push_back(cpath + ": gradient offset out of range");
        }
        validate_rec(c, cpath, out);
        maxlev = std::max(maxlev, c.level);
    }
    if (!cfg.children.empty() && cfg.level != maxlev + 1)
        out.push_back(path + ": level must be one above the deepest child");
}

}  // namespace

std::vector<std::string> validate(const Configuration& config) {
    std::vector<std::string> out;
    validate_rec(config, "config", out);
    return out;
}

// ---- canonical form ------------------------------------------------------

namespace {

struct MemberCanon {
    std::string code;
    std::vector<int> mark_rots;  // outer-mark rotations achieving the minimum
    int mark_count = 0;
};

using HEncoder = std::function<long long(double)>;

MemberCanon canon_rec(const Configuration& cfg, const HEncoder& henc);


std::string graph_code_for_rotation(const Configuration& cfg, const HEncoder& henc,
                                    const std::vector<ArcEnd>& outer, size_t rot,
                                    const std::vector<MemberCanon>& child_canon, int& mark_rot) {
    const ConfigMember& m = cfg.member;
    const LevelGraph& g = m.skeleton;
    size_t E = outer.size();

    std::map<int, int> vlabel;
    std::map<int, int> apos;
    for (size_t i = 0; i < E; ++i) {
        const ArcEnd& d = outer[(rot + i) % E];
        int tail = g.arcs[d.arc].end_vertex[d.end];
        if (tail >= 0 && !vlabel.count(tail)) vlabel[tail] = static_cast<int>(vlabel.size());
        apos[d.arc] = static_cast<int>(i);
    }

    std::ostringstream os;
    os << "G:H" << henc(m.H) << ":E" << E << ";W";
    for (size_t i = 0; i < E; ++i) {
        const ArcEnd& d = outer[(rot + i) % E];
        const LevelArc& a = g.arcs[d.arc];
        int tail = a.end_vertex[d.end];
        os << "[v" << (tail >= 0 ? vlabel[tail] : -1) << ",q"
           << (tail >= 0 ? quantize_arg(g.verts[tail].vertex_arg) : -1) << ",m" << a.marks.size()
           << "]";
    }

    // Rotation of the CCW outer mark order induced by starting the forward
    // walk at position rot: the CCW walk rotates by E - rot darts, so the
    // mark rotation is the mark count on that CCW prefix.
    {
        auto base = m.outer_marks();
        mark_rot = 0;
        if (!base.empty()) {
            auto ccw = m.outer_walk_ccw();
            size_t shift = (E - rot) % E;
            std::vector<ArcEnd> prefix(ccw.begin(), ccw.begin() + shift);
            mark_rot = static_cast<int>(walk_marks(m, prefix).size()) %
                       static_cast<int>(base.size());
        }
    }

    // bounded faces ordered by the minimal walk position of their arcs
    auto bf = m.bounded_faces();
    std::vector<std::pair<int, size_t>> order;  // (min walk pos, face_data idx)
    for (size_t i = 0; i < bf.size(); ++i) {
        int best = 1 << 30;
        for (const ArcEnd& d : g.faces[bf[i]].boundary) best = std::min(best, apos[d.arc]);
        order.push_back({best, i});
    }
    std::sort(order.begin(), order.end());

    for (auto [minpos, fi] : order) {
        const Face& face = g.faces[bf[fi]];
        size_t fb = face.boundary.size();
        size_t start = 0;
        for (size_t i = 0; i < fb; ++i)
            if (apos[face.boundary[i].arc] == minpos) start = i;
        os << ";F(z" << m.face_data[fi].z << ")[";
        for (size_t i = 0; i < fb; ++i) os << "e" << apos[face.boundary[(start + i) % fb].arc];
        os << "]";

        // gradient offset relative to canonical starts
        const Configuration& child = cfg.children[fi];
        const MemberCanon& cc = child_canon[fi];
        if (!child.member.is_point && cc.mark_count > 0) {
            auto base_marks = m.face_marks(bf[fi]);
            int k = static_cast<int>(base_marks.size());
            // marks consumed before the canonical face start
            std::vector<ArcEnd> pre(face.boundary.begin(), face.boundary.begin() + start);
            int s = static_cast<int>(walk_marks(m, pre).size()) % std::max(1, k);
            int best = 1 << 30;
            for (int c : cc.mark_rots) {
                int o = ((s + cfg.gradient_offsets[fi] - c) % k + k) % k;
                best = std::min(best, o);
            }
            os << "g" << best;
        } else {
            os << "g.";
        }
        os << "C{" << cc.code << "}";
    }
    return os.str();
}

MemberCanon canon_rec(const Configuration& cfg, const HEncoder& henc) {
    MemberCanon out;
    if (cfg.member.is_point) {
        out.code = "P" + std::to_string(cfg.member.point_z);
        out.mark_rots = {0};
        out.mark_count = 0;
        return out;
    }
    const LevelGraph& g = cfg.member.skeleton;
    if (g.unbounded_face < 0) throw Error("config", "unbounded face not identified");
    const auto& outer = g.faces[g.unbounded_face].boundary;

    std::vector<MemberCanon> child_canon;
    for (const auto& c : cfg.children) child_canon.push_back(canon_rec(c, henc));

    out.mark_count = static_cast<int>(cfg.member.outer_marks().size());
    for (size_t rot = 0; rot < outer.size(); ++rot) {
        int mark_rot = 0;
        std::string code = graph_code_for_rotation(cfg, henc, outer, rot, child_canon, mark_rot);
        if (out.code.empty() || code < out.code) {
            out.code = code;
            out.mark_rots = {mark_rot};
        } else if (code == out.code) {
            if (std::find(out.mark_rots.begin(), out.mark_rots.end(), mark_rot) ==
                out.mark_rots.end())
                out.mark_rots.push_back(mark_rot);
        }
    }
    return out;
}

void collect_h(const Configuration& cfg, std::set<long long>& hs) {
    if (!cfg.member.is_point) hs.insert(quantize(cfg.member.H));
    for (const auto& c : cfg.children) collect_h(c, hs);
}

}  // namespace

std::string canonical_form(const Configuration& config, HCompare mode) {
    HEncoder henc;
    if (mode == HCompare::Quantized) {
        henc = [](double h) { return quantize(h); };
    } else {
        auto hs = std::make_shared<std::vector<long long>>();
        std::set<long long> set;
        collect_h(config, set);
        hs->assign(set.begin(), set.end());
        henc = [hs](double h) {
            long long q = quantize(h);
            return static_cast<long long>(
                std::lower_bound(hs->begin(), hs->end(), q) - hs->begin());
        };
    }
    return "pca1:" + canon_rec(config, henc).code;
}

bool config_equal(const Configuration& a, const Configuration& b, HCompare mode) {
    return canonical_form(a, mode) == canonical_form(b, mode);
}

}  // namespace clc
