// Test-only constructors for synthetic PC_a members.
#pragma once

#include <random>

#include "clc/config.hpp"

namespace builders {

using namespace clc;

inline Configuration point(int z) {
    Configuration c;
    c.member.is_point = true;
    c.member.point_z = z;
    return c;
}

// A petal: teardrop loop polyline from the origin into direction theta.
inline std::vector<Cpx> petal_pts(double theta, double reach, double halfwidth) {
    std::vector<Cpx> pts;
    const int n = 48;
    pts.push_back(Cpx(0, 0));
    for (int i = 1; i < n; ++i) {
        double t = double(i) / n * 3.14159265358979323846;
        double r = reach * std::sin(t);
        double ang = theta - halfwidth * std::cos(t);
        pts.push_back(std::polar(r, ang));
    }
    pts.push_back(Cpx(0, 0));
    return pts;
}

// A flower member: one vertex at the origin with one petal per entry of
// zs; petal k points in direction dir0 + k*2pi/n and carries zs[k] marks,
// each child a single point of matching multiplicity.
inline Configuration flower(double H, double vertex_arg, const std::vector<int>& zs,
                            double dir0 = 0.0) {
    const double kPi = 3.14159265358979323846;
    Configuration cfg;
    ConfigMember& m = cfg.member;
    m.H = H;
    LevelGraph& g = m.skeleton;
    g.level = H;

    GraphVertex v;
    v.id = 0;
    v.pos = Cpx(0, 0);
    v.vertex_arg = vertex_arg;
    v.fprime_mult = static_cast<int>(zs.size()) - 1;
    g.verts.push_back(v);

    int n = static_cast<int>(zs.size());
    double halfwidth = kPi / n * 0.66;
    for (int k = 0; k < n; ++k) {
        double theta = dir0 + 2 * kPi * k / n;
        LevelArc a;
        a.id = k;
        a.level = H;
        a.pts = petal_pts(theta, 1.0, halfwidth);
        a.end_vertex[0] = 0;
        a.end_vertex[1] = 0;
        for (int mk = 0; mk < zs[k]; ++mk) {
            DistMark dm;
            double t = a.pts.size() * (0.3 + 0.4 * (mk + 0.5) / zs[k]);
            dm.t = t;
            dm.pos = a.pts[static_cast<size_t>(t)];
            a.marks.push_back(dm);
        }
        g.arcs.push_back(a);
        g.verts[0].rotation.push_back({k, 0});
        g.verts[0].rot_angles.push_back(std::remainder(theta - halfwidth, 2 * kPi));
        g.verts[0].rotation.push_back({k, 1});
        g.verts[0].rot_angles.push_back(std::remainder(theta + halfwidth, 2 * kPi));
    }
    build_faces(g);

    // faces in skeleton order; match petals by inner-point direction
    for (int bfi : m.bounded_faces()) {
        double ang = std::arg(g.faces[bfi].inner_pt);
        int k = static_cast<int>(std::llround(std::remainder(ang - dir0, 2 * kPi) / (2 * kPi / n)));
        k = ((k % n) + n) % n;
        MemberFaceData fd;
        fd.face = bfi;
        fd.z = zs[k];
        m.face_data.push_back(fd);
        g.faces[bfi].zcount = zs[k];
        cfg.children.push_back(point(zs[k]));
        cfg.gradient_offsets.push_back(0);
    }
    assign_levels(cfg);
    return cfg;
}

inline Configuration eight(double H, double vertex_arg, int z_left = 1, int z_right = 1) {
    return flower(H, vertex_arg, {z_right, z_left}, 0.0);
}

// Structure-preserving relabeling: permute arc ids, optionally reverse arc
// orientations, shuffle rotation list storage. The embedding is unchanged.
inline Configuration relabel(const Configuration& cfg, std::mt19937_64& rng) {
    Configuration out = cfg;
    ConfigMember& m = out.member;
    LevelGraph& g = m.skeleton;
    int na = static_cast<int>(g.arcs.size());

    std::vector<int> perm(na);
    for (int i = 0; i < na; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<LevelArc> arcs(na);
    std::vector<char> reversed(na, 0);
    for (int i = 0; i < na; ++i) {
        LevelArc a = g.arcs[i];
        a.id = perm[i];
        if (rng() & 1) {
            reversed[i] = 1;
            std::reverse(a.pts.begin(), a.pts.end());
            std::swap(a.end_vertex[0], a.end_vertex[1]);
            std::reverse(a.marks.begin(), a.marks.end());
            for (auto& mk : a.marks) mk.t = double(a.pts.size() - 1) - mk.t;
        }
        arcs[perm[i]] = a;
    }
    g.arcs = arcs;
    for (auto& v : g.verts) {
        for (size_t i = 0; i < v.rotation.size(); ++i) {
            int old = v.rotation[i].arc;
            v.rotation[i].arc = perm[old];
            if (reversed[old]) v.rotation[i].end = 1 - v.rotation[i].end;
        }
        // shuffle stored order; face building re-sorts by angle
        std::vector<size_t> idx(v.rotation.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<ArcEnd> r;
        std::vector<double> an;
        for (size_t i : idx) {
            r.push_back(v.rotation[i]);
            an.push_back(v.rot_angles[i]);
        }
        v.rotation = r;
        v.rot_angles = an;
    }
    auto old_faces = cfg.member.skeleton.faces;
    std::vector<MemberFaceData> old_fd = cfg.member.face_data;
    std::vector<Configuration> old_children = cfg.children;
    std::vector<int> old_offsets = cfg.gradient_offsets;
    const Configuration& old_cfg = cfg;

    build_faces(g);
    m.face_data.clear();
    out.children.clear();
    out.gradient_offsets.clear();
    for (int bfi : m.bounded_faces()) {
        // match the rebuilt face to the original by interior containment
        int src = -1;
        for (size_t i = 0; i < old_fd.size(); ++i) {
            if (point_in_face(old_cfg.member.skeleton, old_fd[i].face, g.faces[bfi].inner_pt))
                src = static_cast<int>(i);
        }
        if (src < 0) throw Error("test", "relabel could not match a face");
        MemberFaceData fd;
        fd.face = bfi;
        fd.z = old_fd[src].z;
        m.face_data.push_back(fd);
        g.faces[bfi].zcount = fd.z;
        out.children.push_back(old_children[src]);
        out.gradient_offsets.push_back(old_offsets[src]);
    }
    return out;
}

}  // namespace builders
