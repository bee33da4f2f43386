#include "clc/json_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace clc {

using nlohmann::json;

namespace {

constexpr size_t kMaxStoredArcPts = 64;

json point_json(Cpx z) { return json::array({z.real(), z.imag()}); }

Cpx point_from(const json& j) { return Cpx(j.at(0).get<double>(), j.at(1).get<double>()); }

std::string dart_str(const ArcEnd& d) {
    return std::to_string(d.arc) + (d.end == 0 ? "+" : "-");
}

ArcEnd dart_from(const std::string& s) {
    if (s.size() < 2) throw Error("json", "bad arc-end '" + s + "'");
    char c = s.back();
    if (c != '+' && c != '-') throw Error("json", "bad arc-end '" + s + "'");
    ArcEnd d;
    d.arc = std::stoi(s.substr(0, s.size() - 1));
    d.end = c == '+' ? 0 : 1;
    return d;
}

json member_to_json(const Configuration& cfg) {
    const ConfigMember& m = cfg.member;
    json j;
    if (m.is_point) {
        j["kind"] = "zero";
        j["Z"] = m.point_z;
        if (m.implied) j["implied"] = true;
        j["pos"] = point_json(m.point_pos);
        return j;
    }
    const LevelGraph& g = m.skeleton;
    j["kind"] = "graph";
    j["H"] = m.H;
    if (m.implied) j["implied"] = true;

    json verts = json::array();
    for (const auto& v : g.verts) {
        json vj;
        vj["id"] = v.id;
        vj["arg"] = v.vertex_arg;
        vj["pos"] = point_json(v.pos);
        if (v.implied) vj["implied"] = true;
        verts.push_back(vj);
    }
    j["vertices"] = verts;

    json arcs = json::array();
    for (const auto& a : g.arcs) {
        json aj;
        aj["id"] = a.id;
        aj["ends"] = json::array({a.end_vertex[0], a.end_vertex[1]});
        if (a.is_extension) aj["extension"] = true;
        if (!a.pts.empty()) {
            json pts = json::array();
            size_t stride = std::max<size_t>(1, a.pts.size() / kMaxStoredArcPts);
            for (size_t i = 0; i < a.pts.size(); i += stride) pts.push_back(point_json(a.pts[i]));
            if ((a.pts.size() - 1) % stride != 0) pts.push_back(point_json(a.pts.back()));
            aj["pts"] = pts;
        }
        arcs.push_back(aj);
    }
    j["arcs"] = arcs;

    json rot;
    for (const auto& v : g.verts) {
        json ends = json::array();
        for (const ArcEnd& d : v.rotation) ends.push_back(dart_str(d));
        rot[std::to_string(v.id)] = ends;
    }
    j["rotation"] = rot;

    json faces = json::array();
    auto bf = m.bounded_faces();
    for (size_t i = 0; i < bf.size(); ++i) {
        const Face& face = g.faces[bf[i]];
        json fj;
        json darts = json::array();
        for (const ArcEnd& d : face.boundary) darts.push_back(dart_str(d));
        fj["arcs"] = darts;
        fj["z"] = m.face_data[i].z;
        json dist = json::array();
        for (const MarkId& mk : m.face_marks(bf[i])) {
            if (mk.arc >= 0) {
                const DistMark& dm = g.arcs[mk.arc].marks[mk.ordinal];
                dist.push_back(json::array(
                    {"a", mk.arc, mk.ordinal, dm.pos.real(), dm.pos.imag()}));
            } else {
                dist.push_back(json::array({"v", mk.vertex, mk.visit}));
            }
        }
        fj["distinguished"] = dist;
        fj["child"] = member_to_json(cfg.children[i]);
        fj["gradient_offset"] = cfg.gradient_offsets[i];
        faces.push_back(fj);
    }
    j["faces"] = faces;
    return j;
}

Configuration member_from_json(const json& j) {
    Configuration cfg;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") {
        cfg.member.is_point = true;
        cfg.member.point_z = j.at("Z").get<int>();
        cfg.member.implied = j.value("implied", false);
        if (j.contains("pos")) cfg.member.point_pos = point_from(j.at("pos"));
        return cfg;
    }
    if (kind != "graph") throw Error("json", "unknown member kind '" + kind + "'");
    ConfigMember& m = cfg.member;
    m.H = j.at("H").get<double>();
    m.implied = j.value("implied", false);
    LevelGraph& g = m.skeleton;
    g.level = m.H;

    for (const auto& vj : j.at("vertices")) {
        GraphVertex v;
        v.id = vj.at("id").get<int>();
        v.vertex_arg = vj.at("arg").get<double>();
        if (vj.contains("pos")) v.pos = point_from(vj.at("pos"));
        v.implied = vj.value("implied", false);
        if (v.id != static_cast<int>(g.verts.size()))
            throw Error("json", "vertex ids must be dense and ordered");
        g.verts.push_back(v);
    }
    for (const auto& aj : j.at("arcs")) {
        LevelArc a;
        a.id = aj.at("id").get<int>();
        a.level = m.H;
        a.end_vertex[0] = aj.at("ends").at(0).get<int>();
        a.end_vertex[1] = aj.at("ends").at(1).get<int>();
        a.is_extension = aj.value("extension", false);
        if (aj.contains("pts"))
            for (const auto& p : aj.at("pts")) a.pts.push_back(point_from(p));
        if (a.id != static_cast<int>(g.arcs.size()))
            throw Error("json", "arc ids must be dense and ordered");
        g.arcs.push_back(a);
    }
    const json& rot = j.at("rotation");
    for (auto& v : g.verts) {
        const json& ends = rot.at(std::to_string(v.id));
        size_t n = ends.size();
        for (size_t i = 0; i < n; ++i) {
            v.rotation.push_back(dart_from(ends.at(i).get<std::string>()));
            // synthetic angles in listed order so geometric sorting is a no-op
            v.rot_angles.push_back(-3.0 + 6.0 * double(i) / double(n));
        }
    }

    enumerate_face_orbits(g);

    // match file faces onto orbits by dart set; the unmatched orbit is the
    // unbounded face
    auto key_of = [](const std::vector<ArcEnd>& darts) {
        std::set<std::pair<int, int>> s;
        for (const ArcEnd& d : darts) s.insert({d.arc, d.end});
        return s;
    };
    std::map<std::set<std::pair<int, int>>, int> orbit_by_key;
    for (size_t i = 0; i < g.faces.size(); ++i) orbit_by_key[key_of(g.faces[i].boundary)] = int(i);

    std::vector<char> matched(g.faces.size(), 0);
    struct Pending {
        int face;
        json fj;
    };
    std::vector<Pending> pend;
    for (const auto& fj : j.at("faces")) {
        std::vector<ArcEnd> darts;
        for (const auto& dj : fj.at("arcs")) darts.push_back(dart_from(dj.get<std::string>()));
        auto it = orbit_by_key.find(key_of(darts));
        if (it == orbit_by_key.end())
            throw Error("json", "face does not match any rotation-system orbit");
        matched[it->second] = 1;
        g.faces[it->second].bounded = true;
        pend.push_back({it->second, fj});
    }
    int unmatched = -1;
    for (size_t i = 0; i < g.faces.size(); ++i) {
        if (!matched[i]) {
            if (unmatched >= 0) throw Error("json", "more than one unbounded orbit");
            unmatched = static_cast<int>(i);
        }
    }
    if (unmatched < 0) throw Error("json", "no orbit left for the unbounded face");
    g.unbounded_face = unmatched;
    g.faces[unmatched].bounded = false;

    // distinguished marks: rebuild per-arc marks from the face lists
    for (const auto& [face, fj] : pend) {
        for (const auto& dj : fj.at("distinguished")) {
            if (dj.at(0).get<std::string>() != "a") continue;  // vertex marks are derived
            int arc = dj.at(1).get<int>();
            int ordinal = dj.at(2).get<int>();
            auto& marks = g.arcs.at(arc).marks;
            if (static_cast<int>(marks.size()) <= ordinal) marks.resize(ordinal + 1);
            DistMark dm;
            if (dj.size() >= 5) dm.pos = Cpx(dj.at(3).get<double>(), dj.at(4).get<double>());
            dm.t = ordinal;
            marks[ordinal] = dm;
        }
    }

    // face data and children, ordered by bounded-face order
    std::map<int, json> by_face;
    for (const auto& [face, fj] : pend) by_face[face] = fj;
    for (int bfi : m.bounded_faces()) {
        const json& fj = by_face.at(bfi);
        MemberFaceData fd;
        fd.face = bfi;
        fd.z = fj.at("z").get<int>();
        m.face_data.push_back(fd);
        g.faces[bfi].zcount = fd.z;
        cfg.children.push_back(member_from_json(fj.at("child")));
        cfg.gradient_offsets.push_back(fj.at("gradient_offset").get<int>());
    }
    return cfg;
}

}  // namespace

std::string serialize_config(const Configuration& config) {
    json j;
    j["pca_version"] = 1;
    j["config"] = member_to_json(config);
    return j.dump(2) + "\n";
}

Configuration parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("json", e.what());
    }
    if (j.value("pca_version", 0) != 1) throw Error("json", "unsupported pca_version");
    Configuration cfg = member_from_json(j.at("config"));
    assign_levels(cfg);
    return cfg;
}

std::string serialize_polynomial(const std::vector<Cpx>& coeffs, double canonical_angle) {
    json j;
    j["degree"] = coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1;
    json cs = json::array();
    for (Cpx c : coeffs) cs.push_back(point_json(c));
    j["coefficients"] = cs;
    j["canonical_angle"] = canonical_angle;
    return j.dump(2) + "\n";
}

std::vector<Cpx> parse_polynomial(const std::string& text, double* canonical_angle) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("json", e.what());
    }
    std::vector<Cpx> out;
    for (const auto& c : j.at("coefficients")) out.push_back(point_from(c));
    if (canonical_angle) *canonical_angle = j.value("canonical_angle", 0.0);
    return out;
}

std::string serialize_domain(const std::vector<Cpx>& polygon) {
    json j;
    json pts = json::array();
    for (Cpx p : polygon) pts.push_back(point_json(p));
    j["domain"] = pts;
    return j.dump(2) + "\n";
}

std::vector<Cpx> parse_domain(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("json", e.what());
    }
    std::vector<Cpx> out;
    for (const auto& p : j.at("domain")) out.push_back(point_from(p));
    if (out.size() < 3) throw Error("json", "domain polygon needs at least 3 points");
    return out;
}

bool ModelReport::success() const {
    return max_model_error <= 1e-6 && injectivity_violations == 0 &&
           boundary_continuity_error <= 1e-6;
}

std::string serialize_report(const ModelReport& r) {
    json j;
    j["max_model_error"] = r.max_model_error;
    j["injectivity_violations"] = r.injectivity_violations;
    j["samples"] = r.samples;
    j["cell_count"] = r.cell_count;
    j["boundary_continuity_error"] = r.boundary_continuity_error;
    j["success"] = r.success();
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("io", "cannot write " + path);
    out << content;
}

}  // namespace clc
