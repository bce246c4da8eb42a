#pragma once

#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "compiler.hpp"
#include "isotropic.hpp"
#include "runtime.hpp"
#include "voronoi.hpp"

namespace spatial {

using json = nlohmann::json;

inline json medium_to_json(const Medium& m) {
    json j;
    j["format"] = "spatial-medium";
    j["version"] = 1;
    j["topology"] = m.is_torus() ? "torus" : "bordered";
    if (m.is_torus()) {
        j["cols"] = m.cols;
        j["rows"] = m.rows;
    }
    json pts = json::array();
    for (const auto& p : m.points) pts.push_back({p.x, p.y});
    j["points"] = std::move(pts);
    j["edges"] = m.edges;
    json faces = json::array();
    for (const auto& f : m.faces) faces.push_back({f[0], f[1], f[2]});
    j["faces"] = std::move(faces);
    j["border"] = m.border_ring;
    j["owners"] = {{"E", m.owner[1]}, {"F", m.owner[2]}};
    return j;
}

/// Rebuilds and re-validates; a torus is regenerated from its size and must
/// match the stored simplexes.
inline Medium medium_from_json(const json& j) {
    if (j.value("format", "") != "spatial-medium") throw Error("medium: not a spatial-medium document");
    if (j.value("version", 0) != 1) throw Error("medium: unsupported version");
    const std::string topo = j.at("topology").get<std::string>();
    Medium m;
    if (topo == "torus") {
        m = build_hex_torus(j.at("cols").get<int>(), j.at("rows").get<int>());
    } else if (topo == "bordered") {
        MediumDescription d;
        d.topology = Topology::Bordered;
        for (const auto& p : j.at("points")) d.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        for (const auto& f : j.at("faces")) d.faces.push_back(f.get<std::vector<std::uint32_t>>());
        m = assemble(d);
    } else {
        throw Error("medium: unknown topology '" + topo + "'");
    }
    if (j.contains("edges") && j["edges"].get<std::vector<std::array<std::uint32_t, 2>>>() != m.edges)
        throw Error("medium: stored edges disagree with the faces");
    if (j.contains("border") && j["border"].get<std::vector<std::uint32_t>>() != m.border_ring)
        throw Error("medium: stored border ring disagrees with the hull");
    if (j.contains("owners")) {
        auto e = j["owners"].at("E").get<std::vector<std::uint32_t>>();
        auto f = j["owners"].at("F").get<std::vector<std::uint32_t>>();
        if (e.size() != m.edges.size() || f.size() != m.faces.size()) throw Error("medium: owner table size mismatch");
        m.owner[1] = std::move(e);
        m.owner[2] = std::move(f);
    }
    const ValidationReport r = validate(m);
    if (!r.ok) throw Error("medium: " + r.failures.front());
    return m;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

/// "hex:16x16", "iso:200:7:30", or a medium JSON file.
inline Medium medium_from_spec(const std::string& spec) {
    if (spec.starts_with("hex:")) {
        int c = 0, r = 0;
        char x = 0;
        std::istringstream is(spec.substr(4));
        if (!(is >> c >> x >> r) || x != 'x' || !is.eof()) throw Error("bad medium spec '" + spec + "'");
        return build_hex_torus(c, r);
    }
    if (spec.starts_with("iso:")) {
        std::vector<long> v;
        std::istringstream is(spec.substr(4));
        std::string part;
        while (std::getline(is, part, ':')) {
            try {
                std::size_t used = 0;
                v.push_back(std::stol(part, &used));
                if (used != part.size()) throw Error("");
            } catch (...) {
                throw Error("bad medium spec '" + spec + "'");
            }
        }
        if (v.empty() || v.size() > 3) throw Error("bad medium spec '" + spec + "'");
        return build_isotropic(static_cast<int>(v[0]), v.size() > 1 ? static_cast<std::uint64_t>(v[1]) : 1,
                               v.size() > 2 ? static_cast<int>(v[2]) : 30);
    }
    return medium_from_json(read_json_file(spec));
}

// Field dump: "SPFD", u32 version, u64 medium hash, u8 locus, u8 width,
// u8 boolean, u8 reserved, u64 point count, then the packed words, all
// little endian.
inline constexpr char kFieldMagic[4] = {'S', 'P', 'F', 'D'};

namespace detail {
template <class T>
void put_le(std::string& s, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) s.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}
template <class T>
T get_le(std::string_view s, std::size_t& at) {
    if (at + sizeof(T) > s.size()) throw Error("field dump: truncated");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[at + i])) << (8 * i);
    at += sizeof(T);
    return static_cast<T>(v);
}
}  // namespace detail

inline std::string dump_field(const Field& f) {
    std::string s(kFieldMagic, 4);
    detail::put_le<std::uint32_t>(s, 1);
    detail::put_le<std::uint64_t>(s, medium_hash(*f.medium()));
    detail::put_le<std::uint8_t>(s, static_cast<std::uint8_t>(f.type().locus));
    detail::put_le<std::uint8_t>(s, static_cast<std::uint8_t>(f.type().width));
    detail::put_le<std::uint8_t>(s, f.type().boolean);
    detail::put_le<std::uint8_t>(s, 0);
    detail::put_le<std::uint64_t>(s, f.size());
    for (auto w : f.words()) detail::put_le<std::uint64_t>(s, w);
    return s;
}

inline Field load_field(std::string_view s, const MediumPtr& m) {
    if (s.size() < 4 || std::memcmp(s.data(), kFieldMagic, 4) != 0) throw Error("field dump: bad magic");
    std::size_t at = 4;
    if (detail::get_le<std::uint32_t>(s, at) != 1) throw Error("field dump: unsupported version");
    if (detail::get_le<std::uint64_t>(s, at) != medium_hash(*m)) throw Error("field dump: medium hash mismatch");
    const auto l = detail::get_le<std::uint8_t>(s, at);
    const auto w = detail::get_le<std::uint8_t>(s, at);
    const auto b = detail::get_le<std::uint8_t>(s, at);
    detail::get_le<std::uint8_t>(s, at);
    if (l >= kAllLoci.size()) throw Error("field dump: bad locus");
    const FieldType t{static_cast<Locus>(l), w, b != 0};
    Field f(m, t);
    if (detail::get_le<std::uint64_t>(s, at) != f.size()) throw Error("field dump: point count mismatch");
    std::vector<std::uint64_t> words(f.words().size());
    for (auto& x : words) x = detail::get_le<std::uint64_t>(s, at);
    if (at != s.size()) throw Error("field dump: trailing bytes");
    for (std::size_t p = 0; p < f.size(); ++p) {
        std::uint32_t v = 0;
        for (int k = 0; k < t.width; ++k) {
            const std::size_t i = p * t.width + k;
            v |= static_cast<std::uint32_t>((words[i >> 6] >> (i & 63)) & 1u) << k;
        }
        f.set(p, v);
    }
    return f;
}

/// Debug form: true points of a bool field, or all values of an int field.
inline json field_to_json(const Field& f) {
    json j;
    j["type"] = type_name(f.type());
    j["medium_hash"] = medium_hash(*f.medium());
    j["count"] = f.size();
    if (f.type().boolean)
        j["true_points"] = f.true_points();
    else
        j["values"] = f.values();
    return j;
}

inline json seeds_to_json(const Seeds& s) { return {{"seeds", s}}; }

inline Seeds seeds_from_json(const json& j) {
    if (!j.contains("seeds") || !j["seeds"].is_array()) throw Error("seeds: expected {\"seeds\": [[...], ...]}");
    return j["seeds"].get<Seeds>();
}

inline json run_manifest(std::uint64_t seed, double skip_prob, const RunResult& r, const std::string& engine) {
    return {{"seed", seed},           {"skip_prob", skip_prob}, {"t_c", r.t_c},
            {"steps", r.steps},       {"converged", r.converged}, {"engine", engine}};
}

inline json compile_report(const CompiledCircuit& cc, const std::vector<Update>& updates) {
    const auto& s = cc.stats;
    json layers = json::array();
    for (const auto& u : updates)
        layers.push_back({{"name", u.layer}, {"type", type_name(typecheck(u.expr, *cc.medium))}, {"radius", radius_of(u.expr)}});
    return {{"gates_per_tile", s.gates_per_tile},
            {"gates_total", s.gates_fused},
            {"radius", s.radius},
            {"transwires_per_tile", s.transwires_per_tile},
            {"max_tile_gates", s.max_tile_gates},
            {"layers", layers},
            {"raw", {{"gates_per_tile", s.gates_per_tile_raw}, {"gates_total", s.gates_raw}}},
            {"fused", {{"gates_per_tile", s.gates_per_tile}, {"gates_total", s.gates_fused}}}};
}

/// Topologically ordered gate list; fused NOT gates are marked.
inline json netlist_json(const CompiledCircuit& cc) {
    json g = json::array();
    for (std::size_t i = 0; i < cc.gates.size(); ++i) {
        const Gate& x = cc.gates[i];
        json e = {{"id", i}, {"op", gate_name(x.op)}, {"tile", x.tile}};
        if (x.is_logic()) {
            e["in"] = x.op == GateOp::Not ? json::array({x.a}) : json::array({x.a, x.b});
            if (cc.fused[i]) e["fused"] = true;
        } else if (x.op == GateOp::Input) {
            e["layer"] = cc.inputs[x.a].name;
            e["bit"] = x.b;
        }
        g.push_back(std::move(e));
    }
    json outs = json::object();
    for (const auto& o : cc.outputs) outs[o.name] = o.nets;
    return {{"gates", g}, {"outputs", outs}};
}

}  // namespace spatial
