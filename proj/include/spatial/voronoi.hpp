#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <vector>

#include "blobs.hpp"
#include "runtime.hpp"

namespace spatial {

/// Connected components of filled vertices; -1 marks empty vertices.
inline std::vector<int> blob_labels(const Medium& m, const std::vector<std::uint32_t>& x, int* count = nullptr) {
    std::vector<int> lab(m.num_vertices(), -1);
    int k = 0;
    for (std::uint32_t s = 0; s < m.num_vertices(); ++s) {
        if (!x[s] || lab[s] >= 0) continue;
        std::deque<std::uint32_t> q{s};
        lab[s] = k;
        while (!q.empty()) {
            const auto v = q.front();
            q.pop_front();
            for (auto w : m.neighbors(v))
                if (x[w] && lab[w] < 0) {
                    lab[w] = k;
                    q.push_back(w);
                }
        }
        ++k;
    }
    if (count) *count = k;
    return lab;
}

inline int count_blobs(const Medium& m, const std::vector<std::uint32_t>& x) {
    int k = 0;
    blob_labels(m, x, &k);
    return k;
}

using Seeds = std::vector<std::vector<std::uint32_t>>;

/// Seed blobs must be connected, off the border, and pairwise at vertex
/// distance >= 2.
inline void check_seeds(const Medium& m, const Seeds& seeds) {
    if (seeds.empty()) throw Error("seeds: at least one seed blob is required");
    std::vector<int> owner(m.num_vertices(), -1);
    for (std::size_t b = 0; b < seeds.size(); ++b) {
        if (seeds[b].empty()) throw Error("seeds: blob " + std::to_string(b) + " is empty");
        for (auto v : seeds[b]) {
            if (v >= m.num_vertices()) throw Error("seeds: vertex " + std::to_string(v) + " out of range");
            if (m.on_border[v]) throw Error("seeds: vertex " + std::to_string(v) + " lies on the border ring");
            if (owner[v] >= 0 && owner[v] != static_cast<int>(b)) throw Error("seeds: blobs overlap");
            owner[v] = static_cast<int>(b);
        }
    }
    for (std::size_t b = 0; b < seeds.size(); ++b) {
        std::vector<std::uint32_t> x(m.num_vertices(), 0);
        for (auto v : seeds[b]) x[v] = 1;
        if (count_blobs(m, x) != 1) throw Error("seeds: blob " + std::to_string(b) + " is not connected");
        for (auto v : seeds[b])
            for (auto w : m.neighbors(v))
                if (owner[w] >= 0 && owner[w] != static_cast<int>(b))
                    throw Error("seeds: blobs " + std::to_string(b) + " and " + std::to_string(owner[w]) + " are adjacent");
    }
}

inline std::vector<std::uint32_t> seed_field(const Medium& m, const Seeds& seeds) {
    std::vector<std::uint32_t> x(m.num_vertices(), 0);
    for (const auto& s : seeds)
        for (auto v : s) x[v] = 1;
    return x;
}

/// Brute-force discrete Voronoi diagram by per-blob BFS.
///
/// On a torus the local circuit cannot tell a blob from its own wrapped
/// copies, so distances are taken in the universal cover: every translate
/// of a blob within a 3x3 block of torus copies is a separate site.
struct VoronoiOracle {
    static constexpr int kTie = -2;
    static constexpr int kNone = -1;

    std::vector<int> nearest_dist;                // per vertex, -1 unreachable
    std::vector<std::vector<int>> nearest_sites;  // per vertex
    std::vector<int> site_blob;                   // site -> seed blob
    std::vector<std::uint8_t> vd_vertex;          // VD^V
    std::vector<std::uint8_t> vd_edge;            // VD^E
    std::vector<std::uint8_t> vertex_vd;          // closure of the two
    std::vector<std::uint8_t> strict;             // strict cells
    std::vector<int> cell;                        // seed blob, kTie or kNone
    std::vector<std::uint8_t> multi_site;         // >= 3 nearest sites
};

namespace detail {

/// Graph where the oracle measures distances, with a projection back onto
/// medium vertices.
struct Cover {
    std::vector<std::vector<std::uint32_t>> adj;
    std::vector<std::uint32_t> project;    // cover vertex -> medium vertex
    std::vector<std::uint32_t> lift;       // medium vertex -> its central copy
    std::vector<std::uint8_t> blocked;
    std::vector<std::vector<std::uint32_t>> copies;  // medium vertex -> all copies
};

inline Cover make_cover(const Medium& m) {
    Cover c;
    const std::uint32_t nv = static_cast<std::uint32_t>(m.num_vertices());
    if (!m.is_torus()) {
        c.adj.resize(nv);
        for (std::uint32_t v = 0; v < nv; ++v) c.adj[v] = m.neighbors(v);
        c.project.resize(nv);
        std::iota(c.project.begin(), c.project.end(), 0u);
        c.lift = c.project;
        c.blocked = m.on_border;
        c.copies.resize(nv);
        for (std::uint32_t v = 0; v < nv; ++v) c.copies[v] = {v};
        return c;
    }
    if (!m.is_hex()) throw Error("voronoi oracle: torus media must be hexagonal");
    const int W = 3 * m.cols, H = 3 * m.rows;
    auto id = [W](int c, int r) { return static_cast<std::uint32_t>(r * W + c); };
    c.adj.resize(static_cast<std::size_t>(W) * H);
    c.project.resize(c.adj.size());
    c.blocked.assign(c.adj.size(), 0);
    c.copies.resize(nv);
    c.lift.resize(nv);
    for (int r = 0; r < H; ++r)
        for (int q = 0; q < W; ++q) {
            const std::uint32_t v = id(q, r);
            const std::uint32_t mv = hex_index(m.cols, m.rows, q, r);
            c.project[v] = mv;
            c.copies[mv].push_back(v);
            if (q / m.cols == 1 && r / m.rows == 1) c.lift[mv] = v;
            for (const auto& d : kHexDirs) {
                const int qq = q + d[0], rr = r + d[1];
                if (qq >= 0 && qq < W && rr >= 0 && rr < H) c.adj[v].push_back(id(qq, rr));
            }
        }
    return c;
}

inline std::vector<int> cover_bfs(const Cover& c, const std::vector<std::uint32_t>& src) {
    std::vector<int> d(c.adj.size(), -1);
    std::deque<std::uint32_t> q;
    for (auto s : src) {
        d[s] = 0;
        q.push_back(s);
    }
    while (!q.empty()) {
        const auto v = q.front();
        q.pop_front();
        for (auto w : c.adj[v])
            if (!c.blocked[w] && d[w] < 0) {
                d[w] = d[v] + 1;
                q.push_back(w);
            }
    }
    return d;
}

}  // namespace detail

inline VoronoiOracle oracle_vd(const Medium& m, const Seeds& seeds) {
    check_seeds(m, seeds);
    const detail::Cover cov = detail::make_cover(m);
    VoronoiOracle o;
    std::vector<std::vector<int>> dist;  // per site, over medium vertices via lift
    std::vector<std::vector<int>> full;
    for (std::size_t b = 0; b < seeds.size(); ++b) {
        const std::size_t ncopies = cov.copies[seeds[b][0]].size();
        for (std::size_t k = 0; k < ncopies; ++k) {
            std::vector<std::uint32_t> src;
            for (auto v : seeds[b]) src.push_back(cov.copies[v][k]);
            full.push_back(detail::cover_bfs(cov, src));
            o.site_blob.push_back(static_cast<int>(b));
        }
    }
    const std::uint32_t nv = static_cast<std::uint32_t>(m.num_vertices());
    const std::size_t ns = full.size();
    auto d_at = [&](std::size_t s, std::uint32_t cv) { return full[s][cv]; };
    o.nearest_dist.assign(nv, -1);
    o.nearest_sites.assign(nv, {});
    o.vd_vertex.assign(nv, 0);
    o.multi_site.assign(nv, 0);
    for (std::uint32_t v = 0; v < nv; ++v) {
        const std::uint32_t cv = cov.lift[v];
        int best = -1;
        for (std::size_t s = 0; s < ns; ++s) {
            const int d = d_at(s, cv);
            if (d >= 0 && (best < 0 || d < best)) best = d;
        }
        o.nearest_dist[v] = best;
        if (best < 0) continue;
        for (std::size_t s = 0; s < ns; ++s)
            if (d_at(s, cv) == best) o.nearest_sites[v].push_back(static_cast<int>(s));
        o.vd_vertex[v] = o.nearest_sites[v].size() >= 2;
        o.multi_site[v] = o.nearest_sites[v].size() >= 3;
    }
    // Equidistant edges, in simplicial hops: a vertex at hop distance d is 2d
    // away, an edge is reached from an endpoint (+1) or from a face (+2 past
    // its apex).
    o.vd_edge.assign(m.edges.size(), 0);
    for (std::uint32_t e = 0; e < m.edges.size(); ++e) {
        const std::uint32_t a = m.edges[e][0], b = m.edges[e][1];
        const std::uint32_t ca = cov.lift[a];
        std::uint32_t cb = 0;
        for (auto cw : cov.adj[ca])
            if (cov.project[cw] == b) cb = cw;
        std::vector<std::uint32_t> apex;
        for (auto cw : cov.adj[ca])
            if (std::find(cov.adj[cb].begin(), cov.adj[cb].end(), cw) != cov.adj[cb].end()) apex.push_back(cw);
        auto lo = [](int x, int y) { return x < 0 ? y : (y < 0 ? x : std::min(x, y)); };
        int best = -1, nbest = 0;
        for (std::size_t s = 0; s < ns; ++s) {
            int d = -1;
            const int de = lo(d_at(s, ca), d_at(s, cb));
            if (de >= 0) d = 2 * de + 1;
            for (auto p : apex)
                if (d_at(s, p) >= 0) d = lo(d, 2 * d_at(s, p) + 2);
            if (d < 0) continue;
            if (best < 0 || d < best) {
                best = d;
                nbest = 1;
            } else if (d == best) {
                ++nbest;
            }
        }
        o.vd_edge[e] = nbest >= 2;
    }
    o.vertex_vd = o.vd_vertex;
    for (std::uint32_t e = 0; e < m.edges.size(); ++e)
        if (o.vd_edge[e]) o.vertex_vd[m.edges[e][0]] = o.vertex_vd[m.edges[e][1]] = 1;
    o.strict.assign(nv, 0);
    o.cell.assign(nv, VoronoiOracle::kNone);
    for (std::uint32_t v = 0; v < nv; ++v) {
        if (m.on_border[v] || o.nearest_dist[v] < 0) continue;
        std::set<int> blobs;
        for (int s : o.nearest_sites[v]) blobs.insert(o.site_blob[s]);
        o.cell[v] = blobs.size() == 1 && o.nearest_sites[v].size() == 1 ? o.site_blob[o.nearest_sites[v][0]] : VoronoiOracle::kTie;
        o.strict[v] = !o.vertex_vd[v] && o.nearest_sites[v].size() == 1;
    }
    return o;
}

struct VoronoiRun {
    std::vector<std::uint32_t> seeds;
    std::vector<std::uint32_t> final_x;
    long t_c = 0;
    bool converged = false;
    std::vector<std::uint8_t> vertex_vd;
    std::vector<std::uint8_t> multi;
    std::vector<int> cell;  // seed blob, or -1 for empty vertices
    std::vector<int> blob_counts;  // per step, including t = 0
    std::vector<std::vector<std::uint32_t>> trace;
};

inline CircuitDef vd_circuit() {
    const FieldType bv = FieldType::boolean_on(Locus::V);
    const Expr x = layer("x", bv);
    return {{{"x", bv}}, {{"x", vd_update(x)}}};
}

inline CircuitDef growth_circuit(int k = 1) {
    const FieldType bv = FieldType::boolean_on(Locus::V);
    const Expr x = layer("x", bv);
    return {{{"x", bv}}, {{"x", growth_update(x, k)}}};
}

/// Layers x and m: x is kept, m receives the vertex closure of meet(x).
inline CircuitDef meet_circuit() {
    const FieldType bv = FieldType::boolean_on(Locus::V);
    const Expr x = layer("x", bv);
    return {{{"x", bv}, {"m", bv}}, {{"x", x}, {"m", closureV(meetV(x), meetE(x))}}};
}

/// Vertices equidistant to three or more seeds stay empty and are not
/// adjacent to the merge closure: ¬x ∧ ¬closure^V(merge(x)).
inline std::vector<std::uint8_t> multi_vertices(const MediumPtr& m, const std::vector<std::uint32_t>& x) {
    const FieldType bv = FieldType::boolean_on(Locus::V);
    const Expr e = layer("x", bv);
    std::map<std::string, Values> env{{"x", x}};
    Interpreter in(*m, env);
    const Values v = in.eval(!e && !closureV(mergeV(e), mergeE(e)));
    std::vector<std::uint8_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] && !m->on_border[i];
    return out;
}

inline VoronoiRun run_vd(const MediumPtr& m, const Seeds& seeds, Engine& eng, double skip_prob, std::uint64_t rng_seed,
                         long max_steps, bool keep_trace = false) {
    check_seeds(*m, seeds);
    VoronoiRun run;
    run.seeds = seed_field(*m, seeds);
    Configuration c{m, {}};
    Field x(m, FieldType::boolean_on(Locus::V));
    x.assign(run.seeds);
    c.layers.emplace("x", std::move(x));
    auto observe = [&](const Configuration& cfg) {
        const auto v = cfg.at("x").values();
        run.blob_counts.push_back(count_blobs(*m, v));
        if (keep_trace) run.trace.push_back(v);
    };
    RunResult r = run_until_fixpoint(eng, std::move(c), max_steps, skip_prob, rng_seed, observe);
    run.t_c = r.t_c;
    run.converged = r.converged;
    run.final_x = r.config.at("x").values();
    const std::size_t nv = m->num_vertices();
    run.vertex_vd.assign(nv, 0);
    for (std::size_t v = 0; v < nv; ++v) run.vertex_vd[v] = !run.final_x[v] && !m->on_border[v];
    run.multi = multi_vertices(m, run.final_x);
    const auto lab = blob_labels(*m, run.final_x);
    std::map<int, int> blob_of_label;
    for (std::size_t b = 0; b < seeds.size(); ++b) blob_of_label[lab[seeds[b][0]]] = static_cast<int>(b);
    run.cell.assign(nv, -1);
    for (std::size_t v = 0; v < nv; ++v)
        if (lab[v] >= 0) {
            auto it = blob_of_label.find(lab[v]);
            run.cell[v] = it == blob_of_label.end() ? -1 : it->second;
        }
    return run;
}

struct DiffReport {
    std::size_t mismatches = 0;
    std::vector<std::uint32_t> vertices;
    bool blobs_conserved = true;
    bool multi_disjoint = true;

    bool ok() const { return mismatches == 0 && blobs_conserved && multi_disjoint; }
};

inline DiffReport compare(const Medium& m, const VoronoiRun& run, const VoronoiOracle& o, std::size_t n_seeds) {
    DiffReport d;
    for (std::uint32_t v = 0; v < m.num_vertices(); ++v) {
        if ((run.final_x[v] != 0) != (o.strict[v] != 0)) {
            ++d.mismatches;
            d.vertices.push_back(v);
        }
        if (run.multi[v] && o.strict[v]) d.multi_disjoint = false;
    }
    for (int c : run.blob_counts)
        if (c != static_cast<int>(n_seeds)) d.blobs_conserved = false;
    return d;
}

/// Random seeds: punctual blobs away from the border, pairwise at vertex
/// distance >= min_gap.
inline Seeds random_seeds(const Medium& m, int count, std::uint64_t seed, int min_gap = 2) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(m.num_vertices() - 1));
    Seeds s;
    std::vector<int> dmin(m.num_vertices(), 1 << 30);
    for (int tries = 0; static_cast<int>(s.size()) < count && tries < 100000; ++tries) {
        const std::uint32_t v = pick(rng);
        if (m.on_border[v] || dmin[v] < min_gap) continue;
        s.push_back({v});
        const auto d = vertex_bfs(m, {v});
        for (std::size_t w = 0; w < d.size(); ++w)
            if (d[w] >= 0) dmin[w] = std::min(dmin[w], d[w]);
    }
    return s;
}

}  // namespace spatial
