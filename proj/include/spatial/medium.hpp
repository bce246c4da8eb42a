#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "locus.hpp"

namespace spatial {

struct Point {
    double x = 0;
    double y = 0;
};

enum class Topology : std::uint8_t { Torus, Bordered };

inline constexpr std::int32_t kPhantom = -1;

/// Raw input to medium assembly: points and oriented faces.
struct MediumDescription {
    Topology topology = Topology::Bordered;
    int cols = 0;
    int rows = 0;
    std::vector<Point> points;
    std::vector<std::vector<std::uint32_t>> faces;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
    std::map<int, int> degree_histogram;
    long euler = 0;

    void fail(std::string msg) {
        ok = false;
        failures.push_back(std::move(msg));
    }
};

/// Per-locus data-point tables. Simplicial loci only use `father`.
struct LocusTable {
    std::vector<std::uint32_t> father;
    std::vector<std::uint16_t> ringpos;
    std::vector<std::uint32_t> offset;  // per father, size nfathers + 1
    std::vector<std::int32_t> facing;   // adjacent simplex of the facing class
    std::vector<std::uint32_t> partner;
    std::vector<std::int32_t> rot_ccw_src;  // source point in the brother locus
    std::vector<std::int32_t> rot_cw_src;
    std::vector<std::int32_t> sym_src;  // empty when symmetry is undefined
    Locus sym_from = Locus::V;

    std::size_t size() const { return father.size(); }
};

class Medium;

/// Hooks choosing the first ring entry of every simplex.
struct RingStarts {
    std::function<std::uint32_t(std::uint32_t v, const std::vector<std::uint32_t>& nbrs)> vertex;
    std::function<std::uint32_t(std::uint32_t a, std::uint32_t b)> edge;
    std::function<std::uint32_t(const std::array<std::uint32_t, 3>&)> face;
};

class Medium {
  public:
    Topology topology = Topology::Bordered;
    int cols = 0;
    int rows = 0;
    std::vector<Point> points;
    std::vector<std::array<std::uint32_t, 2>> edges;  // sorted pairs
    std::vector<std::array<std::uint32_t, 3>> faces;  // counter-clockwise from ring start
    std::vector<std::uint32_t> border_ring;
    std::vector<std::uint8_t> on_border;

    // Cyclic rings around each simplex, alternating the two other classes.
    // Vertex: e,f,e,f...  Edge: v,f,v,f  Face: v,e,v,e,v,e.  kPhantom marks gaps.
    std::array<std::vector<std::uint32_t>, 3> ring_off;
    std::array<std::vector<std::int32_t>, 3> ring;
    std::array<std::vector<std::int32_t>, 3> ring_point;  // point index in the transfer locus

    std::array<LocusTable, 9> loci;

    // Tiling: owning vertex and a translation-invariant code per simplex.
    std::array<std::vector<std::uint32_t>, 3> owner;
    std::array<std::vector<std::uint8_t>, 3> tile_code;

    bool is_hex() const { return cols > 0; }
    bool is_torus() const { return topology == Topology::Torus; }

    std::size_t count(SimplexClass c) const {
        switch (c) {
            case SimplexClass::V: return points.size();
            case SimplexClass::E: return edges.size();
            case SimplexClass::F: return faces.size();
        }
        return 0;
    }
    std::size_t num_vertices() const { return points.size(); }
    std::size_t num_points(Locus l) const { return loci[static_cast<int>(l)].size(); }
    const LocusTable& table(Locus l) const { return loci[static_cast<int>(l)]; }

    std::size_t ring_size(SimplexClass c, std::uint32_t i) const {
        const auto& off = ring_off[static_cast<int>(c)];
        return off[i + 1] - off[i];
    }
    std::int32_t ring_at(SimplexClass c, std::uint32_t i, std::size_t pos) const {
        return ring[static_cast<int>(c)][ring_off[static_cast<int>(c)][i] + pos];
    }

    /// Number of data-points of transfer locus l owned by one father.
    std::size_t coarity(Locus l, std::uint32_t father) const {
        const auto& t = table(l);
        return t.offset[father + 1] - t.offset[father];
    }
    std::size_t max_coarity(Locus l) const {
        std::size_t m = 0;
        const auto& t = table(l);
        for (std::size_t i = 0; i + 1 < t.offset.size(); ++i) m = std::max<std::size_t>(m, t.offset[i + 1] - t.offset[i]);
        return m;
    }

    /// Vertex neighbors in ring (counter-clockwise) order.
    std::vector<std::uint32_t> neighbors(std::uint32_t v) const {
        std::vector<std::uint32_t> out;
        const std::size_t n = ring_size(SimplexClass::V, v);
        for (std::size_t p = 0; p < n; p += 2) {
            const auto e = edges[ring_at(SimplexClass::V, v, p)];
            out.push_back(e[0] == v ? e[1] : e[0]);
        }
        return out;
    }
    std::size_t degree(std::uint32_t v) const { return ring_size(SimplexClass::V, v) / 2; }

    /// Simplicial neighbors (the non-phantom ring entries).
    std::vector<SimplexId> adjacent(SimplexId s) const {
        std::vector<SimplexId> out;
        const std::size_t n = ring_size(s.cls, s.index);
        for (std::size_t p = 0; p < n; ++p) {
            const std::int32_t x = ring_at(s.cls, s.index, p);
            if (x != kPhantom) out.push_back({ring_class(s.cls, p), static_cast<std::uint32_t>(x)});
        }
        return out;
    }

    /// Class of the simplex at a ring position of a father of class c.
    static SimplexClass ring_class(SimplexClass c, std::size_t pos) {
        using C = SimplexClass;
        const bool even = pos % 2 == 0;
        switch (c) {
            case C::V: return even ? C::E : C::F;
            case C::E: return even ? C::V : C::F;
            case C::F: return even ? C::V : C::E;
        }
        return C::V;
    }

    std::uint32_t edge_index(std::uint32_t a, std::uint32_t b) const {
        if (a > b) std::swap(a, b);
        auto it = std::lower_bound(edges.begin(), edges.end(), std::array<std::uint32_t, 2>{a, b});
        if (it == edges.end() || (*it)[0] != a || (*it)[1] != b) throw Error("edge_index: no such edge");
        return static_cast<std::uint32_t>(it - edges.begin());
    }

    /// Vertices of a simplex.
    std::vector<std::uint32_t> vertices_of(SimplexId s) const {
        switch (s.cls) {
            case SimplexClass::V: return {s.index};
            case SimplexClass::E: return {edges[s.index][0], edges[s.index][1]};
            case SimplexClass::F: return {faces[s.index][0], faces[s.index][1], faces[s.index][2]};
        }
        return {};
    }

    Point centroid(SimplexId s) const {
        const auto vs = vertices_of(s);
        const Point base = points[vs[0]];
        double sx = 0, sy = 0;
        for (auto v : vs) {
            const Point d = unwrap(base, points[v]);
            sx += d.x;
            sy += d.y;
        }
        return {sx / vs.size(), sy / vs.size()};
    }

    /// Position of q seen from p under the torus minimum image.
    Point unwrap(Point p, Point q) const {
        if (!is_torus()) return q;
        const double wx = cols, wy = rows * std::sqrt(3.0) / 2, shear = rows / 2.0;
        double best = 1e300;
        Point out = q;
        for (int j = -1; j <= 1; ++j)
            for (int i = -1; i <= 1; ++i) {
                const Point c{q.x + i * wx + j * shear, q.y + j * wy};
                const double d = (c.x - p.x) * (c.x - p.x) + (c.y - p.y) * (c.y - p.y);
                if (d < best) {
                    best = d;
                    out = c;
                }
            }
        return out;
    }

    MediumDescription description() const {
        MediumDescription d;
        d.topology = topology;
        d.cols = cols;
        d.rows = rows;
        d.points = points;
        for (const auto& f : faces) d.faces.push_back({f[0], f[1], f[2]});
        return d;
    }
};

using MediumPtr = std::shared_ptr<const Medium>;

namespace detail {

inline double signed_area(Point a, Point b, Point c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

inline std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t(a) << 32) | b;
}

}  // namespace detail

/// Structural checks on a raw description; never throws.
inline ValidationReport validate(const MediumDescription& d) {
    ValidationReport r;
    const std::size_t nv = d.points.size();
    std::map<std::uint64_t, int> directed;
    std::map<std::uint64_t, int> undirected;
    std::set<std::array<std::uint32_t, 3>> seen;
    for (std::size_t fi = 0; fi < d.faces.size(); ++fi) {
        const auto& f = d.faces[fi];
        if (f.size() != 3) {
            r.fail("non-triangle face " + std::to_string(fi) + " with " + std::to_string(f.size()) + " vertices");
            continue;
        }
        if (f[0] >= nv || f[1] >= nv || f[2] >= nv) {
            r.fail("face " + std::to_string(fi) + " references a missing vertex");
            continue;
        }
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            r.fail("degenerate face " + std::to_string(fi));
            continue;
        }
        std::array<std::uint32_t, 3> s{f[0], f[1], f[2]};
        std::sort(s.begin(), s.end());
        if (!seen.insert(s).second) r.fail("duplicate face " + std::to_string(fi));
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t a = f[k], b = f[(k + 1) % 3];
            if (++directed[(std::uint64_t(a) << 32) | b] > 1)
                r.fail("inconsistent orientation at edge " + std::to_string(a) + "-" + std::to_string(b));
            ++undirected[detail::edge_key(a, b)];
        }
        if (d.topology == Topology::Bordered &&
            detail::signed_area(d.points[f[0]], d.points[f[1]], d.points[f[2]]) <= 0)
            r.fail("face " + std::to_string(fi) + " is not counter-clockwise");
    }
    if (!r.ok) return r;

    std::size_t hull = 0;
    std::vector<int> deg(nv, 0);
    for (auto& [k, c] : undirected) {
        ++deg[k >> 32];
        ++deg[k & 0xffffffffu];
        if (c == 1) ++hull;
        if (c > 2) r.fail("edge shared by more than two faces");
    }
    const int min_degree = d.topology == Topology::Torus ? 3 : 2;
    for (std::size_t v = 0; v < nv; ++v) {
        ++r.degree_histogram[deg[v]];
        if (deg[v] < min_degree) r.fail("vertex " + std::to_string(v) + " has degree " + std::to_string(deg[v]));
    }
    const long V = static_cast<long>(nv), E = static_cast<long>(undirected.size()),
               F = static_cast<long>(d.faces.size());
    if (d.topology == Topology::Torus) {
        r.euler = V - E + F;
        if (hull != 0) r.fail("torus has border edges");
        if (r.euler != 0) r.fail("Euler characteristic " + std::to_string(r.euler) + " != 0 on torus");
        if (E != 3 * V || F != 2 * V) r.fail("torus counts violate E=3V, F=2V");
    } else {
        // The outer face is counted so that a disk gives 2.
        r.euler = V - E + F + 1;
        const long h = static_cast<long>(hull);
        if (r.euler != 2) r.fail("Euler characteristic " + std::to_string(r.euler) + " != 2 on disk");
        if (E != 3 * V - 3 - h || F != 2 * V - 2 - h) r.fail("disk counts violate E=3V-3-h, F=2V-2-h");
    }
    return r;
}

namespace detail {

inline void build_locus_tables(Medium& m) {
    using C = SimplexClass;
    for (Locus l : kAllLoci) {
        LocusTable& t = m.loci[static_cast<int>(l)];
        t = LocusTable{};
        const C x = father_class(l);
        const std::size_t nf = m.count(x);
        if (is_simplicial(l)) {
            t.father.resize(nf);
            std::iota(t.father.begin(), t.father.end(), 0u);
            continue;
        }
        const C y = facing_class(l);
        t.offset.assign(nf + 1, 0);
        for (std::uint32_t f = 0; f < nf; ++f) {
            t.offset[f] = static_cast<std::uint32_t>(t.father.size());
            const std::size_t n = m.ring_size(x, f);
            for (std::size_t p = 0; p < n; ++p) {
                if (Medium::ring_class(x, p) != y) continue;
                const std::int32_t s = m.ring_at(x, f, p);
                if (s == kPhantom) continue;
                t.father.push_back(f);
                t.ringpos.push_back(static_cast<std::uint16_t>(p));
                t.facing.push_back(s);
            }
        }
        t.offset[nf] = static_cast<std::uint32_t>(t.father.size());
    }
    for (C c : kSimplexClasses) {
        const int ci = static_cast<int>(c);
        m.ring_point[ci].assign(m.ring[ci].size(), kPhantom);
    }
    for (Locus l : kAllLoci) {
        if (is_simplicial(l)) continue;
        const auto& t = m.table(l);
        const int ci = static_cast<int>(father_class(l));
        for (std::uint32_t p = 0; p < t.size(); ++p)
            m.ring_point[ci][m.ring_off[ci][t.father[p]] + t.ringpos[p]] = static_cast<std::int32_t>(p);
    }
    auto point_at = [&](C x, std::uint32_t f, std::size_t pos) {
        const std::size_t n = m.ring_size(x, f);
        pos %= n;
        return m.ring_point[static_cast<int>(x)][m.ring_off[static_cast<int>(x)][f] + pos];
    };
    for (Locus l : kAllLoci) {
        if (is_simplicial(l)) continue;
        LocusTable& t = m.loci[static_cast<int>(l)];
        const C x = father_class(l);
        const Locus pl = partner_locus(l);
        const auto& pt = m.table(pl);
        t.partner.resize(t.size());
        t.rot_ccw_src.resize(t.size());
        t.rot_cw_src.resize(t.size());
        for (std::uint32_t p = 0; p < t.size(); ++p) {
            const std::uint32_t y = static_cast<std::uint32_t>(t.facing[p]);
            bool found = false;
            for (std::uint32_t q = pt.offset[y]; q < pt.offset[y + 1]; ++q)
                if (pt.facing[q] == static_cast<std::int32_t>(t.father[p])) {
                    t.partner[p] = q;
                    found = true;
                    break;
                }
            if (!found) throw Error("medium: transfer point without partner");
            const std::size_t n = m.ring_size(x, t.father[p]);
            t.rot_ccw_src[p] = point_at(x, t.father[p], t.ringpos[p] + n - 1);
            t.rot_cw_src[p] = point_at(x, t.father[p], t.ringpos[p] + 1);
        }
        // Central symmetry: the point half a turn away. On vertices this only
        // lands on the same class when every ring has the same even size.
        bool defined = true;
        if (x == C::V) {
            for (std::uint32_t v = 0; v < m.count(C::V); ++v)
                if (m.ring_size(C::V, v) != 12) defined = false;
        }
        if (!defined) continue;
        const std::size_t ring0 = m.ring_size(x, 0);
        Locus from = l;
        if ((ring0 / 2) % 2 == 1) from = brother_locus(l);
        t.sym_from = from;
        t.sym_src.resize(t.size());
        for (std::uint32_t p = 0; p < t.size(); ++p) {
            const std::size_t n = m.ring_size(x, t.father[p]);
            t.sym_src[p] = point_at(x, t.father[p], t.ringpos[p] + n / 2);
        }
    }
}

}  // namespace detail

/// Builds rings, transfer tables and tiles from a validated description.
inline Medium assemble(const MediumDescription& d, const RingStarts& starts = {}) {
    using C = SimplexClass;
    const ValidationReport rep = validate(d);
    if (!rep.ok) throw Error("invalid medium: " + rep.failures.front());

    Medium m;
    m.topology = d.topology;
    m.cols = d.cols;
    m.rows = d.rows;
    m.points = d.points;
    const std::uint32_t nv = static_cast<std::uint32_t>(d.points.size());

    // Canonical faces: ordered by sorted vertex triple, stored ccw from the ring start.
    std::vector<std::array<std::uint32_t, 3>> raw;
    for (const auto& f : d.faces) raw.push_back({f[0], f[1], f[2]});
    std::sort(raw.begin(), raw.end(), [](auto a, auto b) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return a < b;
    });
    for (auto& f : raw) {
        std::uint32_t s = starts.face ? starts.face(f) : std::min({f[0], f[1], f[2]});
        while (f[0] != s) std::rotate(f.begin(), f.begin() + 1, f.end());
    }
    m.faces = raw;

    std::set<std::array<std::uint32_t, 2>> es;
    for (const auto& f : m.faces)
        for (int k = 0; k < 3; ++k) {
            std::uint32_t a = f[k], b = f[(k + 1) % 3];
            es.insert({std::min(a, b), std::max(a, b)});
        }
    m.edges.assign(es.begin(), es.end());

    // Directed edge a->b to the face on its left.
    std::map<std::uint64_t, std::uint32_t> left;
    for (std::uint32_t fi = 0; fi < m.faces.size(); ++fi) {
        const auto& f = m.faces[fi];
        for (int k = 0; k < 3; ++k) left[(std::uint64_t(f[k]) << 32) | f[(k + 1) % 3]] = fi;
    }
    auto left_of = [&](std::uint32_t a, std::uint32_t b) -> std::int32_t {
        auto it = left.find((std::uint64_t(a) << 32) | b);
        return it == left.end() ? kPhantom : static_cast<std::int32_t>(it->second);
    };

    // Vertex rings: around v, the face left of v->n_i has n_{i+1} as third vertex.
    std::vector<std::map<std::uint32_t, std::uint32_t>> next(nv);
    std::vector<std::set<std::uint32_t>> has_prev(nv);
    for (const auto& f : m.faces)
        for (int k = 0; k < 3; ++k) {
            next[f[k]][f[(k + 1) % 3]] = f[(k + 2) % 3];
            has_prev[f[k]].insert(f[(k + 2) % 3]);
        }
    m.on_border.assign(nv, 0);
    for (auto c : kSimplexClasses) m.ring_off[static_cast<int>(c)] = {0};
    for (std::uint32_t v = 0; v < nv; ++v) {
        std::vector<std::uint32_t> firsts;
        for (auto& [n, _] : next[v])
            if (!has_prev[v].count(n)) firsts.push_back(n);
        if (firsts.size() > 1) throw Error("invalid medium: vertex " + std::to_string(v) + " is not a manifold point");
        std::uint32_t start;
        std::vector<std::uint32_t> order;
        if (!firsts.empty()) {
            m.on_border[v] = 1;
            start = firsts[0];
        } else {
            start = next[v].begin()->first;
        }
        std::uint32_t cur = start;
        while (true) {
            order.push_back(cur);
            auto it = next[v].find(cur);
            if (it == next[v].end()) break;
            cur = it->second;
            if (cur == start) break;
            if (order.size() > next[v].size() + 1) throw Error("invalid medium: broken vertex fan");
        }
        if (!m.on_border[v] && starts.vertex) {
            const std::uint32_t s = starts.vertex(v, order);
            auto it = std::find(order.begin(), order.end(), s);
            if (it == order.end()) throw Error("ring start is not a neighbor");
            std::rotate(order.begin(), it, order.end());
        } else if (!m.on_border[v]) {
            std::rotate(order.begin(), std::min_element(order.begin(), order.end()), order.end());
        }
        auto& rv = m.ring[0];
        for (std::size_t i = 0; i < order.size(); ++i) {
            rv.push_back(static_cast<std::int32_t>(m.edge_index(v, order[i])));
            rv.push_back(left_of(v, order[i]));
        }
        m.ring_off[0].push_back(static_cast<std::uint32_t>(rv.size()));
    }

    // Edge rings: [u, face right of u->v, v, face left of u->v].
    for (std::uint32_t e = 0; e < m.edges.size(); ++e) {
        std::uint32_t u = m.edges[e][0], w = m.edges[e][1];
        if (starts.edge && starts.edge(u, w) == w) std::swap(u, w);
        auto& re = m.ring[1];
        re.push_back(static_cast<std::int32_t>(u));
        re.push_back(left_of(w, u));
        re.push_back(static_cast<std::int32_t>(w));
        re.push_back(left_of(u, w));
        m.ring_off[1].push_back(static_cast<std::uint32_t>(re.size()));
    }

    // Face rings: a, ab, b, bc, c, ca.
    for (const auto& f : m.faces) {
        auto& rf = m.ring[2];
        for (int k = 0; k < 3; ++k) {
            rf.push_back(static_cast<std::int32_t>(f[k]));
            rf.push_back(static_cast<std::int32_t>(m.edge_index(f[k], f[(k + 1) % 3])));
        }
        m.ring_off[2].push_back(static_cast<std::uint32_t>(rf.size()));
    }

    // Border ring: follow hull edges (left face missing) counter-clockwise.
    if (m.topology == Topology::Bordered) {
        std::map<std::uint32_t, std::uint32_t> hull_next;
        for (const auto& e : m.edges) {
            if (left_of(e[0], e[1]) == kPhantom) hull_next[e[0]] = e[1];
            if (left_of(e[1], e[0]) == kPhantom) hull_next[e[1]] = e[0];
        }
        if (!hull_next.empty()) {
            std::uint32_t s = hull_next.begin()->first, cur = s;
            do {
                m.border_ring.push_back(cur);
                cur = hull_next.at(cur);
            } while (cur != s && m.border_ring.size() <= hull_next.size());
            if (m.border_ring.size() != hull_next.size()) throw Error("invalid medium: border is not a single cycle");
        }
    }

    detail::build_locus_tables(m);

    // Default tiling: every simplex belongs to its ring-start vertex.
    m.owner[0].resize(nv);
    std::iota(m.owner[0].begin(), m.owner[0].end(), 0u);
    m.tile_code[0].assign(nv, 0);
    m.owner[1].resize(m.edges.size());
    m.tile_code[1].assign(m.edges.size(), 0);
    for (std::uint32_t e = 0; e < m.edges.size(); ++e)
        m.owner[1][e] = static_cast<std::uint32_t>(m.ring_at(C::E, e, 0));
    m.owner[2].resize(m.faces.size());
    m.tile_code[2].assign(m.faces.size(), 0);
    for (std::uint32_t f = 0; f < m.faces.size(); ++f) m.owner[2][f] = m.faces[f][0];
    return m;
}

/// Axial hex directions in counter-clockwise order.
inline constexpr std::array<std::array<int, 2>, 6> kHexDirs{
    {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};

inline std::uint32_t hex_index(int cols, int rows, int c, int r) {
    c = ((c % cols) + cols) % cols;
    r = ((r % rows) + rows) % rows;
    return static_cast<std::uint32_t>(r * cols + c);
}

inline MediumDescription hex_torus_description(int cols, int rows) {
    if (cols < 3) throw Error("build_hex_torus: cols must be >= 3 (got " + std::to_string(cols) + ")");
    if (rows < 3) throw Error("build_hex_torus: rows must be >= 3 (got " + std::to_string(rows) + ")");
    MediumDescription d;
    d.topology = Topology::Torus;
    d.cols = cols;
    d.rows = rows;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) d.points.push_back({c + r / 2.0, r * std::sqrt(3.0) / 2});
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            d.faces.push_back({hex_index(cols, rows, c, r), hex_index(cols, rows, c + 1, r),
                               hex_index(cols, rows, c, r + 1)});
            d.faces.push_back({hex_index(cols, rows, c + 1, r), hex_index(cols, rows, c + 1, r + 1),
                               hex_index(cols, rows, c, r + 1)});
        }
    return d;
}

/// Hexagonal torus on axial coordinates; vertex (c,r) has index r*cols+c.
inline Medium build_hex_torus(int cols, int rows) {
    const MediumDescription d = hex_torus_description(cols, rows);
    auto cr = [cols](std::uint32_t v) { return std::array<int, 2>{int(v) % cols, int(v) / cols}; };
    auto step = [&](std::uint32_t v, int dir) {
        auto p = cr(v);
        return hex_index(cols, rows, p[0] + kHexDirs[dir][0], p[1] + kHexDirs[dir][1]);
    };
    RingStarts rs;
    rs.vertex = [&](std::uint32_t v, const std::vector<std::uint32_t>&) { return step(v, 0); };
    // Tile (c,r) owns its edges in directions 0..2 and the two faces between them.
    rs.edge = [&](std::uint32_t a, std::uint32_t b) {
        for (int k = 0; k < 3; ++k)
            if (step(a, k) == b) return a;
        return b;
    };
    rs.face = [&](const std::array<std::uint32_t, 3>& f) {
        for (int k = 0; k < 3; ++k) {
            const std::uint32_t a = f[k], b = f[(k + 1) % 3], c = f[(k + 2) % 3];
            if ((step(a, 0) == b && step(a, 1) == c) || (step(a, 1) == b && step(a, 2) == c)) return a;
        }
        throw Error("hex face without owner");
    };
    Medium m = assemble(d, rs);
    for (std::uint32_t e = 0; e < m.edges.size(); ++e) {
        const std::uint32_t a = m.owner[1][e];
        const std::uint32_t b = static_cast<std::uint32_t>(m.ring_at(SimplexClass::E, e, 2));
        for (int k = 0; k < 3; ++k)
            if (step(a, k) == b) m.tile_code[1][e] = static_cast<std::uint8_t>(k);
    }
    for (std::uint32_t f = 0; f < m.faces.size(); ++f)
        m.tile_code[2][f] = step(m.faces[f][0], 0) == m.faces[f][1] ? 0 : 1;
    return m;
}

/// Full validation of an assembled medium, including transfer pairing.
inline ValidationReport validate(const Medium& m) {
    ValidationReport r = validate(m.description());
    if (!r.ok) return r;
    for (Locus l : kAllLoci) {
        if (is_simplicial(l)) continue;
        const auto& t = m.table(l);
        const auto& pt = m.table(partner_locus(l));
        for (std::uint32_t p = 0; p < t.size(); ++p) {
            if (pt.partner[t.partner[p]] != p) {
                r.fail(std::string("transfer pairing broken on locus ") + std::string(locus_name(l)));
                break;
            }
        }
    }
    for (std::uint32_t v = 0; v < m.num_vertices(); ++v) {
        const std::size_t n = m.ring_size(SimplexClass::V, v);
        for (std::size_t p = 0; p + 1 < n; p += 2) {
            const auto e = m.ring_at(SimplexClass::V, v, p);
            if (e == kPhantom) r.fail("vertex ring has a missing edge");
        }
    }
    if (m.topology == Topology::Bordered) {
        std::size_t hull = 0;
        for (std::uint32_t e = 0; e < m.edges.size(); ++e)
            if (m.ring_at(SimplexClass::E, e, 1) == kPhantom || m.ring_at(SimplexClass::E, e, 3) == kPhantom) ++hull;
        if (hull != m.border_ring.size()) r.fail("border ring does not cover the hull");
    }
    for (auto c : kSimplexClasses)
        for (std::uint32_t i = 0; i < m.count(c); ++i) {
            const auto vs = m.vertices_of({c, i});
            if (std::find(vs.begin(), vs.end(), m.owner[static_cast<int>(c)][i]) == vs.end()) {
                r.fail("simplex owned by a non-incident vertex");
                return r;
            }
        }
    return r;
}

/// Dense index of a simplex over all classes: V first, then E, then F.
inline std::size_t simplex_slot(const Medium& m, SimplexId s) {
    switch (s.cls) {
        case SimplexClass::V: return s.index;
        case SimplexClass::E: return m.count(SimplexClass::V) + s.index;
        case SimplexClass::F: return m.count(SimplexClass::V) + m.count(SimplexClass::E) + s.index;
    }
    return 0;
}

/// Hop counts in the simplicial graph from one source to every simplex.
inline std::vector<int> simplicial_bfs(const Medium& m, SimplexId src) {
    const std::size_t total = m.count(SimplexClass::V) + m.count(SimplexClass::E) + m.count(SimplexClass::F);
    std::vector<int> dist(total, -1);
    std::deque<SimplexId> q;
    dist[simplex_slot(m, src)] = 0;
    q.push_back(src);
    while (!q.empty()) {
        const SimplexId s = q.front();
        q.pop_front();
        const int d = dist[simplex_slot(m, s)];
        for (const SimplexId t : m.adjacent(s)) {
            int& dt = dist[simplex_slot(m, t)];
            if (dt < 0) {
                dt = d + 1;
                q.push_back(t);
            }
        }
    }
    return dist;
}

inline int simplicial_distance(const Medium& m, SimplexId a, SimplexId b) {
    return simplicial_bfs(m, a)[simplex_slot(m, b)];
}

/// Graph distances between vertices, skipping vertices flagged in `blocked`.
inline std::vector<int> vertex_bfs(const Medium& m, const std::vector<std::uint32_t>& sources,
                                   const std::vector<std::uint8_t>* blocked = nullptr) {
    std::vector<int> dist(m.num_vertices(), -1);
    std::deque<std::uint32_t> q;
    for (auto s : sources) {
        if (dist[s] == 0) continue;
        dist[s] = 0;
        q.push_back(s);
    }
    while (!q.empty()) {
        const std::uint32_t v = q.front();
        q.pop_front();
        for (auto w : m.neighbors(v)) {
            if (blocked && (*blocked)[w]) continue;
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
        }
    }
    return dist;
}

/// Largest vertex-to-vertex simplicial distance.
inline int simplicial_diameter(const Medium& m) {
    int best = 0;
    const std::size_t n = m.num_vertices();
    const std::size_t stride = m.is_hex() && m.is_torus() ? n : 1;  // vertex transitive
    for (std::uint32_t v = 0; v < n; v += static_cast<std::uint32_t>(stride)) {
        const auto d = vertex_bfs(m, {v});
        for (int x : d) best = std::max(best, 2 * x);
    }
    return best;
}

/// Isotropic tiling by random tournament: each edge and face goes to one of
/// its vertices, visiting simplexes in random order and picking the least
/// loaded candidate.
inline void assign_tiles(Medium& m, std::uint64_t seed) {
    if (m.is_hex()) return;
    std::mt19937_64 rng(seed);
    std::vector<int> load(m.num_vertices(), 1);
    std::vector<SimplexId> order;
    for (std::uint32_t e = 0; e < m.edges.size(); ++e) order.push_back({SimplexClass::E, e});
    for (std::uint32_t f = 0; f < m.faces.size(); ++f) order.push_back({SimplexClass::F, f});
    std::shuffle(order.begin(), order.end(), rng);
    for (const auto& s : order) {
        auto vs = m.vertices_of(s);
        std::shuffle(vs.begin(), vs.end(), rng);
        std::uint32_t best = vs[0];
        for (auto v : vs)
            if (load[v] < load[best]) best = v;
        ++load[best];
        m.owner[static_cast<int>(s.cls)][s.index] = best;
    }
}

/// Per-tile load (number of owned simplexes of all classes).
inline std::vector<int> tile_loads(const Medium& m) {
    std::vector<int> load(m.num_vertices(), 0);
    for (auto c : kSimplexClasses)
        for (auto o : m.owner[static_cast<int>(c)]) ++load[o];
    return load;
}

}  // namespace spatial
