#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "test_util.hpp"

using namespace spatial;
using namespace spatial::testing;

namespace {

// Oracles built from the raw edge and face lists only.
struct Raw {
    const Medium& m;
    std::vector<std::set<std::uint32_t>> nbr;
    std::vector<std::vector<std::uint32_t>> faces_of_edge;

    explicit Raw(const Medium& med) : m(med), nbr(med.num_vertices()), faces_of_edge(med.edges.size()) {
        for (const auto& e : m.edges) {
            nbr[e[0]].insert(e[1]);
            nbr[e[1]].insert(e[0]);
        }
        for (std::uint32_t f = 0; f < m.faces.size(); ++f)
            for (int k = 0; k < 3; ++k) faces_of_edge[edge_of(m.faces[f][k], m.faces[f][(k + 1) % 3])].push_back(f);
    }
    std::uint32_t edge_of(std::uint32_t a, std::uint32_t b) const { return m.edge_index(std::min(a, b), std::max(a, b)); }

    // Neighbours sorted by angle around v.
    std::vector<std::uint32_t> angular(std::uint32_t v) const {
        std::vector<std::pair<double, std::uint32_t>> a;
        for (auto w : nbr[v]) {
            const Point p = m.unwrap(m.points[v], m.points[w]);
            a.push_back({std::atan2(p.y - m.points[v].y, p.x - m.points[v].x), w});
        }
        std::sort(a.begin(), a.end());
        std::vector<std::uint32_t> out;
        for (auto& [_, w] : a) out.push_back(w);
        return out;
    }
};

Field efield(const MediumPtr& m, const std::vector<std::uint32_t>& v) {
    Field f(m, kBE);
    f.assign(v);
    return f;
}

std::vector<std::uint32_t> random_bits(std::size_t n, std::uint64_t seed, double p) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution b(p);
    std::vector<std::uint32_t> out(n);
    for (auto& x : out) x = b(rng);
    return out;
}

const Expr X = layer("x", FieldType::boolean_on(Locus::V));

}  // namespace

TEST(Interpret, EdgeFeatures) {
    for (const auto& m : {hex(9, 8), iso(150, 3)}) {
        const Raw raw(*m);
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto x = random_bits(m->num_vertices(), s, 0.4);
            const std::map<std::string, Field> L{{"x", vfield(m, x)}};
            const auto fr = eval(frontierE(X), m, L), in = eval(insideE(X), m, L), out = eval(outsideE(X), m, L);
            for (std::size_t e = 0; e < m->edges.size(); ++e) {
                const auto a = x[m->edges[e][0]], b = x[m->edges[e][1]];
                EXPECT_EQ(fr[e], a ^ b);
                EXPECT_EQ(in[e], a & b);
                EXPECT_EQ(out[e], !a && !b);
            }
            const auto inf = eval(insideF(X), m, L);
            for (std::size_t f = 0; f < m->faces.size(); ++f)
                EXPECT_EQ(inf[f], x[m->faces[f][0]] & x[m->faces[f][1]] & x[m->faces[f][2]]);
        }
    }
}

TEST(Interpret, VertexFeatures) {
    for (const auto& m : {hex(10, 7), iso(160, 4)}) {
        const Raw raw(*m);
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto x = random_bits(m->num_vertices(), 100 + s, 0.5);
            const std::map<std::string, Field> L{{"x", vfield(m, x)}};
            const auto in = eval(insideV(X), m, L), out = eval(outsideV(X), m, L), nb = eval(neighborhoodV(X), m, L),
                       fr = eval(frontierV(X), m, L);
            for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
                bool all = x[v], none = !x[v], any = x[v], diff = false;
                for (auto w : raw.nbr[v]) {
                    all = all && x[w];
                    none = none && !x[w];
                    any = any || x[w];
                    diff = diff || x[w] != x[v];
                }
                EXPECT_EQ(in[v], all) << v;
                EXPECT_EQ(out[v], none) << v;
                EXPECT_EQ(nb[v], any) << v;
                EXPECT_EQ(fr[v], diff) << v;
            }
        }
    }
}

TEST(Interpret, FrontierOfIsolatedVertex) {
    const auto m = hex(8, 8);
    const std::uint32_t c = hex_index(8, 8, 4, 4);
    const std::map<std::string, Field> L{{"x", from_points(m, kBV, {c})}};
    const auto fr = eval(frontierV(X), m, L);
    EXPECT_EQ(std::count(fr.begin(), fr.end(), 1u), 7);
    const auto d = eval(delta(C::E, X), m, L);
    for (std::size_t e = 0; e < m->edges.size(); ++e)
        EXPECT_EQ(d[e], m->edges[e][0] == c || m->edges[e][1] == c);
}

TEST(Interpret, NbccCountsRunsAroundTheRing) {
    for (const auto& m : {hex(9, 9), iso(200, 6)}) {
        const Raw raw(*m);
        for (std::uint64_t s = 0; s < 6; ++s) {
            const auto x = random_bits(m->num_vertices(), 200 + s, 0.45);
            const auto got = eval(nbcc(X), m, {{"x", vfield(m, x)}});
            for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
                if (m->on_border[v]) continue;
                const auto ring = raw.angular(v);
                int changes = 0;
                for (std::size_t i = 0; i < ring.size(); ++i) changes += x[ring[i]] != x[ring[(i + 1) % ring.size()]];
                EXPECT_EQ(got[v], static_cast<std::uint32_t>(changes / 2)) << v;
            }
        }
    }
}

TEST(Interpret, RhombusCoversBothTriangles) {
    for (const auto& m : {hex(7, 7), iso(120, 2)}) {
        const Raw raw(*m);
        const auto y = random_bits(m->edges.size(), 9, 0.8);
        const auto got = eval(rhombus(layer("y", kBE)), m, {{"y", efield(m, y)}});
        for (std::uint32_t e = 0; e < m->edges.size(); ++e) {
            bool all = true;
            for (auto f : raw.faces_of_edge[e])
                for (int k = 0; k < 3; ++k) all = all && y[raw.edge_of(m->faces[f][k], m->faces[f][(k + 1) % 3])];
            EXPECT_EQ(got[e], all) << e;
        }
    }
}

TEST(Interpret, RhombusAroundOneEmptyVertex) {
    // Every edge whose rhombus touches the empty vertex loses: the 6 incident
    // edges and the 6 edges of its link.
    const auto m = hex(8, 8);
    const std::uint32_t c = hex_index(8, 8, 3, 3);
    Field notx(m, kBV);
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v) notx.set(v, v != c);
    const auto got = eval(rhombus(insideE(X)), m, {{"x", notx}});
    EXPECT_EQ(std::count(got.begin(), got.end(), 0u), 12);
}

TEST(Interpret, SumOfOnesIsTheDegree) {
    const auto m = iso(150, 8);
    const auto s = eval(simplicial_reduce(ReduceOp::Plus, C::V, konst(Locus::E, 1)), m, {});
    const Raw raw(*m);
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v) EXPECT_EQ(s[v], raw.nbr[v].size());
}

TEST(Interpret, BorderPhantomsAreNeutral) {
    const auto m = iso(120, 5);
    const auto all = eval(forall(C::V, konst(Locus::E, 1)), m, {});
    const auto any = eval(exists(C::V, konst(Locus::F, 0)), m, {});
    const auto par = eval(delta(C::V, konst(Locus::F, 0)), m, {});
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
        EXPECT_EQ(all[v], 1u);
        EXPECT_EQ(any[v], 0u);
        EXPECT_EQ(par[v], 0u);
    }
    // Hull edges see one face.
    const auto faces = eval(simplicial_reduce(ReduceOp::Plus, C::E, konst(Locus::F, 1)), m, {});
    const Raw raw(*m);
    for (std::uint32_t e = 0; e < m->edges.size(); ++e) EXPECT_EQ(faces[e], raw.faces_of_edge[e].size());
}

TEST(Interpret, RotationsInvert) {
    for (const auto& m : {hex(6, 6), iso(90, 1)}) {
        const Expr t = transfer(broadcast(C::F, X));  // vF
        const auto x = random_bits(m->num_vertices(), 4, 0.5);
        const std::map<std::string, Field> L{{"x", vfield(m, x)}};
        EXPECT_EQ(eval(rotate_ccw(rotate_cw(t)), m, L), eval(t, m, L));
        Expr r = t;
        for (int i = 0; i < 6; ++i) r = rotate_cw(r);  // vF and eF alternate around the face
        EXPECT_EQ(r->locus, Locus::vF);
        EXPECT_EQ(eval(r, m, L), eval(t, m, L));
        EXPECT_EQ(eval(transfer(transfer(t)), m, L), eval(t, m, L));
        EXPECT_EQ(eval(symmetry(symmetry(transfer(broadcast(C::E, X)))), m, L), eval(transfer(broadcast(C::E, X)), m, L));
    }
}

TEST(Interpret, UnboundLayerThrows) {
    const auto m = hex(4, 4);
    EXPECT_THROW(eval(frontierE(X), m, {}), Error);
    EXPECT_THROW(eval(frontierE(X), m, {{"x", Field(m, kBE)}}), Error);
}

TEST(Interpret, ArithmeticAndComparisons) {
    const auto m = hex(5, 5);
    const Expr n = layer("n", FieldType::integer_on(Locus::V, 3));
    Field f(m, FieldType::integer_on(Locus::V, 3));
    for (std::uint32_t v = 0; v < 25; ++v) f.set(v, v % 8);
    const std::map<std::string, Field> L{{"n", f}};
    const auto sh = eval(shr(n, 1), m, L), ge = eval(compare(Op::Ge, n, 5), m, L), eq = eval(compare(Op::Eq, n, 3), m, L);
    for (std::uint32_t v = 0; v < 25; ++v) {
        EXPECT_EQ(sh[v], (v % 8) >> 1);
        EXPECT_EQ(ge[v], v % 8 >= 5);
        EXPECT_EQ(eq[v], v % 8 == 3);
    }
}
