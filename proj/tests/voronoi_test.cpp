#include <gtest/gtest.h>

#include <set>

#include "spatial/voronoi.hpp"
#include "test_util.hpp"

using namespace spatial;
using namespace spatial::testing;

namespace {

Seeds at(const Medium& m, std::vector<std::pair<int, int>> qr) {
    Seeds s;
    for (auto [q, r] : qr) s.push_back({hex_index(m.cols, m.rows, q, r)});
    return s;
}

VoronoiRun run(const MediumPtr& m, const Seeds& s, double skip = 0, std::uint64_t rng = 1) {
    InterpreterEngine eng(vd_circuit());
    return run_vd(m, s, eng, skip, rng, 1000);
}

}  // namespace

TEST(Oracle, NearestDistanceIsTheTorusMetric) {
    const auto m = hex(13, 11);
    const Seeds s = at(*m, {{1, 1}, {7, 4}, {10, 9}});
    const VoronoiOracle o = oracle_vd(*m, s);
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
        int want = 1 << 30;
        for (const auto& b : s) want = std::min(want, torus_hex_distance(*m, b[0], v));
        EXPECT_EQ(o.nearest_dist[v], want) << v;
    }
}

TEST(Oracle, StrictCellsAreUniquelyNearest) {
    const auto m = hex(16, 16);
    const Seeds s = at(*m, {{3, 3}, {11, 6}});
    const VoronoiOracle o = oracle_vd(*m, s);
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
        if (!o.strict[v]) continue;
        std::set<int> blobs;
        for (int st : o.nearest_sites[v]) blobs.insert(o.site_blob[st]);
        EXPECT_EQ(blobs.size(), 1u) << v;
        EXPECT_EQ(o.cell[v], *blobs.begin());
    }
    for (const auto& b : s) EXPECT_TRUE(o.strict[b[0]]);
}

TEST(Voronoi, ExactFixtures) {
    {
        const auto m = hex(13, 14);
        const Seeds s = at(*m, {{9, 9}, {9, 1}});
        const VoronoiRun r = run(m, s);
        EXPECT_TRUE(r.converged);
        EXPECT_TRUE(compare(*m, r, oracle_vd(*m, s), s.size()).ok());
        EXPECT_EQ(r.t_c, 5);
    }
    {
        const auto m = hex(8, 8);
        const Seeds s = at(*m, {{4, 0}, {5, 4}, {1, 5}});
        const VoronoiRun r = run(m, s);
        EXPECT_TRUE(compare(*m, r, oracle_vd(*m, s), s.size()).ok());
    }
}

TEST(Voronoi, TieWedgeIsSplitBetweenFronts) {
    // Seeds three steps apart along a lattice row: the oracle keeps a wedge
    // of equidistant vertices empty, the two fronts divide it.
    const auto m = hex(22, 18);
    const Seeds s = at(*m, {{4, 11}, {7, 11}});
    const VoronoiRun r = run(m, s);
    const VoronoiOracle o = oracle_vd(*m, s);
    const std::uint32_t v = hex_index(22, 18, 7, 6);
    EXPECT_EQ(torus_hex_distance(*m, s[0][0], v), torus_hex_distance(*m, s[1][0], v));
    EXPECT_FALSE(o.strict[v]);
    EXPECT_TRUE(r.final_x[v]);
    EXPECT_GT(compare(*m, r, o, 2).mismatches, 0u);
}

TEST(Voronoi, BlobsAreConservedOnRandomSeeds) {
    for (int t = 0; t < 12; ++t) {
        const auto m = t % 2 ? hex(12 + t, 10 + t) : iso(180, 30 + t);
        const Seeds s = random_seeds(*m, 3 + t % 3, 500 + t, 3);
        const VoronoiRun r = run(m, s);
        EXPECT_TRUE(r.converged);
        for (int c : r.blob_counts) EXPECT_EQ(c, static_cast<int>(s.size()));
        // Every filled vertex belongs to the blob of some seed.
        for (std::uint32_t v = 0; v < m->num_vertices(); ++v)
            if (r.final_x[v]) EXPECT_GE(r.cell[v], 0);
    }
}

TEST(Voronoi, CircleOfSeedsLeavesTheCentreMulti) {
    const int C = 24, cq = 12, cr = 12, rad = 4;
    const auto m = hex(C, C);
    Seeds ring;
    int q = cq + kHexDirs[4][0] * rad, r = cr + kHexDirs[4][1] * rad, i = 0;
    for (int side = 0; side < 6; ++side)
        for (int j = 0; j < rad; ++j) {
            if (i++ % 2 == 0) ring.push_back({hex_index(C, C, q, r)});
            q += kHexDirs[side][0];
            r += kHexDirs[side][1];
        }
    ASSERT_EQ(ring.size(), 12u);
    const std::uint32_t centre = hex_index(C, C, cq, cr);
    for (const auto& b : ring) EXPECT_EQ(torus_hex_distance(*m, centre, b[0]), rad);
    const VoronoiRun res = run(m, ring);
    EXPECT_TRUE(res.converged);
    EXPECT_FALSE(res.final_x[centre]);
    EXPECT_TRUE(res.multi[centre]);
}

TEST(Voronoi, AsynchronousRunsStillSeparate) {
    const auto m = hex(16, 16);
    const Seeds s = at(*m, {{2, 2}, {10, 3}, {6, 11}});
    for (std::uint64_t rng = 0; rng < 4; ++rng) {
        const VoronoiRun r = run(m, s, 0.5, rng);
        EXPECT_TRUE(r.converged);
        for (int c : r.blob_counts) EXPECT_EQ(c, 3);
    }
}

TEST(Seeds, Validation) {
    const auto m = hex(10, 10);
    EXPECT_THROW(check_seeds(*m, {}), Error);
    EXPECT_THROW(check_seeds(*m, at(*m, {{2, 2}, {3, 2}})), Error);  // adjacent
    EXPECT_THROW(check_seeds(*m, {{0, 5}}), Error);                   // not connected
    EXPECT_THROW(check_seeds(*m, {{1000}}), Error);
    EXPECT_THROW(check_seeds(*m, {{1}, {1}}), Error);
    EXPECT_NO_THROW(check_seeds(*m, at(*m, {{2, 2}, {4, 2}})));
    const auto i = iso(100, 2);
    EXPECT_THROW(check_seeds(*i, {{i->border_ring[0]}}), Error);
}

TEST(Seeds, RandomSeedsKeepTheirGap) {
    const auto m = iso(250, 4);
    const Seeds s = random_seeds(*m, 6, 9, 4);
    ASSERT_EQ(s.size(), 6u);
    for (std::size_t a = 0; a < s.size(); ++a) {
        EXPECT_FALSE(m->on_border[s[a][0]]);
        const auto d = vertex_bfs(*m, {s[a][0]});
        for (std::size_t b = a + 1; b < s.size(); ++b) EXPECT_GE(d[s[b][0]], 4);
    }
}
