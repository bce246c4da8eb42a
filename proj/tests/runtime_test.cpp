#include <gtest/gtest.h>

#include "spatial/bitparallel.hpp"
#include "spatial/voronoi.hpp"
#include "test_util.hpp"

using namespace spatial;
using namespace spatial::testing;

namespace {

Configuration x_config(const MediumPtr& m, const std::vector<std::uint32_t>& x) {
    return Configuration{m, {{"x", vfield(m, x)}}};
}

int eccentricity(const Medium& m, std::uint32_t s) {
    int e = 0;
    for (std::uint32_t v = 0; v < m.num_vertices(); ++v) e = std::max(e, torus_hex_distance(m, s, v));
    return e;
}

}  // namespace

TEST(Engines, InterpreterGatesAndBitParallelAgree) {
    const auto m = hex(64, 8);
    for (const CircuitDef& cd : {vd_circuit(), growth_circuit(2), meet_circuit()}) {
        auto cc = std::make_shared<const CompiledCircuit>(compile(cd.updates, m));
        InterpreterEngine in(cd);
        GateEngine g(cc);
        BitParallelEngine bp(cc);
        for (std::uint64_t s = 0; s < 4; ++s) {
            Configuration c = initial_configuration(cd, m);
            for (auto& [_, f] : c.layers) f = random_field(m, f.type(), 70 + s, 0.3);
            const auto a = in.evaluate(c), b = g.evaluate(c), d = bp.evaluate(c);
            EXPECT_EQ(a, b);
            EXPECT_EQ(a, d);
        }
    }
}

TEST(Engines, BitParallelNeeds64Columns) {
    auto cc = std::make_shared<const CompiledCircuit>(compile(vd_circuit().updates, hex(32, 8)));
    EXPECT_THROW(BitParallelEngine{cc}, Error);
    auto ci = std::make_shared<const CompiledCircuit>(compile(vd_circuit().updates, iso(80, 1)));
    EXPECT_THROW(BitParallelEngine{ci}, Error);
}

TEST(Runtime, GrowthConvergesInEccentricitySteps) {
    for (auto [c, r] : std::vector<std::pair<int, int>>{{9, 9}, {12, 7}, {16, 16}}) {
        const auto m = hex(c, r);
        for (int k : {1, 2, 3}) {
            InterpreterEngine eng(growth_circuit(k));
            std::vector<std::uint32_t> x(m->num_vertices(), 0);
            x[5] = 1;
            const RunResult res = run_until_fixpoint(eng, x_config(m, x), 100, 0, 1);
            ASSERT_TRUE(res.converged);
            const int ecc = eccentricity(*m, 5);
            EXPECT_EQ(res.t_c, (ecc + k - 1) / k) << c << "x" << r << " k=" << k;
            EXPECT_EQ(res.config.at("x").popcount(), m->num_vertices());
        }
    }
}

TEST(Runtime, SkippedTilesOnlyDelay) {
    const auto m = hex(12, 12);
    auto cc = std::make_shared<const CompiledCircuit>(compile(growth_circuit().updates, m));
    GateEngine eng(cc);
    std::vector<std::uint32_t> x(m->num_vertices(), 0);
    x[0] = 1;
    const RunResult sync = run_until_fixpoint(eng, x_config(m, x), 200, 0, 1);
    const RunResult a = run_until_fixpoint(eng, x_config(m, x), 200, 0.5, 9);
    const RunResult b = run_until_fixpoint(eng, x_config(m, x), 200, 0.5, 9);
    ASSERT_TRUE(a.converged);
    EXPECT_GE(a.t_c, sync.t_c);
    EXPECT_EQ(a.t_c, b.t_c);
    EXPECT_EQ(a.config.at("x"), sync.config.at("x"));
}

TEST(Runtime, RejectsBadRunParameters) {
    const auto m = hex(5, 5);
    InterpreterEngine eng(growth_circuit());
    const Configuration c = x_config(m, std::vector<std::uint32_t>(25, 0));
    EXPECT_THROW(run_until_fixpoint(eng, c, 0, 0, 1), Error);
    EXPECT_THROW(run_until_fixpoint(eng, c, 10, 1.0, 1), Error);
    EXPECT_THROW(run_until_fixpoint(eng, c, 10, -0.1, 1), Error);
}

TEST(Runtime, BorderVerticesStayEmpty) {
    const auto m = iso(150, 3);
    InterpreterEngine eng(growth_circuit());
    std::vector<std::uint32_t> x(m->num_vertices(), 0);
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v)
        if (!m->on_border[v]) {
            x[v] = 1;
            break;
        }
    const RunResult r = run_until_fixpoint(eng, x_config(m, x), 200, 0, 1);
    ASSERT_TRUE(r.converged);
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v) EXPECT_EQ(r.config.at("x").get(v), m->on_border[v] ? 0u : 1u);
}

TEST(Runtime, ObserverSeesEveryStep) {
    const auto m = hex(8, 8);
    InterpreterEngine eng(growth_circuit());
    std::vector<std::uint32_t> x(64, 0);
    x[0] = 1;
    std::vector<std::size_t> pops;
    const RunResult r =
        run_until_fixpoint(eng, x_config(m, x), 100, 0, 1, [&](const Configuration& c) { pops.push_back(c.at("x").popcount()); });
    ASSERT_EQ(pops.size(), static_cast<std::size_t>(r.t_c + 1));
    // Ball sizes of the hex metric: 1 + 3k(k+1) until the torus wraps.
    EXPECT_EQ(pops[0], 1u);
    EXPECT_EQ(pops[1], 7u);
    EXPECT_EQ(pops[2], 19u);
}

TEST(CircuitDef, CheckRejectsInconsistentDefinitions) {
    const auto m = hex(4, 4);
    const Expr x = layer("x", kBV);
    EXPECT_THROW((CircuitDef{{{"x", kBV}}, {{"y", x}}}.check(*m)), TypeError);
    EXPECT_THROW((CircuitDef{{{"x", kBV}}, {{"x", frontierE(x)}}}.check(*m)), TypeError);
    EXPECT_THROW((CircuitDef{{{"x", kBV}}, {{"x", x && layer("w", kBV)}}}.check(*m)), TypeError);
    EXPECT_THROW((CircuitDef{{{"x", kBE}}, {{"x", frontierE(x)}}}.check(*m)), TypeError);
    EXPECT_NO_THROW(vd_circuit().check(*m));
}
