// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "spatial/bitparallel.hpp"
#include "spatial/complexity.hpp"
#include "spatial/isotropic.hpp"
#include "spatial/voronoi.hpp"

using namespace spatial;

namespace {

const FieldType kBoolV = FieldType::boolean_on(Locus::V);

struct Outcome {
    bool pass = true;
    std::string detail;
};

MediumPtr hex(int c, int r) { return std::make_shared<const Medium>(build_hex_torus(c, r)); }
MediumPtr iso(int n, std::uint64_t seed) { return std::make_shared<const Medium>(build_isotropic(n, seed, 30)); }

double per_tile(const std::vector<Update>& u, const MediumPtr& m) { return compile(u, m).stats.gates_per_tile; }
double per_tile(const Expr& e, const MediumPtr& m) { return per_tile({{"out", e}}, m); }

// 1. Gate counts, fused model, hex torus.
Outcome gate_counts() {
    const auto m = hex(8, 8);
    const Expr x = layer("x", kBoolV);
    const Expr y = layer("y", FieldType::boolean_on(Locus::E));
    const Expr fe = frontierE(x);
    auto with_frontier = [&](const Expr& e) { return per_tile({{"f", fe}, {"out", e}}, m) - per_tile(fe, m); };
    const std::vector<std::tuple<std::string, double, double>> rows{
        {"reduceV", per_tile(exists(C::V, y), m), 5},
        {"reduceE", per_tile(exists(C::E, x), m), 3},
        {"reduceF", per_tile(exists(C::F, x), m), 4},
        {"frontierE", per_tile(frontierE(x), m), 3},
        {"insideE", per_tile(insideE(x), m), 3},
        {"outsideE", per_tile(outsideE(x), m), 4},
        {"insideF", per_tile(insideF(x), m), 4},
        {"insideV", per_tile(insideV(x), m), 8},
        {"outsideV", per_tile(outsideV(x), m), 9},
        {"neighborhoodV", per_tile(neighborhoodV(x), m), 8},
        {"closureV", per_tile(closureV(x, y), m), 4},
        {"rhombusAll", per_tile(rhombus(x), m), 7},
        {"meetV", per_tile(meetV(x), m), 20},
        {"divV", per_tile(divV(x), m), 21},
        {"mergeV", per_tile(mergeV(x), m), 22},
        {"meetE", with_frontier(meetE(x)), 18},
        {"divE", with_frontier(divE(x)), 18},
        {"mergeE", with_frontier(mergeE(x)), 19},
        {"merge bundle", per_tile({{"v", mergeV(x)}, {"e", mergeE(x)}}, m), 41},
        {"VD update", per_tile(vd_update(x), m), 55},
    };
    Outcome o;
    int bad = 0;
    std::ostringstream off;
    for (const auto& [name, got, want] : rows)
        if (got != want) {
            ++bad;
            off << " " << name << "=" << got << "(want " << want << ")";
        }
    const int thr = threshold_sum_ge4(6).gate_count();
    if (thr > 17) {
        ++bad;
        off << " threshold=" << thr << "(want <=17)";
    }
    o.pass = bad == 0;
    o.detail = std::to_string(rows.size() + 1 - bad) + "/" + std::to_string(rows.size() + 1) + " match, threshold network " +
               std::to_string(thr) + (bad ? ";" + off.str() : "");
    return o;
}

// 2. Radii.
Outcome radii() {
    const Expr x = layer("x", kBoolV);
    const std::vector<std::tuple<std::string, Expr, int>> rows{
        {"frontierE", frontierE(x), 1},  {"insideE", insideE(x), 1},     {"outsideE", outsideE(x), 1},
        {"insideF", insideF(x), 1},      {"insideV", insideV(x), 2},     {"outsideV", outsideV(x), 2},
        {"neighborhoodV", neighborhoodV(x), 2}, {"frontierV", frontierV(x), 2}, {"meetV", meetV(x), 2},
        {"divV", divV(x), 2},            {"mergeV", mergeV(x), 2},       {"nbcc", nbcc(x), 2},
        {"meetE", meetE(x), 3},          {"VD update", vd_update(x), 4},
    };
    int bad = 0, n = 0;
    std::ostringstream off;
    auto check = [&](const std::string& name, int got, int want) {
        ++n;
        if (got != want) {
            ++bad;
            off << " " << name << "=" << got << "(want " << want << ")";
        }
    };
    for (const auto& [name, e, want] : rows) check(name, radius_of(e), want);
    for (int k = 1; k <= 8; ++k) check("neighborhood^" + std::to_string(k), radius_of(growth_update(x, k)), 2 * k);
    // The compiled circuit must report the same radius.
    check("compiled VD", compile(vd_update(x), hex(8, 8)).stats.radius, 4);
    return {bad == 0, std::to_string(n - bad) + "/" + std::to_string(n) + " radii exact" + off.str()};
}

// 3. Algebraic laws, checked pointwise on random fields.
Outcome laws() {
    struct Law {
        std::string name;
        std::function<bool(const MediumPtr&, std::uint64_t)> holds;
    };
    // On bordered media phantom ring slots drop values, so points whose
    // father simplex touches the border are not compared.
    auto eq = [](const Expr& a, const Expr& b, const Configuration& c) {
        const Field fa = interpret(a, c), fb = interpret(b, c);
        const Medium& m = *c.medium;
        const Locus l = fa.type().locus;
        const SimplexClass fc = father_class(l);
        for (std::size_t p = 0; p < fa.size(); ++p) {
            const std::uint32_t f = is_simplicial(l) ? static_cast<std::uint32_t>(p) : m.table(l).father[p];
            bool inner = true;
            for (auto v : m.vertices_of({fc, f})) inner = inner && !m.on_border[v];
            if (inner && fa.get(p) != fb.get(p)) return false;
        }
        return true;
    };
    auto cfg = [](const MediumPtr& m, std::uint64_t s, Locus l) {
        Configuration c{m, {}};
        c.layers.emplace("y", random_field(m, FieldType::boolean_on(l), s, 0.5));
        c.layers.emplace("x", random_field(m, kBoolV, s ^ 0x9e3779b97f4a7c15ull, 0.15 + 0.7 * double(s % 7) / 7));
        c.layers.emplace("n", random_field(m, FieldType::integer_on(l, 3), s * 3 + 1, 0.5));
        return c;
    };
    const Locus transfer_loci[] = {Locus::vE, Locus::vF, Locus::eV, Locus::eF, Locus::fV, Locus::fE};
    std::vector<Law> laws{
        {"transfer involution",
         [&](const MediumPtr& m, std::uint64_t s) {
             const Locus l = transfer_loci[s % 6];
             const Expr y = layer("y", FieldType::boolean_on(l));
             return eq(transfer(transfer(y)), y, cfg(m, s, l));
         }},
        {"rotation inverse",
         [&](const MediumPtr& m, std::uint64_t s) {
             const Locus l = transfer_loci[s % 6];
             const Expr y = layer("y", FieldType::boolean_on(l));
             const auto c = cfg(m, s, l);
             return eq(rotate_cw(rotate_ccw(y)), y, c) && eq(rotate_ccw(rotate_cw(y)), y, c);
         }},
        {"symmetry involution",
         [&](const MediumPtr& m, std::uint64_t s) {
             // Vertex loci have a central symmetry only on the hexagonal lattice.
             std::vector<Locus> ls{Locus::vF, Locus::eF, Locus::vE, Locus::fE};
             if (m->is_hex()) ls.insert(ls.end(), {Locus::eV, Locus::fV});
             const Locus l = ls[s % ls.size()];
             const Expr y = layer("y", FieldType::boolean_on(l));
             return eq(symmetry(symmetry(y)), y, cfg(m, s, l));
         }},
        {"apex involution",
         [&](const MediumPtr& m, std::uint64_t s) {
             const Locus l = s % 2 ? Locus::fE : Locus::fV;
             const Expr y = layer("y", FieldType::boolean_on(l));
             return eq(apex(apex(y)), y, cfg(m, s, l));
         }},
        {"reduction slot invariance",
         [&](const MediumPtr& m, std::uint64_t s) {
             const Locus l = transfer_loci[s % 6];
             const auto c = cfg(m, s, l);
             const Expr y = layer("y", FieldType::boolean_on(l));
             const Expr n = layer("n", FieldType::integer_on(l, 3));
             for (ReduceOp r : {ReduceOp::And, ReduceOp::Or, ReduceOp::Xor})
                 if (!eq(reduce(r, rotate_cw(y)), reduce(r, y), c)) return false;
             for (ReduceOp r : {ReduceOp::Min, ReduceOp::Max, ReduceOp::Plus})
                 if (!eq(reduce(r, rotate_ccw(n)), reduce(r, n), c)) return false;
             return true;
         }},
        {"frontierV(not x) = frontierV(x)",
         [&](const MediumPtr& m, std::uint64_t s) {
             const Expr x = layer("x", kBoolV);
             return eq(frontierV(!x), frontierV(x), cfg(m, s, Locus::vE));
         }},
        {"div/merge duality",
         [&](const MediumPtr& m, std::uint64_t s) {
             const Expr x = layer("x", kBoolV);
             const auto c = cfg(m, s, Locus::vE);
             return eq(divV(x), mergeV(!x), c) && eq(divE(x), mergeE(!x), c);
         }},
    };
    const int kCases = 500;
    const MediumPtr media[] = {hex(8, 8), iso(200, 11)};
    int failures = 0;
    std::ostringstream off;
    for (const auto& law : laws)
        for (const auto& m : media)
            for (int i = 0; i < kCases; ++i)
                if (!law.holds(m, static_cast<std::uint64_t>(i) * 7919 + 17)) {
                    ++failures;
                    off << " " << law.name << (m->is_hex() ? "@hex" : "@iso") << "#" << i;
                    break;
                }
    return {failures == 0, std::to_string(laws.size()) + " laws x " + std::to_string(kCases) +
                               " cases on hex 8x8 and iso n=200" + (failures ? ";" + off.str() : ", all hold")};
}

// 4. Interpreter, gate-level and bit-parallel engines agree bit for bit.
Outcome engines() {
    const std::vector<std::pair<std::string, CircuitDef>> circuits{
        {"growth", growth_circuit()}, {"meet", meet_circuit()}, {"vd", vd_circuit()}};
    int trials = 0, bad = 0;
    std::ostringstream off;
    for (const auto& m : {hex(16, 16), hex(64, 64)}) {
        const bool wide = m->cols == 64;
        for (const auto& [name, cd] : circuits) {
            auto cc = std::make_shared<const CompiledCircuit>(compile(cd.updates, m));
            InterpreterEngine ie(cd);
            GateEngine ge(cc);
            std::unique_ptr<BitParallelEngine> be;
            if (wide) be = std::make_unique<BitParallelEngine>(cc);
            for (int t = 0; t < 20; ++t) {
                const std::uint64_t s = 1000 * trials + 7;
                Configuration c = initial_configuration(cd, m);
                for (auto& [k, f] : c.layers) f = random_field(m, f.type(), s + k.size(), 0.02 + 0.05 * (t % 10));
                // Three synchronous steps so reachable states are covered too.
                Configuration a = c, b = c, d = c;
                bool same = true;
                for (int step = 0; step < 3 && same; ++step) {
                    auto na = ie.evaluate(a), nb = ge.evaluate(b);
                    same = na == nb;
                    if (be) {
                        auto nd = be->evaluate(d);
                        same = same && na == nd;
                        for (auto& [k, f] : nd) d.layers.at(k) = f;
                    }
                    for (auto& [k, f] : na) a.layers.at(k) = f;
                    for (auto& [k, f] : nb) b.layers.at(k) = f;
                }
                ++trials;
                if (!same) {
                    ++bad;
                    off << " " << name << "@" << m->cols << "#" << t;
                }
            }
        }
    }
    return {bad == 0 && trials >= 100, std::to_string(trials) + " trials (growth, meet, vd) x 3 steps on hex 16x16 (interp, gates) and 64x64 (interp, gates, bit-parallel); " +
                                           std::to_string(bad) + " disagreements" + off.str()};
}

// 5. Voronoi exactness against the BFS oracle.
Outcome voronoi_exactness() {
    const auto cd = vd_circuit();
    int runs = 0, exact = 0;
    long under = 0, over = 0;
    bool blobs = true, multi = true;
    auto one = [&](const MediumPtr& m, const Seeds& s) {
        InterpreterEngine eng(cd);
        const VoronoiRun run = run_vd(m, s, eng, 0, 1, 1000);
        const VoronoiOracle o = oracle_vd(*m, s);
        const DiffReport d = compare(*m, run, o, s.size());
        ++runs;
        exact += d.mismatches == 0 && run.converged;
        for (auto v : d.vertices) (run.final_x[v] ? over : under) += 1;
        blobs = blobs && d.blobs_conserved;
        multi = multi && d.multi_disjoint;
    };
    int hex_runs = 0;
    for (int t = 0; t < 50; ++t) {
        const auto m = hex(8 + (t * 7) % 17, 8 + (t * 5) % 17);
        one(m, random_seeds(*m, 2 + t % 4, 100 + t, 3));
        ++hex_runs;
    }
    const int hex_exact = exact;
    for (int t = 0; t < 10; ++t) {
        const auto m = iso(200, 10 + t);
        one(m, random_seeds(*m, 3 + t % 4, 200 + t, 3));
    }
    // Circle of seeds around the centre of a 24x24 torus.
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
    InterpreterEngine eng(cd);
    const VoronoiRun run = run_vd(m, ring, eng, 0, 1, 1000);
    const VoronoiOracle o = oracle_vd(*m, ring);
    const std::uint32_t centre = hex_index(C, C, cq, cr);
    std::set<int> eq_blobs;
    for (int st : o.nearest_sites[centre]) eq_blobs.insert(o.site_blob[st]);
    const bool circle = run.multi[centre] && eq_blobs.size() >= 3;

    std::ostringstream d;
    d << exact << "/" << runs << " runs exact (hex " << hex_exact << "/" << hex_runs << ", iso " << exact - hex_exact << "/"
      << runs - hex_runs << "); " << under << " vertices under-filled, " << over << " over-filled; blobs "
      << (blobs ? "conserved" : "MERGED") << "; multi " << (multi ? "disjoint" : "OVERLAPS") << "; circle fixture "
      << (circle ? "ok" : "FAILED") << " (" << ring.size() << " seeds, centre equidistant to " << eq_blobs.size() << ")";
    return {exact == runs && blobs && multi && circle, d.str()};
}

int hex_diameter(const Medium& m) {
    // Vertex-transitive: one BFS gives the eccentricity of every vertex.
    const auto d = vertex_bfs(m, {0});
    return *std::max_element(d.begin(), d.end());
}

// 6. Convergence time for two antipodal seeds.
Outcome convergence_time() {
    const auto cd = vd_circuit();
    int bad = 0;
    std::ostringstream d;
    for (int n : {8, 10, 12, 16, 20, 24}) {
        const auto m = hex(n, n);
        const Seeds s{{hex_index(n, n, 0, 0)}, {hex_index(n, n, n / 2, n / 2)}};
        InterpreterEngine eng(cd);
        const VoronoiRun run = run_vd(m, s, eng, 0, 1, 1000);
        const int D = hex_diameter(*m);
        const int want = (D + 1) / 2;
        const bool ok = run.converged && std::abs(run.t_c - want) <= 1;
        bad += !ok;
        d << " n=" << n << ":t_c=" << run.t_c << ",D=" << D << (ok ? "" : "*");
    }
    return {bad == 0, "t_c vs ceil(D/2)+-1;" + d.str()};
}

// 7. Asynchronous updates still separate the blobs and converge.
Outcome asynchrony() {
    const auto cd = vd_circuit();
    int runs = 0, bad = 0;
    double worst = 0;
    for (int t = 0; t < 8; ++t) {
        const auto m = hex(12 + 2 * t, 12 + 2 * t);
        const Seeds s = random_seeds(*m, 3 + t % 3, 300 + t, 3);
        InterpreterEngine eng(cd);
        const long sync_tc = run_vd(m, s, eng, 0, 1, 1000).t_c;
        for (double p : {0.05, 0.2})
            for (std::uint64_t rs = 1; rs <= 3; ++rs) {
                const VoronoiRun run = run_vd(m, s, eng, p, rs, 4 * sync_tc + 1);
                bool blobs = true;
                for (int c : run.blob_counts) blobs = blobs && c == static_cast<int>(s.size());
                ++runs;
                const bool ok = run.converged && run.t_c <= 4 * sync_tc && blobs;
                bad += !ok;
                worst = std::max(worst, double(run.t_c) / std::max(1L, sync_tc));
            }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d async runs (skip 0.05, 0.2) converge within 4x sync t_c with blobs conserved; worst ratio %.2f",
                  runs - bad, runs, worst);
    return {bad == 0, buf};
}

// 8. Circuit work O(r) against per-point re-expansion O(r^3).
Outcome complexity() {
    const auto m = hex(32, 32);
    std::vector<double> r, a, b;
    for (int k : {1, 2, 4, 8, 12}) {
        const auto s = neighborhood_work(m, k, hex_index(32, 32, 16, 16));
        r.push_back(s.r);
        a.push_back(s.circuit);
        b.push_back(s.reexpansion);
    }
    const double sa = loglog_slope(r, a), sb = loglog_slope(r, b);
    char buf[200];
    std::snprintf(buf, sizeof buf, "r in {2,4,8,16,24}: circuit slope %.3f (want 1+-0.3), re-expansion slope %.3f (want 3+-0.3)", sa,
                  sb);
    return {std::abs(sa - 1) <= 0.3 && std::abs(sb - 3) <= 0.3, buf};
}

// 9. Isotropic media: degrees and agreement with Euclidean Voronoi.
Outcome isotropic_quality() {
    long inner = 0, good_deg = 0, assessed = 0, agree = 0;
    const auto cd = vd_circuit();
    for (int t = 0; t < 10; ++t) {
        const auto m = iso(200, 40 + t);
        for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
            if (m->on_border[v]) continue;
            ++inner;
            const int dg = static_cast<int>(m->degree(v));
            good_deg += dg >= 5 && dg <= 7;
        }
        // Seeds at the vertices nearest to uniform random points.
        std::mt19937_64 rng(500 + t);
        std::uniform_real_distribution<double> u(0.15, 0.85);
        Seeds s;
        std::vector<Point> sites;
        while (s.size() < 4 + static_cast<std::size_t>(t % 3)) {
            const Point p{u(rng), u(rng)};
            std::uint32_t best = 0;
            double bd = 1e300;
            for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
                const double dd = std::hypot(m->points[v].x - p.x, m->points[v].y - p.y);
                if (dd < bd) bd = dd, best = v;
            }
            const auto dist = vertex_bfs(*m, {best});
            bool far = !m->on_border[best];
            for (const auto& o : s) far = far && dist[o[0]] >= 3;
            if (!far) continue;
            s.push_back({best});
            sites.push_back(m->points[best]);
        }
        InterpreterEngine eng(cd);
        const VoronoiRun run = run_vd(m, s, eng, 0, 1, 1000);
        for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
            if (m->on_border[v]) continue;
            std::size_t nearest = 0;
            for (std::size_t k = 1; k < sites.size(); ++k)
                if (std::hypot(m->points[v].x - sites[k].x, m->points[v].y - sites[k].y) <
                    std::hypot(m->points[v].x - sites[nearest].x, m->points[v].y - sites[nearest].y))
                    nearest = k;
            ++assessed;
            if (run.cell[v] >= 0) {
                agree += run.cell[v] == static_cast<int>(nearest);
            } else {
                // A Voronoi vertex agrees when it borders the Euclidean cell.
                for (auto w : m->neighbors(v))
                    if (run.cell[w] == static_cast<int>(nearest)) {
                        ++agree;
                        break;
                    }
            }
        }
    }
    const double fd = double(good_deg) / inner, fa = double(agree) / assessed;
    char buf[200];
    std::snprintf(buf, sizeof buf, "10 media n=200: degree in {5,6,7} for %.1f%% of interior vertices; Euclidean agreement %.1f%% (both want >= 90%%)",
                  100 * fd, 100 * fa);
    return {fd >= 0.9 && fa >= 0.9, buf};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"gate counts", gate_counts},          {"radii", radii},
        {"algebraic laws", laws},              {"engine equivalence", engines},
        {"voronoi exactness", voronoi_exactness}, {"convergence time", convergence_time},
        {"asynchrony", asynchrony},            {"complexity", complexity},
        {"isotropic quality", isotropic_quality}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("[%s] %zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
