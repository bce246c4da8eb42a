#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "spatial/bitparallel.hpp"
#include "spatial/io.hpp"
#include "spatial/parser.hpp"
#include "spatial/svg.hpp"

namespace fs = std::filesystem;
using namespace spatial;

namespace {

struct UsageError : Error {
    using Error::Error;
};

struct Globals {
    std::uint64_t seed = 1;
    bool json_out = false;
};

MediumPtr load_medium(const std::string& spec) {
    if (spec.empty()) throw UsageError("--medium is required");
    return std::make_shared<const Medium>(medium_from_spec(spec));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

CircuitDef named_circuit(const std::string& name) {
    if (name == "voronoi" || name == "vd") return vd_circuit();
    if (name == "growth") return growth_circuit();
    if (name == "meet") return meet_circuit();
    throw UsageError("unknown circuit '" + name + "' (voronoi, growth, meet)");
}

/// --expr defines the update of one layer; every other layer it reads is
/// kept as is.
CircuitDef expr_circuit(const std::string& src, const std::vector<std::string>& decls, const std::string& target,
                        const Medium& m) {
    LayerTypes types;
    for (const auto& d : decls) types.insert(parse_layer_decl(d));
    const Expr e = parse_expr(src, types);
    std::map<std::string, FieldType> used;
    collect_layers(e, used);
    const FieldType t = typecheck(e, m);
    CircuitDef cd;
    for (const auto& [k, ft] : used) cd.layers.push_back({k, ft});
    if (!used.contains(target)) cd.layers.push_back({target, t});
    cd.updates.push_back({target, e});
    return cd;
}

std::unique_ptr<Engine> make_engine(const std::string& name, const CircuitDef& cd, const MediumPtr& m) {
    if (name == "interp") return std::make_unique<InterpreterEngine>(cd);
    auto cc = std::make_shared<const CompiledCircuit>(compile(cd.updates, m));
    if (name == "gates") return std::make_unique<GateEngine>(cc);
    if (name == "bitpar") return std::make_unique<BitParallelEngine>(cc);
    throw UsageError("unknown engine '" + name + "' (interp, gates, bitpar)");
}

Seeds load_seeds(const std::string& path, int random_count, const Medium& m, std::uint64_t seed) {
    if (!path.empty()) return seeds_from_json(read_json_file(path));
    if (random_count > 0) return random_seeds(m, random_count, seed);
    throw UsageError("give --seeds FILE or --random N");
}

void emit(const Globals& g, const json& j, const std::string& text) {
    if (g.json_out)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

std::string seed_color(std::size_t i) {
    static const char* kPalette[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                     "#42d4f4", "#f032e6", "#bfef45", "#469990", "#9a6324"};
    return kPalette[i % std::size(kPalette)];
}

std::string cells_svg(const MediumPtr& m, const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& seeds) {
    const auto lab = blob_labels(*m, x);
    std::map<int, Field> per;
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
        if (lab[v] < 0) continue;
        auto [it, fresh] = per.try_emplace(lab[v], m, FieldType::boolean_on(Locus::V));
        it->second.set(v, 1);
    }
    RenderSpec rs{m, {}};
    std::size_t i = 0;
    for (auto& [k, f] : per) rs.layers.push_back({std::move(f), seed_color(i++)});
    Field s(m, FieldType::boolean_on(Locus::V));
    s.assign(seeds);
    rs.layers.push_back({std::move(s), "#000000"});
    return render_svg(rs);
}

int cmd_medium_gen(const Globals& g, const std::string& spec, const std::string& out) {
    const auto m = load_medium(spec);
    const json j = medium_to_json(*m);
    if (out.empty())
        std::cout << j.dump() << "\n";
    else
        write_text_file(out, j.dump() + "\n");
    if (g.json_out && !out.empty())
        std::cout << json{{"written", out}, {"vertices", m->num_vertices()}, {"hash", medium_hash(*m)}}.dump(2) << "\n";
    return 0;
}

int cmd_medium_validate(const Globals& g, const std::string& spec) {
    ValidationReport r;
    std::size_t nv = 0;
    try {
        const auto m = load_medium(spec);
        r = validate(*m);
        nv = m->num_vertices();
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        r.fail(e.what());
    }
    json hist = json::object();
    for (auto [d, c] : r.degree_histogram) hist[std::to_string(d)] = c;
    std::ostringstream t;
    t << (r.ok ? "ok" : "invalid") << ": " << nv << " vertices, euler " << r.euler << "\n";
    for (const auto& f : r.failures) t << "  " << f << "\n";
    emit(g, {{"ok", r.ok}, {"vertices", nv}, {"euler", r.euler}, {"failures", r.failures}, {"degrees", hist}}, t.str());
    return r.ok ? 0 : 1;
}

int cmd_compile(const Globals& g, const std::string& spec, const std::string& expr, const std::vector<std::string>& decls,
                const std::string& circuit, bool report, const std::string& netlist) {
    if (expr.empty() == circuit.empty()) throw UsageError("give exactly one of --expr and --circuit");
    const auto m = load_medium(spec);
    const CircuitDef cd = circuit.empty() ? expr_circuit(expr, decls, "out", *m) : named_circuit(circuit);
    cd.check(*m);
    const CompiledCircuit cc = compile(cd.updates, m);
    const json r = compile_report(cc, cd.updates);
    if (!netlist.empty()) write_text_file(netlist, netlist_json(cc).dump() + "\n");
    if (report || g.json_out) {
        std::cout << r.dump(2) << "\n";
    } else {
        std::cout << "gates/tile " << cc.stats.gates_per_tile << " (raw " << cc.stats.gates_per_tile_raw << "), radius "
                  << cc.stats.radius << ", transwires/tile " << cc.stats.transwires_per_tile << "\n";
    }
    return 0;
}

struct RunOpts {
    std::string medium, circuit, expr, target = "x", engine = "gates", out, seeds, trace;
    std::vector<std::string> decls, inits;
    int random = 0;
    double skip = 0;
    long max_steps = 10000;
};

int cmd_run(const Globals& g, const RunOpts& o) {
    if (o.expr.empty() == o.circuit.empty()) throw UsageError("give exactly one of --expr and --circuit");
    const auto m = load_medium(o.medium);
    const CircuitDef cd = o.circuit.empty() ? expr_circuit(o.expr, o.decls, o.target, *m) : named_circuit(o.circuit);
    cd.check(*m);
    Configuration c = initial_configuration(cd, m);
    if (!o.seeds.empty() || o.random > 0) {
        auto it = c.layers.find("x");
        if (it == c.layers.end() || !(it->second.type() == FieldType::boolean_on(Locus::V)))
            throw UsageError("seeds need a boolV layer named x");
        const Seeds s = load_seeds(o.seeds, o.random, *m, g.seed);
        check_seeds(*m, s);
        it->second.assign(seed_field(*m, s));
    }
    for (const auto& in : o.inits) {
        const auto eq = in.find('=');
        if (eq == std::string::npos) throw UsageError("--init expects layer=file");
        const std::string name = in.substr(0, eq);
        auto it = c.layers.find(name);
        if (it == c.layers.end()) throw UsageError("--init: no layer " + name);
        Field f = load_field(read_file(in.substr(eq + 1)), m);
        if (!(f.type() == it->second.type())) throw UsageError("--init: type mismatch for " + name);
        it->second = std::move(f);
    }
    auto eng = make_engine(o.engine, cd, m);
    StepObserver dump_step;
    if (!o.trace.empty()) {
        fs::create_directories(o.trace);
        dump_step = [&](const Configuration& cfg) {
            for (const auto& [k, f] : cfg.layers) {
                char name[96];
                std::snprintf(name, sizeof name, "%s_%04ld.spfd", k.c_str(), cfg.t);
                write_text_file((fs::path(o.trace) / name).string(), dump_field(f));
            }
        };
    }
    const RunResult r = run_until_fixpoint(*eng, std::move(c), o.max_steps, o.skip, g.seed, dump_step);
    json man = run_manifest(g.seed, o.skip, r, eng->name());
    if (!o.trace.empty()) man["trace"] = o.trace;
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        json files = json::object();
        for (const auto& [k, f] : r.config.layers) {
            write_text_file((fs::path(o.out) / (k + ".spfd")).string(), dump_field(f));
            files[k] = k + ".spfd";
        }
        man["fields"] = files;
        write_text_file((fs::path(o.out) / "manifest.json").string(), man.dump(2) + "\n");
    }
    emit(g, man,
         std::string(r.converged ? "converged" : "not converged") + " after " + std::to_string(r.steps) + " steps\n");
    return r.converged ? 0 : 1;
}

int cmd_voronoi(const Globals& g, const RunOpts& o, const std::string& trace, bool compare_oracle) {
    const auto m = load_medium(o.medium);
    const Seeds s = load_seeds(o.seeds, o.random, *m, g.seed);
    const CircuitDef cd = vd_circuit();
    auto eng = make_engine(o.engine, cd, m);
    const VoronoiRun run = run_vd(m, s, *eng, o.skip, g.seed, o.max_steps, !trace.empty());
    json j = {{"seed", g.seed},       {"skip_prob", o.skip},       {"t_c", run.t_c},
              {"converged", run.converged}, {"engine", eng->name()}, {"seeds", s}};
    std::size_t filled = 0, multi = 0;
    for (std::uint32_t v = 0; v < m->num_vertices(); ++v) {
        filled += run.final_x[v] != 0;
        multi += run.multi[v] != 0;
    }
    j["filled"] = filled;
    j["multi_vertices"] = multi;
    j["blob_counts"] = run.blob_counts;
    if (!trace.empty()) {
        fs::create_directories(trace);
        for (std::size_t t = 0; t < run.trace.size(); ++t) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%04zu.svg", t);
            write_text_file((fs::path(trace) / name).string(), cells_svg(m, run.trace[t], run.seeds));
            Field x(m, FieldType::boolean_on(Locus::V));
            x.assign(run.trace[t]);
            std::snprintf(name, sizeof name, "x_%04zu.spfd", t);
            write_text_file((fs::path(trace) / name).string(), dump_field(x));
        }
        j["frames"] = run.trace.size();
    }
    bool ok = run.converged;
    std::ostringstream t;
    t << (run.converged ? "converged" : "not converged") << " at t_c " << run.t_c << ", " << filled << " filled, "
      << multi << " multi\n";
    if (compare_oracle) {
        const VoronoiOracle orc = oracle_vd(*m, s);
        const DiffReport d = compare(*m, run, orc, s.size());
        j["oracle"] = {{"mismatches", d.mismatches},
                       {"vertices", d.vertices},
                       {"blobs_conserved", d.blobs_conserved},
                       {"multi_disjoint", d.multi_disjoint}};
        t << "oracle: " << d.mismatches << " mismatches, blobs " << (d.blobs_conserved ? "conserved" : "merged")
          << ", multi " << (d.multi_disjoint ? "disjoint" : "overlaps cells") << "\n";
        ok = ok && d.ok();
    }
    emit(g, j, t.str());
    return ok ? 0 : 1;
}

int cmd_render(const Globals&, const std::string& spec, const std::vector<std::string>& fields, const std::string& seeds,
               const std::string& out, bool transfer) {
    const auto m = load_medium(spec);
    RenderSpec rs{m, {}};
    rs.transfer_points = transfer;
    for (const auto& f : fields) {
        const auto at = f.rfind('@');
        const std::string path = at == std::string::npos ? f : f.substr(0, at);
        const std::string color = at == std::string::npos ? "#808080" : f.substr(at + 1);
        if (color.empty()) throw UsageError("empty color in " + f);
        for (char ch : color)
            if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '#') throw UsageError("bad color '" + color + "'");
        rs.layers.push_back({load_field(read_file(path), m), color});
    }
    if (!seeds.empty()) {
        Field s(m, FieldType::boolean_on(Locus::V));
        s.assign(seed_field(*m, seeds_from_json(read_json_file(seeds))));
        rs.layers.push_back({std::move(s), "#000000"});
    }
    const std::string svg = render_svg(rs);
    if (out.empty())
        std::cout << svg;
    else
        write_text_file(out, svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spatial types: compile and simulate cellular circuits on planar media"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "RNG seed for random seeds and skip masks");
    app.add_flag("--json", g.json_out, "Machine-readable JSON on stdout");

    std::string medium, out, expr, circuit, netlist, trace, seeds_file;
    std::vector<std::string> decls, fields;
    bool report = false, compare_oracle = false, transfer = true;
    RunOpts ro;

    auto* med = app.add_subcommand("medium", "Generate or validate a medium");
    med->require_subcommand(1);
    auto* gen = med->add_subcommand("gen", "Write a medium as JSON");
    gen->add_option("--medium", medium, "hex:CxR, iso:n[:seed[:relax]], or a JSON file")->required();
    gen->add_option("-o,--out", out, "Output file (default stdout)");
    auto* val = med->add_subcommand("validate", "Check combinatorial invariants");
    val->add_option("--medium", medium)->required();

    auto* comp = app.add_subcommand("compile", "Compile an expression or a named circuit");
    comp->add_option("--medium", medium)->required();
    comp->add_option("--expr", expr, "Prefix expression, e.g. and(rhombus(not(frontierE(x))), forallE(frontierV(x)))");
    comp->add_option("--layer", decls, "Layer declaration name:type, e.g. y:boolE");
    comp->add_option("--circuit", circuit, "voronoi, growth or meet");
    comp->add_flag("--report", report, "Print the JSON report");
    comp->add_option("--netlist", netlist, "Write the gate list as JSON");

    auto add_run_opts = [&](CLI::App* c) {
        c->add_option("--medium", ro.medium)->required();
        c->add_option("--seeds", ro.seeds, "JSON file {\"seeds\": [[v, ...], ...]}");
        c->add_option("--random", ro.random, "Number of random punctual seeds");
        c->add_option("--engine", ro.engine, "interp, gates or bitpar")->capture_default_str();
        c->add_option("--skip-prob", ro.skip, "Per-tile skip probability")->capture_default_str();
        c->add_option("--max-steps", ro.max_steps)->capture_default_str();
    };
    auto* run = app.add_subcommand("run", "Iterate a circuit to its fixpoint");
    add_run_opts(run);
    run->add_option("--circuit", ro.circuit, "voronoi, growth or meet");
    run->add_option("--expr", ro.expr, "Update expression");
    run->add_option("--layer", ro.decls, "Layer declaration name:type");
    run->add_option("--target", ro.target, "Layer updated by --expr")->capture_default_str();
    run->add_option("--init", ro.inits, "Initial layer value layer=file.spfd");
    run->add_option("-o,--out", ro.out, "Directory for final field dumps and manifest.json");
    run->add_option("--trace", ro.trace, "Directory for per-step field dumps layer_TTTT.spfd");

    auto* vor = app.add_subcommand("voronoi", "Compute a Voronoi diagram by blob growth");
    add_run_opts(vor);
    vor->add_option("--trace", trace, "Directory for per-step SVG frames and x dumps");
    vor->add_flag("--compare-oracle", compare_oracle, "Check against the BFS distance oracle; exit 1 on mismatch");

    auto* ren = app.add_subcommand("render", "Render field dumps as SVG");
    ren->add_option("--medium", medium)->required();
    ren->add_option("--field", fields, "file.spfd[@color]");
    ren->add_option("--seeds", seeds_file, "Seed file drawn in black");
    ren->add_flag("!--no-transfer", transfer, "Skip transfer-locus fields");
    ren->add_option("-o,--out", out, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen) return cmd_medium_gen(g, medium, out);
        if (*val) return cmd_medium_validate(g, medium);
        if (*comp) return cmd_compile(g, medium, expr, decls, circuit, report, netlist);
        if (*run) return cmd_run(g, ro);
        if (*vor) return cmd_voronoi(g, ro, trace, compare_oracle);
        if (*ren) return cmd_render(g, medium, fields, seeds_file, out, transfer);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
