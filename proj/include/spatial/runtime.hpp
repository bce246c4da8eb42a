#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "compiler.hpp"
#include "interpret.hpp"

namespace spatial {

struct LayerDef {
    std::string name;
    FieldType type;
};

/// Layers and their update functions; a layer without update keeps its value.
struct CircuitDef {
    std::vector<LayerDef> layers;
    std::vector<Update> updates;

    void check(const Medium& m) const {
        std::map<std::string, FieldType> declared;
        for (const auto& l : layers) declared[l.name] = l.type;
        for (const auto& u : updates) {
            auto it = declared.find(u.layer);
            if (it == declared.end()) throw TypeError("update for undeclared layer " + u.layer);
            std::map<std::string, FieldType> used;
            collect_layers(u.expr, used);
            for (const auto& [k, t] : used) {
                auto d = declared.find(k);
                if (d == declared.end()) throw TypeError("free variable " + k + " is not a layer");
                if (!(d->second == t)) throw TypeError("layer " + k + " read with type " + type_name(t));
            }
            const FieldType t = typecheck(u.expr, m);
            if (!(t == it->second))
                throw TypeError("update of " + u.layer + " has type " + type_name(t) + ", layer is " + type_name(it->second));
        }
    }
};

inline Configuration initial_configuration(const CircuitDef& cd, MediumPtr m) {
    Configuration c;
    c.medium = m;
    for (const auto& l : cd.layers) c.layers.emplace(l.name, Field(m, l.type));
    return c;
}

/// Evaluates the update functions: the combinational part of one step.
class Engine {
  public:
    virtual ~Engine() = default;
    virtual std::map<std::string, Field> evaluate(const Configuration& c) = 0;
    virtual std::string name() const = 0;
};

class InterpreterEngine : public Engine {
  public:
    explicit InterpreterEngine(CircuitDef cd) : cd_(std::move(cd)) {}
    std::map<std::string, Field> evaluate(const Configuration& c) override {
        const auto env = unpack(c);
        Interpreter in(*c.medium, env);
        std::map<std::string, Field> out;
        for (const auto& u : cd_.updates) {
            const Values v = in.eval(u.expr);
            Field f(c.medium, in.types().at(u.expr));
            f.assign(v);
            out.emplace(u.layer, std::move(f));
        }
        return out;
    }
    std::string name() const override { return "interpreter"; }

  private:
    CircuitDef cd_;
};

/// Net-by-net simulation of the compiled netlist.
class GateEngine : public Engine {
  public:
    explicit GateEngine(std::shared_ptr<const CompiledCircuit> cc) : cc_(std::move(cc)) {}
    std::map<std::string, Field> evaluate(const Configuration& c) override {
        const auto& g = cc_->gates;
        std::vector<std::uint8_t> v(g.size(), 0);
        std::vector<const Field*> in;
        for (const auto& p : cc_->inputs) in.push_back(&c.at(p.name));
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Gate& x = g[i];
            switch (x.op) {
                case GateOp::Const0: v[i] = 0; break;
                case GateOp::Const1: v[i] = 1; break;
                case GateOp::Input: {
                    const Field& f = *in[x.a];
                    const int w = f.type().width;
                    v[i] = (f.get(x.b / w) >> (x.b % w)) & 1u;
                    break;
                }
                case GateOp::Not: v[i] = !v[x.a]; break;
                case GateOp::And: v[i] = v[x.a] & v[x.b]; break;
                case GateOp::Or: v[i] = v[x.a] | v[x.b]; break;
                case GateOp::Xor: v[i] = v[x.a] ^ v[x.b]; break;
            }
        }
        std::map<std::string, Field> out;
        for (const auto& o : cc_->outputs) {
            Field f(c.medium, o.type);
            const int w = o.type.width;
            for (std::size_t p = 0; p < f.size(); ++p) {
                std::uint32_t val = 0;
                for (int b = 0; b < w; ++b) val |= static_cast<std::uint32_t>(v[o.nets[p * w + b]]) << b;
                f.set(p, val);
            }
            out.emplace(o.name, std::move(f));
        }
        return out;
    }
    std::string name() const override { return "gates"; }

  private:
    std::shared_ptr<const CompiledCircuit> cc_;
};

/// Per-tile skip decisions for one step; empty means update everything.
using SkipMask = std::vector<std::uint8_t>;

inline SkipMask draw_skip_mask(const Medium& m, double skip_prob, std::mt19937_64& rng) {
    if (skip_prob <= 0) return {};
    std::bernoulli_distribution skip(skip_prob);
    SkipMask mask(m.num_vertices());
    for (auto& s : mask) s = skip(rng);
    return mask;
}

/// Register write: skipped tiles keep their old bits, border vertices stay 0.
inline void commit(Configuration& c, std::map<std::string, Field> next, const SkipMask& mask) {
    const Medium& m = *c.medium;
    for (auto& [name, f] : next) {
        Field& old = c.layers.at(name);
        const FieldType t = f.type();
        const auto& tab = m.table(t.locus);
        const auto& owner = m.owner[static_cast<int>(father_class(t.locus))];
        for (std::size_t p = 0; p < f.size(); ++p) {
            const std::uint32_t fa = tab.father[p];
            if (!mask.empty() && mask[owner[fa]]) f.set(p, old.get(p));
            if (t.locus == Locus::V && !m.on_border.empty() && m.on_border[fa]) f.set(p, 0);
        }
        old = std::move(f);
    }
    ++c.t;
}

/// Clears V-layer bits on border vertices.
inline void pin_border(Configuration& c) {
    const Medium& m = *c.medium;
    for (auto& [_, f] : c.layers) {
        if (f.type().locus != Locus::V) continue;
        for (std::uint32_t v = 0; v < m.num_vertices(); ++v)
            if (m.on_border[v]) f.set(v, 0);
    }
}

inline void step(Engine& eng, Configuration& c, double skip_prob, std::mt19937_64& rng) {
    auto next = eng.evaluate(c);
    commit(c, std::move(next), draw_skip_mask(*c.medium, skip_prob, rng));
}

struct RunResult {
    Configuration config;
    long t_c = 0;
    bool converged = false;
    long steps = 0;
};

using StepObserver = std::function<void(const Configuration&)>;

/// Iterates until f(x) = x. Skipped tiles never mask a fixpoint because the
/// test uses the unmasked update.
inline RunResult run_until_fixpoint(Engine& eng, Configuration c, long max_steps, double skip_prob,
                                    std::uint64_t seed, const StepObserver& observe = {}) {
    if (max_steps < 1) throw Error("max_steps must be >= 1");
    if (skip_prob < 0 || skip_prob >= 1) throw Error("skip_prob must be in [0,1)");
    std::mt19937_64 rng(seed);
    pin_border(c);
    RunResult r;
    if (observe) observe(c);
    for (long s = 0; s < max_steps; ++s) {
        auto next = eng.evaluate(c);
        bool same = true;
        for (const auto& [k, f] : next) {
            Field pinned = f;
            if (f.type().locus == Locus::V)
                for (std::uint32_t v = 0; v < c.medium->num_vertices(); ++v)
                    if (c.medium->on_border[v]) pinned.set(v, 0);
            if (!(pinned == c.at(k))) {
                same = false;
                break;
            }
        }
        if (same) {
            r.converged = true;
            break;
        }
        commit(c, std::move(next), draw_skip_mask(*c.medium, skip_prob, rng));
        ++r.steps;
        if (observe) observe(c);
    }
    r.t_c = r.steps;
    r.config = std::move(c);
    return r;
}

}  // namespace spatial
