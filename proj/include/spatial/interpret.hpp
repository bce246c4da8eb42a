#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "expr.hpp"

namespace spatial {

using Values = std::vector<std::uint32_t>;

/// Named layers over one medium, plus the step counter.
struct Configuration {
    MediumPtr medium;
    std::map<std::string, Field> layers;
    long t = 0;

    const Field& at(const std::string& name) const {
        auto it = layers.find(name);
        if (it == layers.end()) throw Error("unknown layer " + name);
        return it->second;
    }
    friend bool operator==(const Configuration& a, const Configuration& b) { return a.layers == b.layers; }
};

inline std::uint32_t reduce_neutral(ReduceOp r, int width) {
    switch (r) {
        case ReduceOp::And: return 1;
        case ReduceOp::Min: return (1u << width) - 1;
        default: return 0;
    }
}

inline std::uint32_t reduce_apply(ReduceOp r, std::uint32_t a, std::uint32_t b) {
    switch (r) {
        case ReduceOp::And: return a & b;
        case ReduceOp::Or: return a | b;
        case ReduceOp::Xor: return a ^ b;
        case ReduceOp::Min: return std::min(a, b);
        case ReduceOp::Max: return std::max(a, b);
        case ReduceOp::Plus: return a + b;
    }
    return 0;
}

/// Reference evaluator over explicit data-point arrays.
class Interpreter {
  public:
    Interpreter(const Medium& m, const std::map<std::string, Values>& env) : m_(m), env_(env) {}

    Values eval(const Expr& e) {
        typecheck(e, m_, types_);
        return run(e);
    }

    const TypeMap& types() const { return types_; }

  private:
    const Values& run(const Expr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        Values out = compute(e);
        return memo_.emplace(e.get(), std::move(out)).first->second;
    }

    Values compute(const Expr& e) {
        const FieldType t = types_.at(e);
        const std::size_t n = m_.num_points(t.locus);
        const std::uint32_t mask = t.max_value();
        Values out(n, 0);
        switch (e->op) {
            case Op::Layer: {
                auto it = env_.find(e->name);
                if (it == env_.end()) throw Error("unbound layer " + e->name);
                if (it->second.size() != n) throw Error("layer " + e->name + " has the wrong size");
                return it->second;
            }
            case Op::Const: std::fill(out.begin(), out.end(), e->value); return out;
            case Op::Broadcast: {
                const Values& in = run(e->kids[0]);
                const auto& tab = m_.table(t.locus);
                for (std::size_t p = 0; p < n; ++p) out[p] = in[tab.father[p]];
                return out;
            }
            case Op::Transfer: {
                const Values& in = run(e->kids[0]);
                const auto& tab = m_.table(t.locus);
                for (std::size_t p = 0; p < n; ++p) out[p] = in[tab.partner[p]];
                return out;
            }
            case Op::RotCW:
            case Op::RotCCW:
            case Op::Sym: {
                const Values& in = run(e->kids[0]);
                const auto& tab = m_.table(t.locus);
                const auto& src = e->op == Op::RotCW ? tab.rot_cw_src : (e->op == Op::RotCCW ? tab.rot_ccw_src : tab.sym_src);
                for (std::size_t p = 0; p < n; ++p) out[p] = src[p] < 0 ? 0 : in[src[p]];
                return out;
            }
            case Op::Reduce: {
                const Values& in = run(e->kids[0]);
                const auto& tab = m_.table(e->kids[0]->locus);
                const int w = types_.at(e->kids[0]).width;
                for (std::size_t f = 0; f < n; ++f) {
                    std::uint32_t acc = reduce_neutral(e->rop, w);
                    for (std::uint32_t q = tab.offset[f]; q < tab.offset[f + 1]; ++q) acc = reduce_apply(e->rop, acc, in[q]);
                    out[f] = acc & mask;
                }
                return out;
            }
            case Op::Not: {
                const Values& a = run(e->kids[0]);
                for (std::size_t p = 0; p < n; ++p) out[p] = a[p] ^ 1u;
                return out;
            }
            case Op::Shr: {
                const Values& a = run(e->kids[0]);
                for (std::size_t p = 0; p < n; ++p) out[p] = a[p] >> e->value;
                return out;
            }
            default: break;
        }
        const Values& a = run(e->kids[0]);
        const Values& b = run(e->kids[1]);
        for (std::size_t p = 0; p < n; ++p) {
            const std::uint32_t x = a[p], y = b[p];
            std::uint32_t r = 0;
            switch (e->op) {
                case Op::And: r = x & y; break;
                case Op::Or: r = x | y; break;
                case Op::Xor: r = x ^ y; break;
                case Op::Add: r = (x + y) & mask; break;
                case Op::Min: r = std::min(x, y); break;
                case Op::Max: r = std::max(x, y); break;
                case Op::Eq: r = x == y; break;
                case Op::Ne: r = x != y; break;
                case Op::Lt: r = x < y; break;
                case Op::Le: r = x <= y; break;
                case Op::Gt: r = x > y; break;
                case Op::Ge: r = x >= y; break;
                default: throw Error("interpret: unexpected operator");
            }
            out[p] = r;
        }
        return out;
    }

    const Medium& m_;
    const std::map<std::string, Values>& env_;
    TypeMap types_;
    std::unordered_map<const Node*, Values> memo_;
};

inline std::map<std::string, Values> unpack(const Configuration& c) {
    std::map<std::string, Values> env;
    for (const auto& [k, f] : c.layers) env[k] = f.values();
    return env;
}

/// Evaluates an expression against a configuration.
inline Field interpret(const Expr& e, const Configuration& c) {
    const auto env = unpack(c);
    Interpreter in(*c.medium, env);
    const Values v = in.eval(e);
    Field f(c.medium, in.types().at(e));
    f.assign(v);
    return f;
}

}  // namespace spatial
