#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "expr.hpp"
#include "interpret.hpp"
#include "radius.hpp"

namespace spatial {

enum class GateOp : std::uint8_t { Const0, Const1, Input, Not, And, Or, Xor };

inline std::string_view gate_name(GateOp g) {
    switch (g) {
        case GateOp::Const0: return "const0";
        case GateOp::Const1: return "const1";
        case GateOp::Input: return "input";
        case GateOp::Not: return "not";
        case GateOp::And: return "and";
        case GateOp::Or: return "or";
        case GateOp::Xor: return "xor";
    }
    return "?";
}

/// One net and the gate driving it. Input gates carry (layer, point*width+bit)
/// in (a, b).
struct Gate {
    GateOp op = GateOp::Const0;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t tile = 0;
    Locus locus = Locus::V;
    bool reduction = false;

    bool is_logic() const { return op == GateOp::Not || op == GateOp::And || op == GateOp::Or || op == GateOp::Xor; }
};

struct LayerPort {
    std::string name;
    FieldType type;
    std::vector<std::uint32_t> nets;  // point * width + bit
};

struct CircuitStats {
    std::size_t gates_raw = 0;
    std::size_t gates_fused = 0;
    std::size_t transwires = 0;
    double gates_per_tile = 0;  // fused
    double gates_per_tile_raw = 0;
    double transwires_per_tile = 0;
    std::size_t max_tile_gates = 0;
    int radius = 0;
};

struct CompiledCircuit {
    MediumPtr medium;
    std::vector<Gate> gates;
    std::vector<LayerPort> inputs;
    std::vector<LayerPort> outputs;
    std::vector<std::uint8_t> fused;  // NOT gates absorbed as inverted inputs
    CircuitStats stats;
};

/// Netlist construction with constant folding and structural hashing.
class NetBuilder {
  public:
    static constexpr std::uint32_t kZero = 0;
    static constexpr std::uint32_t kOne = 1;

    explicit NetBuilder(std::vector<Gate>& gates) : g_(gates) {
        if (g_.empty()) {
            g_.push_back({GateOp::Const0});
            g_.push_back({GateOp::Const1});
        }
    }

    std::uint32_t tile = 0;
    Locus locus = Locus::V;
    bool reduction = false;

    std::uint32_t input(std::uint32_t layer, std::uint32_t slot) {
        return emit({GateOp::Input, layer, slot, tile, locus, false});
    }

    std::uint32_t lnot(std::uint32_t a) {
        if (a == kZero) return kOne;
        if (a == kOne) return kZero;
        if (g_[a].op == GateOp::Not) return g_[a].a;
        return emit({GateOp::Not, a, 0, tile, locus, reduction});
    }
    std::uint32_t land(std::uint32_t a, std::uint32_t b) {
        if (a == kZero || b == kZero) return kZero;
        if (a == kOne) return b;
        if (b == kOne) return a;
        if (a == b) return a;
        return emit2(GateOp::And, a, b);
    }
    std::uint32_t lor(std::uint32_t a, std::uint32_t b) {
        if (a == kOne || b == kOne) return kOne;
        if (a == kZero) return b;
        if (b == kZero) return a;
        if (a == b) return a;
        return emit2(GateOp::Or, a, b);
    }
    std::uint32_t lxor(std::uint32_t a, std::uint32_t b) {
        if (a == kZero) return b;
        if (b == kZero) return a;
        if (a == kOne) return lnot(b);
        if (b == kOne) return lnot(a);
        if (a == b) return kZero;
        return emit2(GateOp::Xor, a, b);
    }
    std::uint32_t mux(std::uint32_t sel, std::uint32_t a, std::uint32_t b) {
        return lor(land(sel, a), land(lnot(sel), b));
    }

    using Bits = std::vector<std::uint32_t>;  // least significant first

    /// a >= b, specialised when b bits are constants.
    std::uint32_t ge(const Bits& a, const Bits& b) {
        std::uint32_t r = kOne;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (b[i] == kOne)
                r = land(a[i], r);
            else if (b[i] == kZero)
                r = lor(a[i], r);
            else
                r = lor(land(a[i], lnot(b[i])), land(lnot(lxor(a[i], b[i])), r));
        }
        return r;
    }
    std::uint32_t eq(const Bits& a, const Bits& b) {
        std::uint32_t r = kOne;
        for (std::size_t i = 0; i < a.size(); ++i) r = land(r, lnot(lxor(a[i], b[i])));
        return r;
    }
    Bits add(const Bits& a, const Bits& b) {
        Bits s(a.size());
        std::uint32_t c = kZero;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::uint32_t x = lxor(a[i], b[i]);
            s[i] = lxor(x, c);
            if (i + 1 < a.size()) c = lor(land(a[i], b[i]), land(c, x));
        }
        return s;
    }
    Bits select(std::uint32_t sel, const Bits& a, const Bits& b) {
        Bits o(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) o[i] = mux(sel, a[i], b[i]);
        return o;
    }

    /// Multi-operand sum by a carry-save compressor: full adders while a
    /// column has three bits, a half adder for two.
    Bits sum(const std::vector<Bits>& xs, int width) {
        std::vector<std::deque<std::uint32_t>> col(width + 1);
        for (const auto& x : xs)
            for (std::size_t i = 0; i < x.size() && i < col.size(); ++i)
                if (x[i] != kZero) col[i].push_back(x[i]);
        Bits out(width, kZero);
        for (int w = 0; w < width; ++w) {
            auto& q = col[w];
            while (q.size() >= 3) {
                const std::uint32_t a = q.front();
                q.pop_front();
                const std::uint32_t b = q.front();
                q.pop_front();
                const std::uint32_t c = q.front();
                q.pop_front();
                const std::uint32_t x = lxor(a, b);
                q.push_back(lxor(x, c));
                col[w + 1].push_back(lor(land(a, b), land(c, x)));
            }
            if (q.size() == 2) {
                const std::uint32_t a = q.front(), b = q.back();
                q.clear();
                q.push_back(lxor(a, b));
                col[w + 1].push_back(land(a, b));
            }
            if (!q.empty()) out[w] = q.front();
        }
        return out;
    }

  private:
    std::uint32_t emit2(GateOp op, std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        return emit({op, a, b, tile, locus, reduction});
    }
    std::uint32_t emit(Gate g) {
        const std::uint64_t key = (std::uint64_t(g.op) << 60) ^ (std::uint64_t(g.a) << 30) ^ g.b;
        auto range = index_.equal_range(key);
        for (auto it = range.first; it != range.second; ++it) {
            Gate& h = g_[it->second];
            if (h.op == g.op && h.a == g.a && h.b == g.b) {
                h.reduction = h.reduction && g.reduction;
                return it->second;
            }
        }
        const std::uint32_t id = static_cast<std::uint32_t>(g_.size());
        g_.push_back(g);
        index_.emplace(key, id);
        return id;
    }

    std::vector<Gate>& g_;
    std::unordered_multimap<std::uint64_t, std::uint32_t> index_;
};

/// A named layer and the expression computing its next value.
struct Update {
    std::string layer;
    Expr expr;
};

namespace detail {

class Lowering {
  public:
    Lowering(const Medium& m, std::vector<Gate>& gates, std::vector<LayerPort>& inputs)
        : m_(m), nb_(gates), inputs_(inputs) {}

    using Bits = NetBuilder::Bits;
    using Plane = std::vector<Bits>;  // per data-point

    const Plane& lower(const Expr& e) {
        typecheck(e, m_, types_);
        return run(e);
    }
    const TypeMap& types() const { return types_; }

  private:
    std::uint32_t tile_of(Locus l, std::size_t p) const {
        const SimplexClass c = father_class(l);
        return m_.owner[static_cast<int>(c)][m_.table(l).father[p]];
    }
    void at(Locus l, std::size_t p, bool red = false) {
        nb_.tile = tile_of(l, p);
        nb_.locus = l;
        nb_.reduction = red;
    }

    const Plane& run(const Expr& e) {
        auto it = memo_.find(e.get());
        if (it != memo_.end()) return it->second;
        Plane out = compute(e);
        return memo_.emplace(e.get(), std::move(out)).first->second;
    }

    std::uint32_t layer_index(const Expr& e) {
        const FieldType t{e->locus, e->width, e->boolean};
        for (std::uint32_t i = 0; i < inputs_.size(); ++i)
            if (inputs_[i].name == e->name) {
                if (!(inputs_[i].type == t)) throw TypeError("layer " + e->name + " used with two types");
                return i;
            }
        LayerPort port{e->name, t, {}};
        const std::size_t n = m_.num_points(t.locus);
        const std::uint32_t li = static_cast<std::uint32_t>(inputs_.size());
        for (std::size_t p = 0; p < n; ++p) {
            at(t.locus, p);
            for (int b = 0; b < t.width; ++b) port.nets.push_back(nb_.input(li, static_cast<std::uint32_t>(p * t.width + b)));
        }
        inputs_.push_back(std::move(port));
        return li;
    }

    Plane compute(const Expr& e) {
        const FieldType t = types_.at(e);
        const std::size_t n = m_.num_points(t.locus);
        Plane out(n);
        switch (e->op) {
            case Op::Layer: {
                const auto& port = inputs_[layer_index(e)];
                for (std::size_t p = 0; p < n; ++p)
                    out[p].assign(port.nets.begin() + p * t.width, port.nets.begin() + (p + 1) * t.width);
                return out;
            }
            case Op::Const:
                for (std::size_t p = 0; p < n; ++p) {
                    out[p].resize(t.width);
                    for (int b = 0; b < t.width; ++b) out[p][b] = (e->value >> b) & 1u ? NetBuilder::kOne : NetBuilder::kZero;
                }
                return out;
            case Op::Broadcast: {
                const Plane& in = run(e->kids[0]);
                const auto& tab = m_.table(t.locus);
                for (std::size_t p = 0; p < n; ++p) out[p] = in[tab.father[p]];
                return out;
            }
            case Op::Transfer: {
                const Plane& in = run(e->kids[0]);
                const auto& tab = m_.table(t.locus);
                for (std::size_t p = 0; p < n; ++p) out[p] = in[tab.partner[p]];
                return out;
            }
            case Op::RotCW:
            case Op::RotCCW:
            case Op::Sym: {
                const Plane& in = run(e->kids[0]);
                const auto& tab = m_.table(t.locus);
                const auto& src = e->op == Op::RotCW ? tab.rot_cw_src : (e->op == Op::RotCCW ? tab.rot_ccw_src : tab.sym_src);
                for (std::size_t p = 0; p < n; ++p)
                    out[p] = src[p] < 0 ? Bits(t.width, NetBuilder::kZero) : in[src[p]];
                return out;
            }
            case Op::Reduce: return lower_reduce(e, t);
            case Op::Shr: {
                const Plane& in = run(e->kids[0]);
                for (std::size_t p = 0; p < n; ++p) out[p].assign(in[p].begin() + e->value, in[p].end());
                return out;
            }
            case Op::Not: {
                const Plane& in = run(e->kids[0]);
                for (std::size_t p = 0; p < n; ++p) {
                    at(t.locus, p);
                    out[p] = {nb_.lnot(in[p][0])};
                }
                return out;
            }
            default: break;
        }
        const Plane& a = run(e->kids[0]);
        const Plane& b = run(e->kids[1]);
        for (std::size_t p = 0; p < n; ++p) {
            at(t.locus, p);
            const Bits& x = a[p];
            const Bits& y = b[p];
            switch (e->op) {
                case Op::And: out[p] = {nb_.land(x[0], y[0])}; break;
                case Op::Or: out[p] = {nb_.lor(x[0], y[0])}; break;
                case Op::Xor: out[p] = {nb_.lxor(x[0], y[0])}; break;
                case Op::Add: out[p] = nb_.add(x, y); break;
                case Op::Min: out[p] = nb_.select(nb_.ge(x, y), y, x); break;
                case Op::Max: out[p] = nb_.select(nb_.ge(x, y), x, y); break;
                case Op::Ge: out[p] = {nb_.ge(x, y)}; break;
                case Op::Lt: out[p] = {nb_.lnot(nb_.ge(x, y))}; break;
                case Op::Le: out[p] = {nb_.ge(y, x)}; break;
                case Op::Gt: out[p] = {nb_.lnot(nb_.ge(y, x))}; break;
                case Op::Eq: out[p] = {nb_.eq(x, y)}; break;
                case Op::Ne: out[p] = {nb_.lnot(nb_.eq(x, y))}; break;
                default: throw Error("compile: unexpected operator");
            }
        }
        return out;
    }

    Plane lower_reduce(const Expr& e, const FieldType& t) {
        const Plane& in = run(e->kids[0]);
        const auto& tab = m_.table(e->kids[0]->locus);
        const std::size_t n = m_.num_points(t.locus);
        Plane out(n);
        for (std::size_t f = 0; f < n; ++f) {
            at(t.locus, f, true);
            std::vector<Bits> xs(in.begin() + tab.offset[f], in.begin() + tab.offset[f + 1]);
            if (e->rop == ReduceOp::Plus) {
                out[f] = nb_.sum(xs, t.width);
                continue;
            }
            if (xs.empty()) {
                const std::uint32_t v = reduce_neutral(e->rop, t.width);
                out[f].resize(t.width);
                for (int b = 0; b < t.width; ++b) out[f][b] = (v >> b) & 1u ? NetBuilder::kOne : NetBuilder::kZero;
                continue;
            }
            // Balanced pairwise tree.
            while (xs.size() > 1) {
                std::vector<Bits> next;
                for (std::size_t i = 0; i + 1 < xs.size(); i += 2) next.push_back(combine(e->rop, xs[i], xs[i + 1]));
                if (xs.size() % 2) next.push_back(xs.back());
                xs.swap(next);
            }
            out[f] = xs[0];
        }
        return out;
    }

    Bits combine(ReduceOp r, const Bits& a, const Bits& b) {
        switch (r) {
            case ReduceOp::And: return {nb_.land(a[0], b[0])};
            case ReduceOp::Or: return {nb_.lor(a[0], b[0])};
            case ReduceOp::Xor: return {nb_.lxor(a[0], b[0])};
            case ReduceOp::Min: return nb_.select(nb_.ge(a, b), b, a);
            case ReduceOp::Max: return nb_.select(nb_.ge(a, b), a, b);
            case ReduceOp::Plus: break;
        }
        throw Error("combine: plus is lowered as a sum");
    }

    const Medium& m_;
    NetBuilder nb_;
    std::vector<LayerPort>& inputs_;
    TypeMap types_;
    std::unordered_map<const Node*, Plane> memo_;
};

inline void finish_stats(CompiledCircuit& cc, int radius) {
    const Medium& m = *cc.medium;
    const auto& g = cc.gates;
    std::vector<std::vector<std::uint32_t>> consumers(g.size());
    std::vector<std::uint8_t> is_output(g.size(), 0);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        if (!g[i].is_logic()) continue;
        consumers[g[i].a].push_back(i);
        if (g[i].op != GateOp::Not) consumers[g[i].b].push_back(i);
    }
    for (const auto& o : cc.outputs)
        for (auto n : o.nets) is_output[n] = 1;
    cc.fused.assign(g.size(), 0);
    CircuitStats s;
    std::vector<std::size_t> per_tile(m.num_vertices(), 0);
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        if (!g[i].is_logic()) continue;
        ++s.gates_raw;
        bool fuse = g[i].op == GateOp::Not && father_class(g[i].locus) != SimplexClass::V && !is_output[i] &&
                    !consumers[i].empty();
        for (auto c : consumers[i])
            if (!g[c].reduction) fuse = false;
        cc.fused[i] = fuse;
        if (!fuse) {
            ++s.gates_fused;
            ++per_tile[g[i].tile];
        }
    }
    // Trans-wires: distinct (net, consuming tile) pairs that cross tiles.
    std::set<std::pair<std::uint32_t, std::uint32_t>> wires;
    auto source = [&](std::uint32_t n) {
        while (cc.fused[n]) n = g[n].a;
        return n;
    };
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        if (!g[i].is_logic() || cc.fused[i]) continue;
        const std::uint32_t ins[2] = {g[i].a, g[i].b};
        for (int k = 0; k < (g[i].op == GateOp::Not ? 1 : 2); ++k) {
            const std::uint32_t src = source(ins[k]);
            if (g[src].op == GateOp::Const0 || g[src].op == GateOp::Const1) continue;
            if (g[src].tile != g[i].tile) wires.insert({src, g[i].tile});
        }
    }
    s.transwires = wires.size();
    const double V = static_cast<double>(m.num_vertices());
    s.gates_per_tile = s.gates_fused / V;
    s.gates_per_tile_raw = s.gates_raw / V;
    s.transwires_per_tile = s.transwires / V;
    s.max_tile_gates = *std::max_element(per_tile.begin(), per_tile.end());
    s.radius = radius;
    cc.stats = s;
}

}  // namespace detail

/// Compiles a set of layer updates into one netlist over the medium.
inline CompiledCircuit compile(const std::vector<Update>& updates, MediumPtr m) {
    CompiledCircuit cc;
    cc.medium = m;
    detail::Lowering low(*m, cc.gates, cc.inputs);
    int radius = 0;
    for (const auto& u : updates) {
        const auto& plane = low.lower(u.expr);
        const FieldType t = low.types().at(u.expr);
        LayerPort port{u.layer, t, {}};
        for (const auto& bits : plane) port.nets.insert(port.nets.end(), bits.begin(), bits.end());
        cc.outputs.push_back(std::move(port));
        radius = std::max(radius, radius_of(u.expr));
    }
    detail::finish_stats(cc, radius);
    return cc;
}

inline CompiledCircuit compile(const Expr& e, MediumPtr m, const std::string& name = "out") {
    return compile(std::vector<Update>{{name, e}}, std::move(m));
}

/// Fixed network deciding (sum of 6 or 7 bits) >= 4, built as the
/// compressor sum followed by a folded constant comparison.
struct ThresholdNetwork {
    std::vector<Gate> gates;
    std::vector<std::uint32_t> inputs;
    std::uint32_t output = 0;

    std::size_t gate_count() const {
        return std::count_if(gates.begin(), gates.end(), [](const Gate& g) { return g.is_logic(); });
    }
    bool eval(std::uint32_t bits) const {
        std::vector<std::uint8_t> v(gates.size(), 0);
        for (std::size_t i = 0; i < gates.size(); ++i) {
            const Gate& g = gates[i];
            switch (g.op) {
                case GateOp::Const0: v[i] = 0; break;
                case GateOp::Const1: v[i] = 1; break;
                case GateOp::Input: v[i] = (bits >> g.b) & 1u; break;
                case GateOp::Not: v[i] = !v[g.a]; break;
                case GateOp::And: v[i] = v[g.a] & v[g.b]; break;
                case GateOp::Or: v[i] = v[g.a] | v[g.b]; break;
                case GateOp::Xor: v[i] = v[g.a] ^ v[g.b]; break;
            }
        }
        return v[output];
    }
};

inline ThresholdNetwork threshold_sum_ge4(int n_inputs) {
    if (n_inputs < 6 || n_inputs > 7) throw Error("threshold network takes 6 or 7 inputs");
    ThresholdNetwork t;
    NetBuilder nb(t.gates);
    std::vector<NetBuilder::Bits> xs;
    for (int i = 0; i < n_inputs; ++i) {
        t.inputs.push_back(nb.input(0, static_cast<std::uint32_t>(i)));
        xs.push_back({t.inputs.back()});
    }
    const auto s = nb.sum(xs, 3);
    // (sum >> 1) >= 2 on two bits is the top bit.
    t.output = nb.ge({s[1], s[2]}, {NetBuilder::kZero, NetBuilder::kOne});
    return t;
}

}  // namespace spatial
