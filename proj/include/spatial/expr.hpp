#pragma once

#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "field.hpp"

namespace spatial {

class TypeError : public Error {
  public:
    using Error::Error;
};

enum class Op : std::uint8_t {
    Layer,
    Const,
    Broadcast,
    Transfer,
    Reduce,
    RotCW,
    RotCCW,
    Sym,
    Not,
    And,
    Or,
    Xor,
    Add,
    Min,
    Max,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Shr,
};

enum class ReduceOp : std::uint8_t { And, Or, Xor, Min, Max, Plus };

inline std::string_view reduce_name(ReduceOp r) {
    switch (r) {
        case ReduceOp::And: return "and";
        case ReduceOp::Or: return "or";
        case ReduceOp::Xor: return "xor";
        case ReduceOp::Min: return "min";
        case ReduceOp::Max: return "max";
        case ReduceOp::Plus: return "plus";
    }
    return "?";
}

inline std::string_view op_name(Op o) {
    switch (o) {
        case Op::Layer: return "layer";
        case Op::Const: return "const";
        case Op::Broadcast: return "bcast";
        case Op::Transfer: return "transfer";
        case Op::Reduce: return "reduce";
        case Op::RotCW: return "cw";
        case Op::RotCCW: return "ccw";
        case Op::Sym: return "sym";
        case Op::Not: return "not";
        case Op::And: return "and";
        case Op::Or: return "or";
        case Op::Xor: return "xor";
        case Op::Add: return "plus";
        case Op::Min: return "min";
        case Op::Max: return "max";
        case Op::Eq: return "eq";
        case Op::Ne: return "ne";
        case Op::Lt: return "lt";
        case Op::Le: return "le";
        case Op::Gt: return "gt";
        case Op::Ge: return "ge";
        case Op::Shr: return "shr";
    }
    return "?";
}

inline bool is_bool_binop(Op o) { return o == Op::And || o == Op::Or || o == Op::Xor; }
inline bool is_int_binop(Op o) { return o == Op::Add || o == Op::Min || o == Op::Max; }
inline bool is_compare(Op o) {
    return o == Op::Eq || o == Op::Ne || o == Op::Lt || o == Op::Le || o == Op::Gt || o == Op::Ge;
}

struct Node;
using Expr = std::shared_ptr<const Node>;

/// One operation node. Locus and bool/int kind are fixed at construction;
/// integer widths depend on the medium and are resolved by typecheck.
struct Node {
    Op op = Op::Const;
    Locus locus = Locus::V;
    bool boolean = true;
    int width = 0;  // declared width of layers and typed constants, 0 = inferred
    std::string name;
    std::uint32_t value = 0;
    SimplexClass target = SimplexClass::V;
    ReduceOp rop = ReduceOp::Or;
    std::vector<Expr> kids;
};

namespace detail {
inline Expr make(Node n) { return std::make_shared<const Node>(std::move(n)); }
}  // namespace detail

inline Expr layer(const std::string& name, FieldType t) {
    Node n;
    n.op = Op::Layer;
    n.name = name;
    n.locus = t.locus;
    n.boolean = t.boolean;
    n.width = t.width;
    return detail::make(std::move(n));
}

/// A constant; int constants with width 0 adopt the width of their sibling.
inline Expr konst(Locus l, std::uint32_t v, bool boolean = true, int width = 0) {
    if (boolean && v > 1) throw TypeError("bool constant must be 0 or 1");
    Node n;
    n.op = Op::Const;
    n.locus = l;
    n.boolean = boolean;
    n.value = v;
    n.width = boolean ? 1 : width;
    return detail::make(std::move(n));
}

inline Expr broadcast(SimplexClass target, Expr e) {
    if (!is_simplicial(e->locus))
        throw TypeError("broadcast expects a simplicial locus, got " + std::string(locus_name(e->locus)));
    if (father_class(e->locus) == target)
        throw TypeError(std::string("broadcast toward its own class ") + class_letter(target));
    Node n;
    n.op = Op::Broadcast;
    n.target = target;
    n.locus = transfer_locus(father_class(e->locus), target);
    n.boolean = e->boolean;
    n.kids = {std::move(e)};
    return detail::make(std::move(n));
}

inline Expr transfer(Expr e) {
    if (!is_transfer(e->locus)) throw TypeError("transfer expects a transfer locus, got " + std::string(locus_name(e->locus)));
    Node n;
    n.op = Op::Transfer;
    n.locus = partner_locus(e->locus);
    n.boolean = e->boolean;
    n.kids = {std::move(e)};
    return detail::make(std::move(n));
}

inline Expr reduce(ReduceOp r, Expr e) {
    if (!is_transfer(e->locus)) throw TypeError("reduce expects a transfer locus, got " + std::string(locus_name(e->locus)));
    const bool logic = r == ReduceOp::And || r == ReduceOp::Or || r == ReduceOp::Xor;
    if (logic && !e->boolean) throw TypeError("reduce " + std::string(reduce_name(r)) + " expects bool");
    Node n;
    n.op = Op::Reduce;
    n.rop = r;
    n.locus = simplicial_locus(father_class(e->locus));
    n.boolean = r == ReduceOp::Plus ? false : e->boolean;
    n.kids = {std::move(e)};
    return detail::make(std::move(n));
}

namespace detail {
inline Expr rotation(Op op, Expr e) {
    if (!is_transfer(e->locus)) throw TypeError(std::string(op_name(op)) + " expects a transfer locus");
    Node n;
    n.op = op;
    n.locus = brother_locus(e->locus);
    n.boolean = e->boolean;
    n.kids = {std::move(e)};
    return make(std::move(n));
}
}  // namespace detail

inline Expr rotate_cw(Expr e) { return detail::rotation(Op::RotCW, std::move(e)); }
inline Expr rotate_ccw(Expr e) { return detail::rotation(Op::RotCCW, std::move(e)); }

/// Central symmetry: eF<->vF on faces, vE->vE and fE->fE on edges, and on
/// vertices eV->eV, fV->fV (hexagonal media only).
inline Expr symmetry(Expr e) {
    if (!is_transfer(e->locus)) throw TypeError("sym expects a transfer locus");
    Node n;
    n.op = Op::Sym;
    n.locus = father_class(e->locus) == SimplexClass::F ? brother_locus(e->locus) : e->locus;
    n.boolean = e->boolean;
    n.kids = {std::move(e)};
    return detail::make(std::move(n));
}

namespace detail {
inline void same_locus(const Expr& a, const Expr& b, Op op) {
    if (a->locus != b->locus)
        throw TypeError(std::string(op_name(op)) + ": locus mismatch " + std::string(locus_name(a->locus)) + " vs " +
                        std::string(locus_name(b->locus)));
}
}  // namespace detail

inline Expr pointwise(Op op, Expr a, Expr b = nullptr) {
    Node n;
    n.op = op;
    n.locus = a->locus;
    if (op == Op::Not) {
        if (!a->boolean) throw TypeError("not expects bool");
        n.boolean = true;
        n.kids = {std::move(a)};
        return detail::make(std::move(n));
    }
    if (!b) throw TypeError(std::string(op_name(op)) + " expects two operands");
    detail::same_locus(a, b, op);
    if (is_bool_binop(op)) {
        if (!a->boolean || !b->boolean) throw TypeError(std::string(op_name(op)) + " expects bool operands");
        n.boolean = true;
    } else if (is_int_binop(op)) {
        if (a->boolean || b->boolean) throw TypeError(std::string(op_name(op)) + " expects int operands");
        n.boolean = false;
    } else if (is_compare(op)) {
        if (a->boolean || b->boolean) throw TypeError(std::string(op_name(op)) + " expects int operands");
        n.boolean = true;
    } else {
        throw TypeError("not a pointwise operator");
    }
    n.kids = {std::move(a), std::move(b)};
    return detail::make(std::move(n));
}

inline Expr operator!(Expr a) { return pointwise(Op::Not, std::move(a)); }
inline Expr operator&&(Expr a, Expr b) { return pointwise(Op::And, std::move(a), std::move(b)); }
inline Expr operator||(Expr a, Expr b) { return pointwise(Op::Or, std::move(a), std::move(b)); }
inline Expr operator^(Expr a, Expr b) { return pointwise(Op::Xor, std::move(a), std::move(b)); }

/// Integer comparison against a literal.
inline Expr compare(Op op, Expr a, std::uint32_t k) {
    auto c = konst(a->locus, k, false);
    return pointwise(op, std::move(a), std::move(c));
}

inline Expr shr(Expr a, std::uint32_t k) {
    if (a->boolean) throw TypeError("shr expects int");
    Node n;
    n.op = Op::Shr;
    n.locus = a->locus;
    n.boolean = false;
    n.value = k;
    n.kids = {std::move(a)};
    return detail::make(std::move(n));
}

/// Resolved field types of every node of an expression for one medium.
class TypeMap {
  public:
    const FieldType& at(const Node* n) const {
        auto it = types_.find(n);
        if (it == types_.end()) throw Error("node was not typechecked");
        return it->second;
    }
    const FieldType& at(const Expr& e) const { return at(e.get()); }
    bool contains(const Node* n) const { return types_.count(n) != 0; }
    void put(const Node* n, FieldType t) { types_[n] = t; }

  private:
    std::unordered_map<const Node*, FieldType> types_;
};

inline int widened_width(std::size_t coarity, int w) {
    const std::uint64_t maxsum = coarity * ((std::uint64_t(1) << w) - 1);
    int bits = 1;
    while ((std::uint64_t(1) << bits) <= maxsum) ++bits;
    return bits;
}

namespace detail {

inline FieldType check_node(const Expr& e, const Medium& m, TypeMap& tm, int hint) {
    if (tm.contains(e.get())) return tm.at(e);
    FieldType t{e->locus, 1, e->boolean};
    auto kid = [&](std::size_t i, int h = 0) { return check_node(e->kids[i], m, tm, h); };
    switch (e->op) {
        case Op::Layer: t.width = e->width; break;
        case Op::Const:
            t.width = e->boolean ? 1 : (e->width ? e->width : hint);
            if (t.width == 0) throw TypeError("cannot infer the width of an int constant");
            if (e->value > t.max_value()) throw TypeError("constant " + std::to_string(e->value) + " does not fit " + type_name(t));
            break;
        case Op::Broadcast:
        case Op::Transfer:
        case Op::RotCW:
        case Op::RotCCW: t.width = kid(0).width; break;
        case Op::Sym: {
            const auto& table = m.table(e->kids[0]->locus);
            if (table.sym_src.empty())
                throw TypeError("central symmetry on " + std::string(locus_name(e->kids[0]->locus)) +
                                " is undefined on this medium");
            t.width = kid(0).width;
            break;
        }
        case Op::Reduce: {
            const FieldType c = kid(0);
            t.width = e->rop == ReduceOp::Plus ? widened_width(m.max_coarity(c.locus), c.width) : c.width;
            if (t.width > 8) throw TypeError("plus reduction wider than 8 bits");
            break;
        }
        case Op::Not: kid(0); break;
        case Op::Shr: {
            const FieldType c = kid(0);
            if (static_cast<int>(e->value) >= c.width) throw TypeError("shr by " + std::to_string(e->value) + " empties " + type_name(c));
            t.width = c.width - static_cast<int>(e->value);
            break;
        }
        default: {
            const bool ac = e->kids[0]->op == Op::Const && e->kids[0]->width == 0 && !e->kids[0]->boolean;
            FieldType a, b;
            if (ac) {
                b = kid(1);
                a = kid(0, b.width);
            } else {
                a = kid(0);
                b = kid(1, a.width);
            }
            if (a.width != b.width)
                throw TypeError(std::string(op_name(e->op)) + ": width mismatch " + type_name(a) + " vs " + type_name(b));
            t.width = e->boolean ? 1 : a.width;
            break;
        }
    }
    tm.put(e.get(), t);
    return t;
}

}  // namespace detail

/// Resolves widths and medium-dependent rules; throws TypeError.
inline FieldType typecheck(const Expr& e, const Medium& m, TypeMap& tm) { return detail::check_node(e, m, tm, 0); }

inline FieldType typecheck(const Expr& e, const Medium& m) {
    TypeMap tm;
    return typecheck(e, m, tm);
}

inline void collect_layers(const Expr& e, std::map<std::string, FieldType>& out) {
    if (e->op == Op::Layer) {
        FieldType t{e->locus, e->width, e->boolean};
        auto [it, fresh] = out.emplace(e->name, t);
        if (!fresh && !(it->second == t)) throw TypeError("layer " + e->name + " used with two types");
        return;
    }
    for (const auto& k : e->kids) collect_layers(k, out);
}

inline std::set<std::string> free_variables(const Expr& e) {
    std::map<std::string, FieldType> layers;
    collect_layers(e, layers);
    std::set<std::string> out;
    for (auto& [k, _] : layers) out.insert(k);
    return out;
}

/// Replaces every read of layer `name` with `by`; the types must agree.
inline Expr substitute(const Expr& e, const std::string& name, const Expr& by) {
    if (e->op == Op::Layer) {
        if (e->name != name) return e;
        if (by->locus != e->locus || by->boolean != e->boolean)
            throw TypeError("substitute: " + name + " replaced by a different type");
        return by;
    }
    bool changed = false;
    Node n = *e;
    for (auto& k : n.kids) {
        auto nk = substitute(k, name, by);
        changed |= nk != k;
        k = nk;
    }
    return changed ? detail::make(std::move(n)) : e;
}

inline std::string to_string(const Expr& e) {
    switch (e->op) {
        case Op::Layer:
            if (e->boolean && e->locus == Locus::V) return e->name;
            return e->name + ":" + type_name(FieldType{e->locus, e->width, e->boolean});
        case Op::Const: return std::to_string(e->value);
        case Op::Broadcast: return std::string("bcast_") + static_cast<char>(class_letter(e->target) + 32) + "(" + to_string(e->kids[0]) + ")";
        case Op::Reduce: return "reduce_" + std::string(reduce_name(e->rop)) + "(" + to_string(e->kids[0]) + ")";
        case Op::Shr: return "shr(" + to_string(e->kids[0]) + ", " + std::to_string(e->value) + ")";
        default: break;
    }
    std::string s = std::string(op_name(e->op)) + "(";
    for (std::size_t i = 0; i < e->kids.size(); ++i) s += (i ? ", " : "") + to_string(e->kids[i]);
    return s + ")";
}

inline std::size_t node_count(const Expr& e) {
    std::size_t n = 1;
    for (const auto& k : e->kids) n += node_count(k);
    return n;
}

}  // namespace spatial
