#pragma once

#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blobs.hpp"

namespace spatial {

class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error("parse error at " + std::to_string(pos) + ": " + msg), pos_(pos) {}
    std::size_t position() const { return pos_; }

  private:
    std::size_t pos_;
};

/// "boolV", "int2E", "boolfV".
inline std::optional<FieldType> parse_type(std::string_view s) {
    FieldType t;
    if (s.starts_with("bool")) {
        s.remove_prefix(4);
    } else if (s.starts_with("int")) {
        s.remove_prefix(3);
        int w = 0;
        std::size_t i = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) w = w * 10 + (s[i++] - '0');
        if (i == 0 || w < 1 || w > 8) return std::nullopt;
        s.remove_prefix(i);
        t.boolean = false;
        t.width = w;
    } else {
        return std::nullopt;
    }
    auto l = parse_locus(s);
    if (!l) return std::nullopt;
    t.locus = *l;
    return t;
}

using LayerTypes = std::map<std::string, FieldType>;

namespace detail {

/// A literal stays untyped until it meets a sibling.
struct Literal {
    std::uint32_t value;
    std::size_t pos;
};
using Arg = std::variant<Expr, Literal>;

class Parser {
  public:
    Parser(std::string_view src, const LayerTypes& layers) : s_(src), layers_(layers) {}

    Expr parse() {
        Arg a = term();
        skip();
        if (i_ != s_.size()) throw ParseError("trailing input", i_);
        if (std::holds_alternative<Literal>(a))
            throw ParseError("a bare literal has no locus", std::get<Literal>(a).pos);
        return std::get<Expr>(a);
    }

  private:
    std::string_view s_;
    const LayerTypes& layers_;
    std::size_t i_ = 0;

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    Arg term() {
        skip();
        const std::size_t start = i_;
        if (i_ == s_.size()) throw ParseError("unexpected end of input", i_);
        if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            std::uint64_t v = 0;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                v = v * 10 + static_cast<std::uint64_t>(s_[i_++] - '0');
                if (v > 0xffff) throw ParseError("literal too large", start);
            }
            return Literal{static_cast<std::uint32_t>(v), start};
        }
        if (!ident_char(s_[i_])) throw ParseError(std::string("unexpected '") + s_[i_] + "'", i_);
        while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
        std::string name(s_.substr(start, i_ - start));
        if (eat(':')) {
            skip();
            const std::size_t tpos = i_;
            while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
            auto t = parse_type(s_.substr(tpos, i_ - tpos));
            if (!t) throw ParseError("bad type '" + std::string(s_.substr(tpos, i_ - tpos)) + "'", tpos);
            return layer(name, *t);
        }
        if (!eat('(')) {
            auto it = layers_.find(name);
            return layer(name, it == layers_.end() ? FieldType::boolean_on(Locus::V) : it->second);
        }
        std::vector<Arg> args;
        std::vector<std::size_t> pos;
        if (!eat(')')) {
            do {
                skip();
                pos.push_back(i_);
                args.push_back(term());
            } while (eat(','));
            if (!eat(')')) throw ParseError("expected ')' or ','", i_);
        }
        try {
            return call(name, args, pos, start);
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), start);
        }
    }

    static Expr typed(const Arg& a, const Expr& sibling) {
        if (auto* e = std::get_if<Expr>(&a)) return *e;
        const auto& l = std::get<Literal>(a);
        return konst(sibling->locus, l.value, sibling->boolean, 0);
    }

    Expr expr_arg(const Arg& a) const {
        if (auto* e = std::get_if<Expr>(&a)) return *e;
        throw ParseError("literal needs a typed sibling", std::get<Literal>(a).pos);
    }

    std::uint32_t lit_arg(const Arg& a, std::size_t p) const {
        if (auto* l = std::get_if<Literal>(&a)) return l->value;
        throw ParseError("expected an integer literal", p);
    }

    Expr call(const std::string& f, const std::vector<Arg>& a, const std::vector<std::size_t>& pos, std::size_t at) {
        auto arity = [&](std::size_t n) {
            if (a.size() != n)
                throw ParseError(f + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"), at);
        };
        auto unary = [&](const std::function<Expr(const Expr&)>& g) {
            arity(1);
            return g(expr_arg(a[0]));
        };
        auto binary = [&](Op op) {
            if (a.size() < 2) throw ParseError(f + " takes at least 2 arguments", at);
            Expr acc;
            for (const auto& x : a)
                if (auto* e = std::get_if<Expr>(&x)) acc = *e;
            if (acc.get() == nullptr) throw ParseError(f + ": no typed operand", at);
            Expr r = typed(a[0], acc);
            for (std::size_t k = 1; k < a.size(); ++k) r = pointwise(op, r, typed(a[k], acc));
            return r;
        };

        static const std::map<std::string, Op> binops{
            {"and", Op::And}, {"or", Op::Or}, {"xor", Op::Xor}, {"plus", Op::Add}, {"min", Op::Min},
            {"max", Op::Max}, {"eq", Op::Eq}, {"ne", Op::Ne},   {"lt", Op::Lt},    {"le", Op::Le},
            {"gt", Op::Gt},   {"ge", Op::Ge}};
        static const std::map<std::string, ReduceOp> rops{{"and", ReduceOp::And}, {"or", ReduceOp::Or},
                                                          {"xor", ReduceOp::Xor}, {"min", ReduceOp::Min},
                                                          {"max", ReduceOp::Max}, {"plus", ReduceOp::Plus}};
        if (auto it = binops.find(f); it != binops.end()) {
            if (is_compare(it->second) && a.size() != 2) throw ParseError(f + " takes 2 arguments", at);
            return binary(it->second);
        }
        if (f == "not") return unary([](const Expr& x) { return !x; });
        if (f == "shr") {
            arity(2);
            return shr(expr_arg(a[0]), lit_arg(a[1], pos[1]));
        }
        if (f == "transfer" || f == "up") return unary(transfer);
        if (f == "cw") return unary(rotate_cw);
        if (f == "ccw") return unary(rotate_ccw);
        if (f == "sym") return unary(symmetry);
        if (f == "apex") return unary(apex);
        if (f.starts_with("bcast_") && f.size() == 7) {
            const auto c = class_of(f[6], at);
            return unary([c](const Expr& x) { return broadcast(c, x); });
        }
        if (f.starts_with("reduce2_")) {
            auto it = binops.find(f.substr(8));
            if (it == binops.end() || (!is_bool_binop(it->second) && !is_int_binop(it->second)))
                throw ParseError("unknown reduce2 operator in " + f, at);
            const Op op = it->second;
            return unary([op](const Expr& x) { return reduce2(op, x); });
        }
        if (f.starts_with("reduce_")) {
            auto it = rops.find(f.substr(7));
            if (it == rops.end()) throw ParseError("unknown reduction " + f, at);
            const ReduceOp r = it->second;
            return unary([r](const Expr& x) { return reduce(r, x); });
        }
        for (auto [prefix, r] : {std::pair{"forall", ReduceOp::And}, std::pair{"exists", ReduceOp::Or},
                                 std::pair{"delta", ReduceOp::Xor}, std::pair{"sum", ReduceOp::Plus}}) {
            const std::string p(prefix);
            if (f.size() == p.size() + 1 && f.starts_with(p)) {
                const auto c = class_of(f.back(), at);
                return unary([r, c](const Expr& x) { return simplicial_reduce(r, c, x); });
            }
        }
        static const std::map<std::string, Expr (*)(const Expr&)> macros{
            {"frontierE", frontierE},   {"insideE", insideE},         {"outsideE", outsideE},
            {"insideF", insideF},       {"insideV", insideV},         {"outsideV", outsideV},
            {"neighborhoodV", neighborhoodV}, {"frontierV", frontierV}, {"frontierV_in", frontierV_in},
            {"frontierV_out", frontierV_out}, {"rhombus", rhombus},   {"rhombusAll", rhombus},
            {"nbcc", nbcc},             {"meetV", meetV},             {"divV", divV},
            {"mergeV", mergeV},         {"meetE", meetE},             {"divE", divE},
            {"mergeE", mergeE},         {"vd", vd_update}};
        if (auto it = macros.find(f); it != macros.end()) return unary(it->second);
        if (f == "closureV") {
            arity(2);
            return closureV(expr_arg(a[0]), expr_arg(a[1]));
        }
        if (f == "growth") {
            if (a.size() == 1) return growth_update(expr_arg(a[0]), 1);
            arity(2);
            return growth_update(expr_arg(a[0]), static_cast<int>(lit_arg(a[1], pos[1])));
        }
        throw ParseError("unknown function '" + f + "'", at);
    }

    static SimplexClass class_of(char c, std::size_t at) {
        switch (c) {
            case 'v':
            case 'V': return SimplexClass::V;
            case 'e':
            case 'E': return SimplexClass::E;
            case 'f':
            case 'F': return SimplexClass::F;
        }
        throw ParseError(std::string("bad simplex class '") + c + "'", at);
    }
};

}  // namespace detail

/// Parses prefix syntax such as `and(rhombus(not(frontierE(x))), forallE(frontierV(x)))`.
/// Undeclared identifiers are boolV layers; `y:boolE` declares inline.
inline Expr parse_expr(std::string_view src, const LayerTypes& layers = {}) {
    return detail::Parser(src, layers).parse();
}

/// "x:boolV" or "n:int2E".
inline std::pair<std::string, FieldType> parse_layer_decl(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0) throw ParseError("expected name:type", 0);
    auto t = parse_type(s.substr(colon + 1));
    if (!t) throw ParseError("bad type '" + std::string(s.substr(colon + 1)) + "'", colon + 1);
    return {std::string(s.substr(0, colon)), *t};
}

}  // namespace spatial
