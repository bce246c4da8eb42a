#pragma once

#include <array>
#include <unordered_map>

#include "expr.hpp"

namespace spatial {

/// Automaton states. Perimeter/radial edge and face states follow a vertex
/// origin; Eo/Fq/Ee track an edge-layer origin.
enum class Subtype : std::uint8_t { V, Ep, Er, Fp, Fr, Eo, Fq, Ee };
inline constexpr int kSubtypes = 8;

inline std::string_view subtype_name(Subtype s) {
    static constexpr std::array<std::string_view, kSubtypes> names{"V", "Ep", "Er", "Fp", "Fr", "Eo", "Fq", "Ee"};
    return names[static_cast<int>(s)];
}

inline SimplexClass subtype_class(Subtype s) {
    switch (s) {
        case Subtype::V: return SimplexClass::V;
        case Subtype::Ep:
        case Subtype::Er:
        case Subtype::Eo:
        case Subtype::Ee: return SimplexClass::E;
        default: return SimplexClass::F;
    }
}

struct Transition {
    Subtype to;
    int cost;
};

/// One transfer from a state into an adjacent class.
inline Transition radius_step(Subtype s, SimplexClass to) {
    using S = Subtype;
    using C = SimplexClass;
    if (to == C::V) {
        switch (s) {
            case S::Er:
            case S::Ee: return {S::V, 0};
            default: return {S::V, 1};
        }
    }
    switch (s) {
        case S::V: return to == C::E ? Transition{S::Ep, 1} : Transition{S::Fp, 1};
        case S::Ep: return {S::Fp, 0};
        case S::Fp: return {S::Er, 1};
        case S::Er: return {S::Fr, 1};
        case S::Fr: return {S::Ep, 0};
        case S::Eo: return {S::Fq, 1};
        case S::Fq: return {S::Ee, 1};
        case S::Ee: return {S::Fq, 0};
    }
    throw Error("radius_step: bad state");
}

/// Max radius reached per subtype; -1 when absent.
struct RadiusState {
    std::array<int, kSubtypes> r;
    RadiusState() { r.fill(-1); }

    int radius() const {
        int m = 0;
        for (int x : r) m = std::max(m, x);
        return m;
    }
    void merge(const RadiusState& o) {
        for (int i = 0; i < kSubtypes; ++i) r[i] = std::max(r[i], o.r[i]);
    }
};

inline RadiusState layer_state(Locus l) {
    RadiusState s;
    switch (father_class(l)) {
        case SimplexClass::V: s.r[static_cast<int>(Subtype::V)] = 0; break;
        case SimplexClass::E: s.r[static_cast<int>(Subtype::Eo)] = 0; break;
        case SimplexClass::F: s.r[static_cast<int>(Subtype::Fp)] = 0; break;
    }
    return s;
}

namespace detail {
inline RadiusState radius_state(const Expr& e, std::unordered_map<const Node*, RadiusState>& memo) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    RadiusState s;
    if (e->op == Op::Layer) {
        s = layer_state(e->locus);
    } else if (e->op == Op::Transfer) {
        const RadiusState in = radius_state(e->kids[0], memo);
        const SimplexClass to = father_class(e->locus);
        for (int i = 0; i < kSubtypes; ++i) {
            if (in.r[i] < 0) continue;
            const Transition t = radius_step(static_cast<Subtype>(i), to);
            int& dst = s.r[static_cast<int>(t.to)];
            dst = std::max(dst, in.r[i] + t.cost);
        }
    } else {
        for (const auto& k : e->kids) s.merge(radius_state(k, memo));
    }
    memo.emplace(e.get(), s);
    return s;
}
}  // namespace detail

inline RadiusState radius_state(const Expr& e) {
    std::unordered_map<const Node*, RadiusState> memo;
    return detail::radius_state(e, memo);
}

/// Influence radius in simplicial hops.
inline int radius_of(const Expr& e) { return radius_state(e).radius(); }

}  // namespace spatial
