#pragma once

#include "expr.hpp"

namespace spatial {

using C = SimplexClass;

/// /^op(↑(*^y(x))): fold of the simplicially adjacent points onto class y.
inline Expr simplicial_reduce(ReduceOp op, SimplexClass target, Expr x) {
    return reduce(op, transfer(broadcast(target, std::move(x))));
}

inline Expr forall(SimplexClass y, Expr x) { return simplicial_reduce(ReduceOp::And, y, std::move(x)); }
inline Expr exists(SimplexClass y, Expr x) { return simplicial_reduce(ReduceOp::Or, y, std::move(x)); }
inline Expr delta(SimplexClass y, Expr x) { return simplicial_reduce(ReduceOp::Xor, y, std::move(x)); }

/// op(cw(x), ccw(x)) on the brother locus.
inline Expr reduce2(Op op, const Expr& x) { return pointwise(op, rotate_cw(x), rotate_ccw(x)); }

/// ↑∘↔∘↑ between the fV points of a vertex and the fE points of its apex
/// edges. A plain edge field is first broadcast to its fE points.
inline Expr apex(Expr x) {
    if (x->locus == Locus::E) x = broadcast(C::F, std::move(x));
    if (x->locus != Locus::fV && x->locus != Locus::fE)
        throw TypeError("apex expects fV, fE or E, got " + std::string(locus_name(x->locus)));
    return transfer(symmetry(transfer(std::move(x))));
}

inline Expr frontierE(const Expr& x) { return delta(C::E, x); }
inline Expr insideE(const Expr& x) { return forall(C::E, x); }
inline Expr outsideE(const Expr& x) { return forall(C::E, !x); }
inline Expr insideF(const Expr& x) { return forall(C::F, x); }
inline Expr insideV(const Expr& x) { return forall(C::V, insideE(x)); }
inline Expr outsideV(const Expr& x) { return forall(C::V, outsideE(x)); }
inline Expr neighborhoodV(const Expr& x) { return exists(C::V, exists(C::E, x)); }

inline Expr frontierV(const Expr& x) { return exists(C::V, frontierE(x)); }
inline Expr frontierV_in(const Expr& x) { return x && frontierV(x); }
inline Expr frontierV_out(const Expr& x) { return !x && frontierV(x); }

inline Expr closureV(const Expr& xv, const Expr& ye) { return xv || exists(C::V, ye); }

/// ∀^⋄ = ∀^E∘∀^F: x holds on the rhombus around each edge.
inline Expr rhombus(const Expr& x) { return forall(C::E, forall(C::F, x)); }

/// Filled components in each vertex's neighbor ring.
inline Expr nbcc(const Expr& x) { return shr(reduce(ReduceOp::Plus, apex(frontierE(x))), 1); }

inline Expr meetV(const Expr& x) { return compare(Op::Ge, nbcc(x), 2); }
inline Expr divV(const Expr& x) { return meetV(x) && x; }
inline Expr mergeV(const Expr& x) { return meetV(x) && !x; }

inline Expr meetE(const Expr& x) { return rhombus(!frontierE(x)) && forall(C::E, frontierV(x)); }
// frontierV(¬x) = frontierV(x) lets div share the frontier.
inline Expr divE(const Expr& x) { return rhombus(x) && forall(C::E, frontierV(x)); }
inline Expr mergeE(const Expr& x) { return rhombus(!x) && forall(C::E, frontierV(x)); }

struct MeetExprs {
    Expr meetV, meetE, divV, divE, mergeV, mergeE;
};

inline MeetExprs meet(const Expr& x) {
    return {meetV(x), meetE(x), divV(x), divE(x), mergeV(x), mergeE(x)};
}

/// Growth blocked by the vertex closure of merge points.
inline Expr vd_update(const Expr& x) { return neighborhoodV(x) && !closureV(mergeV(x), mergeE(x)); }

inline Expr growth_update(const Expr& x, int k = 1) {
    Expr e = x;
    for (int i = 0; i < k; ++i) e = neighborhoodV(e);
    return e;
}

}  // namespace spatial
