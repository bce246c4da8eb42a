#pragma once

#include <random>

#include "spatial/blobs.hpp"
#include "spatial/interpret.hpp"
#include "spatial/isotropic.hpp"

namespace spatial::testing {

inline MediumPtr hex(int c, int r) { return std::make_shared<const Medium>(build_hex_torus(c, r)); }
inline MediumPtr iso(int n, std::uint64_t seed, int relax = 30) {
    return std::make_shared<const Medium>(build_isotropic(n, seed, relax));
}

inline const FieldType kBV = FieldType::boolean_on(Locus::V);
inline const FieldType kBE = FieldType::boolean_on(Locus::E);
inline const FieldType kBF = FieldType::boolean_on(Locus::F);

/// Evaluates e with the given layers bound.
inline std::vector<std::uint32_t> eval(const Expr& e, const MediumPtr& m, std::map<std::string, Field> layers) {
    Configuration c{m, std::move(layers)};
    return interpret(e, c).values();
}

inline Field vfield(const MediumPtr& m, const std::vector<std::uint32_t>& v) {
    Field f(m, kBV);
    f.assign(v);
    return f;
}

/// Hex axial coordinates of a torus vertex.
inline std::pair<int, int> axial(const Medium& m, std::uint32_t v) { return {int(v) % m.cols, int(v) / m.cols}; }

/// Closed-form hop distance on a hexagonal torus: the minimum over lattice
/// translates of the axial hex norm.
inline int torus_hex_distance(const Medium& m, std::uint32_t a, std::uint32_t b) {
    auto [qa, ra] = axial(m, a);
    auto [qb, rb] = axial(m, b);
    int best = 1 << 30;
    for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
            const int dq = qb + i * m.cols - qa, dr = rb + j * m.rows - ra;
            best = std::min(best, std::max({std::abs(dq), std::abs(dr), std::abs(dq + dr)}));
        }
    return best;
}

/// Random well-typed expressions over layers x:boolV, y:boolE, z:boolF.
class ExprGen {
  public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    Expr on(SimplexClass c, int depth) {
        if (depth == 0 || pick(5) == 0) return leaf(c);
        switch (pick(7)) {
            case 0: return !on(c, depth - 1);
            case 1: return on(c, depth - 1) && on(c, depth - 1);
            case 2: return on(c, depth - 1) || on(c, depth - 1);
            case 3: return on(c, depth - 1) ^ on(c, depth - 1);
            case 4: {
                const ReduceOp ops[] = {ReduceOp::And, ReduceOp::Or, ReduceOp::Xor};
                return simplicial_reduce(ops[pick(3)], c, on(other(c), depth - 1));
            }
            case 5: {
                // Through a transfer locus, with a rotation or symmetry on the way.
                const SimplexClass src = other(c);
                Expr t = transfer(broadcast(c, on(src, depth - 1)));
                if (pick(2)) t = pick(2) ? rotate_cw(t) : rotate_ccw(t);
                const ReduceOp ops[] = {ReduceOp::And, ReduceOp::Or, ReduceOp::Xor};
                return reduce(ops[pick(3)], t);
            }
            default: {
                Expr s = simplicial_reduce(ReduceOp::Plus, c, on(other(c), depth - 1));
                const Op cmp[] = {Op::Ge, Op::Eq, Op::Lt};
                return compare(cmp[pick(3)], s, static_cast<std::uint32_t>(pick(4)));
            }
        }
    }

  private:
    std::mt19937_64 rng_;
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    SimplexClass other(SimplexClass c) {
        const int k = (static_cast<int>(c) + 1 + pick(2)) % 3;
        return static_cast<SimplexClass>(k);
    }
    static Expr leaf(SimplexClass c) {
        switch (c) {
            case SimplexClass::V: return layer("x", kBV);
            case SimplexClass::E: return layer("y", kBE);
            case SimplexClass::F: return layer("z", kBF);
        }
        return nullptr;
    }
};

inline std::map<std::string, Field> random_xyz(const MediumPtr& m, std::uint64_t seed, double density = 0.5) {
    return {{"x", random_field(m, kBV, seed, density)},
            {"y", random_field(m, kBE, seed + 1, density)},
            {"z", random_field(m, kBF, seed + 2, density)}};
}

}  // namespace spatial::testing
