#include <gtest/gtest.h>

#include "spatial/parser.hpp"
#include "test_util.hpp"

using namespace spatial;
using namespace spatial::testing;

TEST(Types, ConstructorsInferLoci) {
    const Expr x = layer("x", kBV);
    EXPECT_EQ(broadcast(C::E, x)->locus, Locus::eV);
    EXPECT_EQ(transfer(broadcast(C::E, x))->locus, Locus::vE);
    EXPECT_EQ(rotate_cw(broadcast(C::E, x))->locus, Locus::fV);
    EXPECT_EQ(reduce(ReduceOp::Or, transfer(broadcast(C::E, x)))->locus, Locus::E);
    EXPECT_EQ(symmetry(layer("y", FieldType::boolean_on(Locus::vF)))->locus, Locus::eF);
    EXPECT_EQ(symmetry(layer("y", FieldType::boolean_on(Locus::vE)))->locus, Locus::vE);
}

TEST(Types, Rejections) {
    const Expr x = layer("x", kBV);
    const Expr y = layer("y", kBE);
    EXPECT_THROW(transfer(x), TypeError);
    EXPECT_THROW(broadcast(C::V, x), TypeError);
    EXPECT_THROW(broadcast(C::E, broadcast(C::F, x)), TypeError);
    EXPECT_THROW(x && y, TypeError);
    EXPECT_THROW(reduce(ReduceOp::And, x), TypeError);
    EXPECT_THROW(rotate_cw(x), TypeError);
    EXPECT_THROW(shr(x, 1), TypeError);
    EXPECT_THROW(konst(Locus::V, 2), TypeError);
    const Expr n = layer("n", FieldType::integer_on(Locus::fV, 2));
    EXPECT_THROW(reduce(ReduceOp::Xor, n), TypeError);
    EXPECT_THROW(pointwise(Op::Add, x, x), TypeError);
}

TEST(Types, WidthsWidenUnderPlus) {
    const auto m = hex(6, 6);
    const Expr s = simplicial_reduce(ReduceOp::Plus, C::V, layer("y", kBE));
    EXPECT_EQ(typecheck(s, *m).width, 3);  // 0..6
    EXPECT_EQ(typecheck(shr(s, 1), *m).width, 2);
    EXPECT_THROW(typecheck(shr(s, 3), *m), TypeError);
    const Expr n = layer("n", FieldType::integer_on(Locus::V, 3));
    EXPECT_THROW(typecheck(pointwise(Op::Add, n, layer("k", FieldType::integer_on(Locus::V, 2))), *m), TypeError);
    EXPECT_EQ(typecheck(compare(Op::Ge, n, 7), *m), kBV);
    EXPECT_THROW(typecheck(compare(Op::Ge, n, 8), *m), TypeError);
}

TEST(Types, VertexSymmetryOnlyOnHex) {
    const Expr y = layer("y", FieldType::boolean_on(Locus::fV));
    EXPECT_NO_THROW(typecheck(symmetry(y), *hex(5, 5)));
    EXPECT_THROW(typecheck(symmetry(y), *iso(60, 1)), TypeError);
    EXPECT_NO_THROW(typecheck(symmetry(layer("y", FieldType::boolean_on(Locus::eF))), *iso(60, 1)));
}

TEST(Types, FreeVariablesAndSubstitution) {
    const Expr x = layer("x", kBV);
    const Expr e = vd_update(x);
    EXPECT_EQ(free_variables(e), std::set<std::string>{"x"});
    const Expr w = layer("w", kBV);
    const Expr s = substitute(e, "x", w);
    EXPECT_EQ(free_variables(s), std::set<std::string>{"w"});
    EXPECT_THROW(substitute(e, "x", layer("y", kBE)), TypeError);
    EXPECT_EQ(substitute(e, "q", w).get(), e.get());
}

TEST(Parser, BlobFunctionsParse) {
    const Expr x = layer("x", kBV);
    const std::vector<std::pair<std::string, Expr>> cases{
        {"frontierE(x)", frontierE(x)},
        {"and(rhombus(not(frontierE(x))), forallE(frontierV(x)))", meetE(x)},
        {"ge(nbcc(x), 2)", meetV(x)},
        {"vd(x)", vd_update(x)},
        {"and(neighborhoodV(x), not(closureV(mergeV(x), mergeE(x))))", vd_update(x)},
        {"growth(x, 3)", growth_update(x, 3)},
    };
    for (const auto& [src, want] : cases) EXPECT_EQ(to_string(parse_expr(src)), to_string(want)) << src;
}

TEST(Parser, ToStringRoundTrips) {
    ExprGen gen(5);
    for (int i = 0; i < 200; ++i) {
        const Expr e = gen.on(static_cast<SimplexClass>(i % 3), 3);
        const std::string s = to_string(e);
        EXPECT_EQ(to_string(parse_expr(s)), s);
    }
}

TEST(Parser, LayerDeclarations) {
    const Expr e = parse_expr("existsV(y:boolE)");
    EXPECT_EQ(e->locus, Locus::V);
    const Expr f = parse_expr("sumV(n)", {{"n", FieldType::integer_on(Locus::E, 2)}});
    EXPECT_FALSE(f->boolean);
    EXPECT_EQ(parse_layer_decl("n:int3fE").second, FieldType::integer_on(Locus::fE, 3));
    EXPECT_THROW(parse_layer_decl("n:int9V"), ParseError);
    EXPECT_THROW(parse_layer_decl("boolV"), ParseError);
}

TEST(Parser, LiteralsTakeTheirSiblingsType) {
    const Expr e = parse_expr("and(x, 1)");
    EXPECT_EQ(e->kids[1]->op, Op::Const);
    EXPECT_EQ(e->kids[1]->locus, Locus::V);
    EXPECT_THROW(parse_expr("and(1, 0)"), ParseError);
    EXPECT_THROW(parse_expr("7"), ParseError);
}

TEST(Parser, ErrorsCarryPositions) {
    auto pos = [](const std::string& s) {
        try {
            parse_expr(s);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1L;
    };
    EXPECT_EQ(pos("and(x, "), 7);
    EXPECT_EQ(pos("frobnicate(x)"), 0);
    EXPECT_EQ(pos("and(x, frontierE(x))"), 0);  // locus mismatch reported at the call
    EXPECT_EQ(pos("not(x) y"), 7);
    EXPECT_EQ(pos("not(x:boolQ)"), 6);
    EXPECT_EQ(pos("or(x, #)"), 6);
    EXPECT_EQ(pos("shr(sumV(y:boolE), x)"), 19);
}
