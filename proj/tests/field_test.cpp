#include <gtest/gtest.h>

#include "spatial/io.hpp"
#include "test_util.hpp"

using namespace spatial;
using namespace spatial::testing;

TEST(Field, SizesFollowTheLocus) {
    const auto m = hex(4, 3);
    EXPECT_EQ(Field(m, kBV).size(), 12u);
    EXPECT_EQ(Field(m, kBE).size(), 36u);
    EXPECT_EQ(Field(m, FieldType::integer_on(Locus::vF, 3)).size(), 72u);
}

TEST(Field, SetGetAcrossWordBoundaries) {
    const auto m = hex(8, 8);
    Field f(m, FieldType::integer_on(Locus::E, 5));
    std::mt19937_64 rng(3);
    std::vector<std::uint32_t> want(f.size());
    for (auto& w : want) w = rng() % 32;
    for (std::size_t p = 0; p < f.size(); ++p) f.set(p, want[p]);
    EXPECT_EQ(f.values(), want);
}

TEST(Field, OverflowAndBadWidthThrow) {
    const auto m = hex(3, 3);
    Field f(m, FieldType::integer_on(Locus::V, 2));
    EXPECT_THROW(f.set(0, 4), Error);
    EXPECT_THROW(f.get(9), Error);
    EXPECT_THROW(Field(m, FieldType::integer_on(Locus::V, 9)), Error);
    Field b(m, kBV);
    EXPECT_THROW(b.set(0, 2), Error);
}

TEST(Field, RandomDensity) {
    const auto m = hex(32, 32);
    const Field f = random_field(m, kBV, 7, 0.3);
    EXPECT_NEAR(double(f.popcount()) / f.size(), 0.3, 0.05);
    EXPECT_EQ(random_field(m, kBV, 7, 0.3), f);
    EXPECT_EQ(random_field(m, kBV, 7, 0).popcount(), 0u);
}

TEST(Field, ConstantAndFromPoints) {
    const auto m = hex(4, 4);
    EXPECT_EQ(constant(m, kBE, 1).popcount(), m->edges.size());
    const Field f = from_points(m, kBV, {1, 5, 9});
    EXPECT_EQ(f.true_points(), (std::vector<std::size_t>{1, 5, 9}));
}

TEST(FieldDump, RoundTrip) {
    for (const auto& m : {hex(8, 6), iso(90, 2)}) {
        for (FieldType t : {kBV, FieldType::integer_on(Locus::fE, 3), FieldType::integer_on(Locus::vF, 7)}) {
            Field f(m, t);
            std::mt19937_64 rng(11);
            for (std::size_t p = 0; p < f.size(); ++p) f.set(p, static_cast<std::uint32_t>(rng() % (t.max_value() + 1)));
            const std::string s = dump_field(f);
            EXPECT_EQ(s.substr(0, 4), "SPFD");
            EXPECT_EQ(s.size(), 4 + 4 + 8 + 4 + 8 + 8 * f.words().size());
            EXPECT_EQ(load_field(s, m), f);
        }
    }
}

TEST(FieldDump, RejectsCorruption) {
    const auto m = hex(6, 6);
    const std::string s = dump_field(random_field(m, kBE, 1, 0.5));
    std::string bad = s;
    bad[0] = 'X';
    EXPECT_THROW(load_field(bad, m), Error);
    EXPECT_THROW(load_field(s.substr(0, s.size() - 3), m), Error);
    EXPECT_THROW(load_field(s + "x", m), Error);
    EXPECT_THROW(load_field(s, hex(6, 7)), Error);  // medium hash
}

TEST(FieldDump, LittleEndianHeader) {
    const auto m = hex(3, 3);
    const std::string s = dump_field(Field(m, FieldType::integer_on(Locus::eV, 2)));
    EXPECT_EQ(static_cast<unsigned char>(s[4]), 1);  // version
    EXPECT_EQ(static_cast<unsigned char>(s[5]), 0);
    EXPECT_EQ(static_cast<unsigned char>(s[16]), static_cast<unsigned char>(Locus::eV));
    EXPECT_EQ(static_cast<unsigned char>(s[17]), 2);
    EXPECT_EQ(static_cast<unsigned char>(s[18]), 0);
    EXPECT_EQ(static_cast<unsigned char>(s[20]), 54);  // 2 * 27 edges
}

TEST(FieldJson, BoolAndInt) {
    const auto m = hex(3, 3);
    const json b = field_to_json(from_points(m, kBV, {2, 4}));
    EXPECT_EQ(b["type"], "boolV");
    EXPECT_EQ(b["true_points"], json::array({2, 4}));
    Field n(m, FieldType::integer_on(Locus::V, 2));
    n.set(0, 3);
    EXPECT_EQ(field_to_json(n)["values"][0], 3);
}

TEST(FieldType, Names) {
    EXPECT_EQ(type_name(kBV), "boolV");
    EXPECT_EQ(type_name(FieldType::integer_on(Locus::fE, 3)), "int3fE");
}

TEST(MediumJson, RoundTripHexAndIso) {
    for (const auto& m : {hex(8, 6), iso(150, 7)}) {
        const json j = medium_to_json(*m);
        EXPECT_EQ(j["format"], "spatial-medium");
        const Medium back = medium_from_json(json::parse(j.dump()));
        EXPECT_EQ(medium_hash(back), medium_hash(*m));
        EXPECT_EQ(back.edges, m->edges);
        EXPECT_EQ(back.owner, m->owner);
    }
}

TEST(MediumJson, RejectsTampering) {
    json j = medium_to_json(*iso(60, 1));
    json e = j;
    e["edges"][0] = {0, 0};
    EXPECT_THROW(medium_from_json(e), Error);
    json f = j;
    f["version"] = 7;
    EXPECT_THROW(medium_from_json(f), Error);
    json g = j;
    g["faces"].erase(0);
    EXPECT_THROW(medium_from_json(g), Error);
}

TEST(MediumSpec, Parses) {
    EXPECT_EQ(medium_from_spec("hex:5x4").num_vertices(), 20u);
    EXPECT_EQ(medium_from_spec("iso:50:3").num_vertices(), 50u);
    EXPECT_THROW(medium_from_spec("hex:5y4"), Error);
    EXPECT_THROW(medium_from_spec("iso:abc"), Error);
    EXPECT_THROW(medium_from_spec("/nonexistent.json"), Error);
}

TEST(SeedsJson, RoundTrip) {
    const Seeds s{{1, 2}, {30}};
    EXPECT_EQ(seeds_from_json(seeds_to_json(s)), s);
    EXPECT_THROW(seeds_from_json(json{{"x", 1}}), Error);
}
