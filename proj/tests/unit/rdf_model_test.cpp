#include <gtest/gtest.h>

#include <random>

#include "ldcalc/errors.hpp"
#include "ldcalc/rdf_model.hpp"

using namespace ldc;

namespace {

Triple tr(const char* s, const char* p, const char* o) { return Triple{Name(s), Name(p), Name(o)}; }

// Reflexive-transitive closure by composing the relation with itself until
// nothing changes.
std::set<NamePair> closure_by_composition(const std::set<NamePair>& base,
                                          const std::set<Name>& names) {
  std::set<NamePair> rel = base;
  for (const auto& n : names) rel.emplace(n, n);
  for (;;) {
    std::set<NamePair> next = rel;
    for (const auto& [a, b] : rel) {
      for (const auto& [c, d] : rel) {
        if (b == c) next.emplace(a, d);
      }
    }
    if (next == rel) return rel;
    rel = std::move(next);
  }
}

}  // namespace

TEST(Name, InternedEquality) {
  EXPECT_EQ(Name("b4"), Name(std::string("b4")));
  EXPECT_NE(Name("b4"), Name("b3"));
  EXPECT_TRUE(Name("a") < Name("b"));
  EXPECT_FALSE(Name("a") < Name("a"));
}

TEST(Literal, StringNeverEqualsInteger) {
  EXPECT_NE(Literal(std::string("3")), Literal(std::int64_t{3}));
  EXPECT_TRUE(Literal(std::int64_t{9}) < Literal(std::string("0")));
  EXPECT_NE(Term(Name("3x")), Term(Literal(std::string("3x"))));
}

TEST(AliasTable, LyricistBelowCreator) {
  AliasTable t({{Name("lyricist"), Name("creator")}});
  EXPECT_TRUE(name_leq(t, Name("lyricist"), Name("creator")));
  EXPECT_FALSE(name_leq(t, Name("creator"), Name("lyricist")));
  EXPECT_TRUE(name_leq(t, Name("unrelated"), Name("unrelated")));
}

TEST(AliasTable, Transitive) {
  AliasTable t({{Name("a"), Name("b")}, {Name("b"), Name("c")}});
  EXPECT_TRUE(t.leq(Name("a"), Name("c")));
  EXPECT_FALSE(t.leq(Name("c"), Name("a")));
}

TEST(AliasTable, CycleClosesToAllPairs) {
  AliasTable t({{Name("a"), Name("b")}, {Name("b"), Name("a")}});
  std::set<NamePair> expected = {{Name("a"), Name("a")},
                                 {Name("a"), Name("b")},
                                 {Name("b"), Name("a")},
                                 {Name("b"), Name("b")}};
  EXPECT_EQ(closure(t, {Name("a"), Name("b")}), expected);
}

TEST(AliasTable, RandomTablesMatchCompositionOracle) {
  std::mt19937_64 rng(7);
  std::vector<Name> names;
  for (int i = 0; i < 6; ++i) names.emplace_back("m" + std::to_string(i));
  std::set<Name> universe(names.begin(), names.end());
  for (int round = 0; round < 200; ++round) {
    std::vector<NamePair> pairs;
    std::size_t n = rng() % 7;
    for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(names[rng() % 6], names[rng() % 6]);
    AliasTable t(pairs);
    std::set<NamePair> base(pairs.begin(), pairs.end());
    ASSERT_EQ(closure(t, universe), closure_by_composition(base, universe)) << "round " << round;
  }
}

TEST(TripleLeq, PointwiseAsInAskGuardExample) {
  AliasTable t({{Name("lyricist"), Name("creator")}, {Name("song0"), Name("song1")}});
  EXPECT_TRUE(triple_leq(t, tr("song0", "lyricist", "b4"), tr("song1", "creator", "b4")));
  EXPECT_FALSE(triple_leq(t, tr("song1", "creator", "b4"), tr("song0", "lyricist", "b4")));
}

TEST(TripleLeq, LiteralsStayFixed) {
  AliasTable t({{Name("p"), Name("q")}});
  Triple c{Name("s"), Name("p"), Literal(std::string("x"))};
  Triple d{Name("s"), Name("q"), Literal(std::string("y"))};
  Triple e{Name("s"), Name("q"), Literal(std::string("x"))};
  EXPECT_FALSE(triple_leq(t, c, d));
  EXPECT_TRUE(triple_leq(t, c, e));
  EXPECT_FALSE(triple_leq(t, Triple{Name("s"), Name("p"), Name("x")}, e));
}

TEST(TripleLeq, DownsetAndUpsetAgreeWithLeq) {
  AliasTable t({{Name("a"), Name("b")}, {Name("b"), Name("c")}, {Name("k"), Name("knows")}});
  Triple x = tr("b", "knows", "b");
  for (const auto& d : triple_downset(t, x)) EXPECT_TRUE(triple_leq(t, d, x));
  for (const auto& u : triple_upset(t, x)) EXPECT_TRUE(triple_leq(t, x, u));
  EXPECT_EQ(triple_downset(t, x).size(), 2u * 2u * 2u);
  EXPECT_EQ(triple_upset(t, x).size(), 2u * 1u * 2u);
}

TEST(ParseAlias, CommentsAndBrackets) {
  AliasTable t = parse_alias("# header\nlyricist <= creator\n\n<http://x/a> <= b  # tail\n");
  EXPECT_EQ(t.assumptions().size(), 2u);
  EXPECT_TRUE(t.leq(Name("http://x/a"), Name("b")));
}

TEST(ParseAlias, RejectsMalformedLines) {
  try {
    parse_alias("a <= b\na b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_alias("a <= \"lit\"\n"), ParseError);
}

TEST(Printing, BareAndBracketedNames) {
  EXPECT_EQ(to_string(Name("starr.uk")), "starr.uk");
  EXPECT_EQ(to_string(Name("ask")), "<ask>");
  EXPECT_EQ(to_string(Name("42")), "<42>");
  EXPECT_EQ(to_string(Name("a b")), "<a b>");
  EXPECT_EQ(to_string(Literal(std::string("say \"hi\""))), "\"say \\\"hi\\\"\"");
  EXPECT_EQ(to_string(tr("b4", "home", "starr.uk")), "b4 home starr.uk");
}
