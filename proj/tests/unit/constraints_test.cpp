#include <gtest/gtest.h>

#include <random>

#include "ldcalc/constraints.hpp"
#include "ldcalc/errors.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/regex.hpp"

using namespace ldc;

namespace {

Slot str(const char* s) { return Term(Literal(std::string(s))); }
Slot num(std::int64_t n) { return Term(Literal(n)); }

}  // namespace

TEST(Satisfies, JohnFitsInFive) {
  EXPECT_TRUE(satisfies(*Constraint::len_leq(str("John"), 5)));
  EXPECT_FALSE(satisfies(*Constraint::len_leq(str("Johnathan"), 5)));
}

TEST(Satisfies, LengthCountsCodepoints) {
  EXPECT_TRUE(satisfies(*Constraint::len_leq(str("\xc3\xa9t\xc3\xa9"), 3)));
}

TEST(Satisfies, TruthTable) {
  auto re = Constraint::regex(str("abc"), "a.*");
  auto le = Constraint::num_leq(num(3), num(2));
  EXPECT_TRUE(satisfies(*Constraint::conj(re, Constraint::neg(le))));
  // Every combination of two atoms under and/or/not against direct evaluation.
  std::vector<ConstraintPtr> atoms = {re, le, Constraint::truth(), Constraint::falsity(),
                                      Constraint::eq(str("x"), str("x"))};
  std::vector<bool> value = {true, false, true, false, true};
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      EXPECT_EQ(satisfies(*Constraint::conj(atoms[i], atoms[j])), value[i] && value[j]);
      EXPECT_EQ(satisfies(*Constraint::disj(atoms[i], atoms[j])), value[i] || value[j]);
      EXPECT_EQ(satisfies(*Constraint::neg(atoms[i])), !value[i]);
    }
  }
}

TEST(Satisfies, IllTypedAtoms) {
  auto c = Constraint::num_leq(str("a"), num(1));
  EXPECT_THROW(satisfies(*c), TypeMismatch);
  EXPECT_FALSE(holds(*c));
  EXPECT_FALSE(holds(*Constraint::len_leq(Term(Name("n")), 4)));
}

TEST(Satisfies, NonGround) {
  Var x{Sort::Literal, "x"};
  auto c = Constraint::len_leq(x, 3);
  EXPECT_THROW(satisfies(*c), NonGroundConstraint);
  EXPECT_THROW(holds(*c), NonGroundConstraint);
  auto g = substitute(c, {{x, Term(Literal(std::string("ab")))}});
  EXPECT_TRUE(satisfies(*g));
  EXPECT_TRUE(free_vars(*g).empty());
}

TEST(Implies, FiniteUniverse) {
  Var x{Sort::Literal, "x"};
  std::vector<Term> u = {Literal(std::string("ab")), Literal(std::string("abcdef"))};
  EXPECT_TRUE(implies(*Constraint::len_leq(x, 3), *Constraint::len_leq(x, 5), {x}, u));
  EXPECT_FALSE(implies(*Constraint::len_leq(x, 7), *Constraint::len_leq(x, 5), {x}, u));
  EXPECT_TRUE(implies(*Constraint::falsity(), *Constraint::len_leq(x, 0), {x}, u));
}

TEST(Implies, NameVariablesRangeOverNames) {
  Var a{Sort::Name, "a"};
  std::vector<Term> u = {Name("n0"), Name("n1"), Literal(std::int64_t{1})};
  auto is_n0 = Constraint::eq(a, Term(Name("n0")));
  EXPECT_FALSE(implies(*Constraint::truth(), *is_n0, {a}, u));
  auto either = Constraint::disj(is_n0, Constraint::eq(a, Term(Name("n1"))));
  EXPECT_TRUE(implies(*Constraint::truth(), *either, {a}, u));
}

TEST(Regex, Dialect) {
  EXPECT_TRUE(Regex::compile("P.*").full_match("Paul"));
  EXPECT_FALSE(Regex::compile("P.*").full_match("aPaul"));
  EXPECT_TRUE(Regex::compile("(ab|c)*").full_match("abcab"));
  EXPECT_FALSE(Regex::compile("(ab|c)*").full_match("abca"));
  EXPECT_TRUE(Regex::compile("a\\*").full_match("a*"));
  EXPECT_TRUE(Regex::compile("").full_match(""));
  EXPECT_THROW(Regex::compile("(a"), Error);
  EXPECT_THROW(Regex::compile("*a"), Error);
}

TEST(Regex, AgreesWithExhaustiveAlternation) {
  // a(b|c)* over all strings of {a,b,c} up to length 4, checked by hand rule.
  auto re = Regex::compile("a(b|c)*");
  std::vector<std::string> words = {""};
  for (int len = 0; len < 4; ++len) {
    std::vector<std::string> next;
    for (const auto& w : words) {
      if (static_cast<int>(w.size()) == len) {
        for (char c : std::string("abc")) next.push_back(w + c);
      }
    }
    words.insert(words.end(), next.begin(), next.end());
  }
  for (const auto& w : words) {
    bool expected = !w.empty() && w[0] == 'a' && w.find('a', 1) == std::string::npos;
    EXPECT_EQ(re.full_match(w), expected) << w;
  }
}

TEST(ConstraintText, RoundTrip) {
  Var x{Sort::Literal, "x"};
  for (const char* text : {"(len(?l:x) <= 5 && ?l:x ~ \"a.*\")", "!((3 <= ?l:x || ?l:x == \"ab\"))",
                           "true", "false"}) {
    auto c = parse_constraint(text, {x});
    EXPECT_EQ(*parse_constraint(to_string(*c), {x}), *c) << text;
  }
}
