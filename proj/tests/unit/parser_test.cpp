#include <gtest/gtest.h>

#include "ldcalc/errors.hpp"
#include "ldcalc/generators.hpp"
#include "ldcalc/label.hpp"
#include "ldcalc/parser.hpp"

using namespace ldc;

TEST(ParseStore, ExampleTriple) {
  auto s = parse_store("b4 home starr.uk .\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (Triple{Name("b4"), Name("home"), Name("starr.uk")}));
}

TEST(ParseStore, LiteralsAndComments) {
  auto s = parse_store("# people\nb1 name \"John\" .\nb1 age 42 . # trailing\n\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].object, Term(Literal(std::string("John"))));
  EXPECT_EQ(s[1].object, Term(Literal(std::int64_t{42})));
}

TEST(ParseStore, Empty) { EXPECT_TRUE(parse_store("").empty()); }

TEST(ParseStore, LiteralInSubject) {
  EXPECT_THROW(parse_store("\"x\" p o .\n"), LiteralInSubject);
  EXPECT_THROW(parse_store("s 3 o .\n"), LiteralInSubject);
}

TEST(ParseStore, PositionOfError) {
  try {
    parse_store("a b c .\na b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseQuery, OptionalIsChoiceWithOne) {
  auto q = parse_query("optional { ask b2 email e }");
  ASSERT_EQ(q->kind(), QueryKind::Choice);
  EXPECT_EQ(*q->left(), *parse_query("ask b2 email e"));
  EXPECT_TRUE(q->right()->is_one());
}

TEST(ParseQuery, ExponentZero) { EXPECT_TRUE(parse_query("ask s p o ^ 0")->is_one()); }

TEST(ParseQuery, LimitExpands) {
  auto q = parse_query("ask s p o limit 2");
  EXPECT_EQ(*q, *expand_limit(parse_query("ask s p o"), 2));
}

TEST(ParseQuery, VariableSorts) {
  auto q = parse_query("select ?a { select ?l:x { ask ?a name ?l:x } }");
  ASSERT_EQ(q->kind(), QueryKind::SelectName);
  EXPECT_EQ(q->body()->kind(), QueryKind::SelectLiteral);
}

TEST(ParseQuery, UnboundVariable) {
  try {
    parse_query("select ?a { ask ?a p ?b }");
    FAIL();
  } catch (const UnboundVariable& e) {
    EXPECT_EQ(e.variable(), "?b");
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(ParseQuery, LiteralVariableInSubject) {
  EXPECT_THROW(parse_query("select ?l:x { ask ?l:x p o }"), ParseError);
}

TEST(ParseQuery, Malformed) {
  EXPECT_THROW(parse_query("ask s p"), ParseError);
  EXPECT_THROW(parse_query("ask s p o +"), ParseError);
  EXPECT_THROW(parse_query("filter (?l:x ~ \"(\")"), ParseError);
}

TEST(ParseProcess, Forms) {
  auto p = parse_process("new a { data a p o || query { ask a p o } } || nil");
  EXPECT_EQ(p->kind(), ProcessKind::Par);
  EXPECT_EQ(p->left()->kind(), ProcessKind::Scope);
  EXPECT_EQ(parse_program("ask s p o")->kind(), ProcessKind::Query);
}

TEST(RoundTrip, RandomQueries) {
  Generator g(2024);
  for (int i = 0; i < 500; ++i) {
    auto q = g.query(1 + i % 4);
    auto text = to_string(*q);
    auto back = parse_query(text);
    ASSERT_EQ(*back, *q) << text;
    ASSERT_EQ(to_string(*back), text);
  }
}

TEST(RoundTrip, RandomProcesses) {
  Generator g(99);
  for (int i = 0; i < 500; ++i) {
    auto p = g.process();
    auto text = to_string(*p);
    ASSERT_EQ(*parse_process(text), *p) << text;
  }
}

TEST(RoundTrip, StoresAndLabels) {
  Generator g(3);
  for (int i = 0; i < 200; ++i) {
    auto s = g.store();
    std::string text;
    for (const auto& t : s) text += to_string(t) + " .\n";
    ASSERT_EQ(parse_store(text), s);
    std::vector<Name> ex;
    if (!s.empty() && g.chance(0.5)) ex.push_back(s[0].subject);
    Label l = g.chance(0.5) ? Label::input(s) : Label::output(ex, s);
    ASSERT_EQ(parse_label(to_string(l)), l) << to_string(l);
  }
}

TEST(RoundTrip, OddNamesAndEscapes) {
  auto q = parse_query("ask <ask> <has space> \"quote \\\" and \\\\\"");
  EXPECT_EQ(*parse_query(to_string(*q)), *q);
}
