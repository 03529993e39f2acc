#include <gtest/gtest.h>

#include "ldcalc/errors.hpp"
#include "ldcalc/generators.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/syntax.hpp"

using namespace ldc;

namespace {

Pattern pat(const Slot& s, const char* p, const Slot& o) { return Pattern{s, Term(Name(p)), o}; }
ProcessPtr store(const char* s, const char* p, const char* o) {
  return Process::stored(Triple{Name(s), Name(p), Name(o)});
}

// Free names by walking the tree with an explicit set of bound names.
void walk_free(const Process& p, std::set<Name> bound, std::set<Name>& out);
void walk_constraint(const Constraint& c, const std::set<Name>& bound, std::set<Name>& out) {
  if (c.left()) walk_constraint(*c.left(), bound, out);
  if (c.right()) walk_constraint(*c.right(), bound, out);
  if (!c.is_atom()) return;
  bool binary = c.kind() == ConstraintKind::NumLeq || c.kind() == ConstraintKind::Eq;
  for (const Slot* s : {&c.lhs(), &c.rhs()}) {
    if (s == &c.rhs() && !binary) break;
    if (!is_var(*s) && std::get<Term>(*s).is_name() && !bound.count(std::get<Term>(*s).name())) {
      out.insert(std::get<Term>(*s).name());
    }
  }
}
void walk_free(const Query& q, const std::set<Name>& bound, std::set<Name>& out) {
  auto slot = [&](const Slot& s) {
    if (!is_var(s) && std::get<Term>(s).is_name() && !bound.count(std::get<Term>(s).name())) {
      out.insert(std::get<Term>(s).name());
    }
  };
  switch (q.kind()) {
    case QueryKind::Ask:
      slot(q.pattern().subject);
      slot(q.pattern().predicate);
      slot(q.pattern().object);
      break;
    case QueryKind::Filter:
      walk_constraint(*q.constraint(), bound, out);
      break;
    case QueryKind::Choice:
    case QueryKind::Tensor:
      walk_free(*q.left(), bound, out);
      walk_free(*q.right(), bound, out);
      break;
    case QueryKind::Then:
      walk_free(*q.body(), bound, out);
      walk_free(*q.continuation(), bound, out);
      break;
    default:
      walk_free(*q.body(), bound, out);
  }
}
void walk_free(const Process& p, std::set<Name> bound, std::set<Name>& out) {
  switch (p.kind()) {
    case ProcessKind::Nothing:
      break;
    case ProcessKind::Par:
      walk_free(*p.left(), bound, out);
      walk_free(*p.right(), bound, out);
      break;
    case ProcessKind::Scope:
      bound.insert(p.bound());
      walk_free(*p.body(), bound, out);
      break;
    case ProcessKind::Query:
      walk_free(*p.as_query(), bound, out);
      break;
    case ProcessKind::Stored:
      for (const Slot* s : {&p.triple().subject, &p.triple().predicate, &p.triple().object}) {
        if (!is_var(*s) && std::get<Term>(*s).is_name() && !bound.count(std::get<Term>(*s).name())) {
          out.insert(std::get<Term>(*s).name());
        }
      }
  }
}

}  // namespace

TEST(Substitute, ChooseExample) {
  Var a{Sort::Name, "a"};
  auto q = Query::ask(pat(a, "knows", Term(Name("b2"))));
  auto r = substitute(q, {{a, Term(Name("b1"))}});
  EXPECT_EQ(*r, *Query::ask(pat(Term(Name("b1")), "knows", Term(Name("b2")))));
}

TEST(Substitute, SortErrorAndShadowing) {
  Var a{Sort::Name, "a"};
  auto q = Query::ask(pat(a, "knows", a));
  EXPECT_THROW(substitute(q, {{a, Term(Literal(std::string("x")))}}), SortError);
  auto shadow = Query::select(a, q);
  EXPECT_EQ(*substitute(shadow, {{a, Term(Name("b1"))}}), *shadow);
}

TEST(FreeNames, ScopeBindsItsName) {
  auto p = Process::scope(Name("a"), store("a", "has", "paper"));
  EXPECT_EQ(free_names(*p), (std::set<Name>{Name("has"), Name("paper")}));
}

TEST(FreeNames, SameNameFreeAndBound) {
  auto p = Process::par(store("s", "p", "o"), Process::scope(Name("s"), store("s", "p", "o")));
  EXPECT_EQ(free_names(*p), (std::set<Name>{Name("s"), Name("p"), Name("o")}));
}

TEST(FreeNames, RandomProcessesMatchWalk) {
  Generator g(11);
  for (int i = 0; i < 300; ++i) {
    auto p = g.process();
    std::set<Name> expected;
    walk_free(*p, {}, expected);
    ASSERT_EQ(free_names(*p), expected) << to_string(*p);
  }
}

TEST(Congruence, NilIsUnit) {
  auto p = store("s", "p", "o");
  EXPECT_TRUE(congruent(Process::par(p, Process::nothing()), p));
}

TEST(Congruence, Commutative) {
  auto p = store("s", "p", "o");
  auto q = Process::query(Query::ask(pat(Term(Name("s")), "p", Term(Name("o")))));
  EXPECT_TRUE(congruent(Process::par(p, q), Process::par(q, p)));
}

TEST(Congruence, ScopeFloatsOut) {
  auto q = store("c", "d", "e");
  auto left = Process::par(Process::scope(Name("a"), store("a", "p", "o")), q);
  auto right = Process::scope(Name("a"), Process::par(store("a", "p", "o"), q));
  EXPECT_EQ(to_string(*congruence_normal_form(left)), to_string(*congruence_normal_form(right)));
}

TEST(Congruence, AlphaEquivalentScopes) {
  EXPECT_TRUE(congruent(Process::scope(Name("a"), store("a", "p", "o")),
                        Process::scope(Name("b"), store("b", "p", "o"))));
  EXPECT_FALSE(congruent(Process::scope(Name("a"), store("a", "p", "o")), store("a", "p", "o")));
}

TEST(Congruence, ScopeDoesNotCaptureFreeName) {
  // new a.(a p o) | a p o keeps the two a's apart.
  auto p = Process::par(Process::scope(Name("a"), store("a", "p", "o")), store("a", "p", "o"));
  auto nf = congruence_normal_form(p);
  EXPECT_EQ(free_names(*nf), free_names(*p));
  EXPECT_TRUE(congruent(nf, p));
}

TEST(Congruence, NormalFormIsIdempotentOnRandomProcesses) {
  Generator g(5);
  for (int i = 0; i < 300; ++i) {
    auto p = g.process();
    auto nf = congruence_normal_form(p);
    ASSERT_EQ(to_string(*congruence_normal_form(nf)), to_string(*nf));
    ASSERT_EQ(free_names(*nf), free_names(*p));
  }
}

TEST(DerivedForms, ExponentZeroIsOne) {
  auto u = Query::ask(pat(Term(Name("s")), "p", Term(Name("o"))));
  EXPECT_TRUE(expand_exponent(u, 0)->is_one());
  EXPECT_EQ(*expand_exponent(u, 1), *u);
  EXPECT_EQ(*expand_exponent(u, 3), *Query::tensor(u, Query::tensor(u, u)));
}

TEST(DerivedForms, LimitUnrollsLeftNested) {
  auto u = Query::ask(pat(Term(Name("s")), "p", Term(Name("o"))));
  auto expected = Query::choice(Query::choice(Query::one(), u), Query::tensor(u, u));
  EXPECT_EQ(*expand_limit(u, 2), *expected);
  EXPECT_EQ(*optional(u), *Query::choice(u, Query::one()));
}
