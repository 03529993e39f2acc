#include <gtest/gtest.h>

#include "ldcalc/equivalence.hpp"
#include "ldcalc/errors.hpp"
#include "ldcalc/generators.hpp"
#include "ldcalc/lts.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/reduction.hpp"
#include "ldcalc/selftest.hpp"

using namespace ldc;

namespace {

ProcessPtr proc(const char* text) { return parse_process(text); }

// Greatest bisimulation by deleting violating pairs until stable.
bool naive_bisimilar(const StateSpace& s, std::size_t a, std::size_t b) {
  const std::size_t n = s.states.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, true));
  auto matched = [&](std::size_t x, std::size_t y) {
    for (const auto& [l, x2] : s.edges[x]) {
      bool ok = false;
      for (const auto& [m, y2] : s.edges[y]) ok = ok || (l == m && rel[x2][y2]);
      if (!ok) return false;
    }
    return true;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (rel[x][y] && !(matched(x, y) && matched(y, x))) {
          rel[x][y] = false;
          changed = true;
        }
      }
    }
  }
  return rel[a][b];
}

// Swaps operands of choices and tensors at random; the result is
// bisimilar but generally not congruent.
QueryPtr shuffle(const QueryPtr& q, Generator& g);
ProcessPtr shuffle(const ProcessPtr& p, Generator& g) {
  switch (p->kind()) {
    case ProcessKind::Par:
      return Process::par(shuffle(p->left(), g), shuffle(p->right(), g));
    case ProcessKind::Scope:
      return Process::scope(p->bound(), shuffle(p->body(), g));
    case ProcessKind::Query:
      return Process::query(shuffle(p->as_query(), g));
    default:
      return p;
  }
}
QueryPtr shuffle(const QueryPtr& q, Generator& g) {
  switch (q->kind()) {
    case QueryKind::Choice:
    case QueryKind::Tensor: {
      auto l = shuffle(q->left(), g), r = shuffle(q->right(), g);
      if (g.chance(0.5)) std::swap(l, r);
      return q->kind() == QueryKind::Choice ? Query::choice(l, r) : Query::tensor(l, r);
    }
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral:
      return Query::select(q->var(), shuffle(q->body(), g));
    case QueryKind::Bang:
      return Query::bang(shuffle(q->body(), g));
    case QueryKind::Then:
      return Query::then(shuffle(q->body(), g), shuffle(q->continuation(), g));
    default:
      return q;
  }
}

}  // namespace

TEST(Bisimilar, ParallelCommutes) {
  auto p = proc("data b1 knows b2");
  auto q = proc("query { select ?a { ask ?a knows b2 then { data ?a met b2 } } }");
  auto r = bisimilar(Process::par(p, q), Process::par(q, p), EvalConfig{}, 3);
  EXPECT_EQ(r.verdict, Verdict::Bisimilar);
}

TEST(Bisimilar, AskAgainstZero) {
  auto p = proc("query { ask b1 knows b2 then { nil } }");
  auto q = proc("query { filter (false) }");
  auto r = bisimilar(p, q, EvalConfig{}, 3);
  ASSERT_EQ(r.verdict, Verdict::Distinguished);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(to_string(*r.witness), "<--in: b1 knows b2-->tt");
  ASSERT_EQ(r.path.size(), 1u);
  EXPECT_EQ(to_string(r.path[0]), "--in: b1 knows b2--");
  EXPECT_TRUE(models(p, *r.witness, EvalConfig{}));
  EXPECT_FALSE(models(q, *r.witness, EvalConfig{}));
}

TEST(Bisimilar, ReportNamesItsParameters) {
  auto p = proc("data a b c");
  auto r = bisimilar(p, p, EvalConfig{}, 2);
  auto text = to_string(r);
  EXPECT_NE(text.find("verdict: bisimilar"), std::string::npos);
  EXPECT_NE(text.find("relative-to: pool="), std::string::npos);
  EXPECT_NE(text.find("iter_bound=2"), std::string::npos);
  EXPECT_NE(text.find("depth=2"), std::string::npos);
}

TEST(Bisimilar, StateCap) {
  EvalConfig cfg;
  cfg.state_cap = 2;
  auto p = proc("query { bang { select ?a { ask ?a p o then { data ?a p o } } } } || data x p o");
  EXPECT_THROW(bisimilar(p, proc("nil"), cfg, 5), StateExplosion);
}

TEST(Bisimilar, IdenticalUnderTruncation) {
  // A never-ending producer: at depth 1 nothing beyond the first step is known.
  auto p = proc("query { bang { ask a p o then { data a p o } } } || data a p o");
  auto r = bisimilar(p, p, EvalConfig{}, 1);
  EXPECT_EQ(r.verdict, Verdict::Bisimilar);
}

TEST(Bisimilar, AgreesWithNaiveFixpoint) {
  Generator g(31);
  EvalConfig cfg = g.params().config();
  int pairs = 0, distinguished = 0, bisim = 0;
  for (int round = 0; round < 2000 && pairs < 150; ++round) {
    auto p = g.process();
    auto q = g.chance(0.6) ? shuffle(p, g) : g.process();
    StateSpace s = explore({p, q}, cfg, 6);
    if (s.truncated) continue;
    auto r = bisimilar(p, q, cfg, 6);
    ASSERT_NE(r.verdict, Verdict::Inconclusive);
    bool expected = naive_bisimilar(s, *s.find(*congruence_normal_form(p)),
                                    *s.find(*congruence_normal_form(q)));
    ASSERT_EQ(r.verdict == Verdict::Bisimilar, expected) << to_string(*p) << "\n" << to_string(*q);
    if (r.verdict == Verdict::Distinguished) {
      ASSERT_TRUE(r.witness);
      ASSERT_TRUE(models(p, *r.witness, cfg)) << to_string(*r.witness);
      ASSERT_FALSE(models(q, *r.witness, cfg)) << to_string(*r.witness);
      ++distinguished;
    } else {
      ++bisim;
    }
    ++pairs;
  }
  EXPECT_EQ(pairs, 150);
  EXPECT_GT(distinguished, 10);
  EXPECT_GT(bisim, 10);
}

TEST(QueryLeq, Reflexive) {
  Generator g(8);
  EvalConfig cfg = g.params().config();
  for (int i = 0; i < 30; ++i) {
    auto u = g.query(2);
    EXPECT_EQ(query_leq(u, u, cfg, 3).verdict, Verdict::Bisimilar) << to_string(*u);
  }
}

TEST(QueryLeq, OptionalNesting) {
  auto inst = optional_nesting_instance();
  EvalConfig cfg;
  for (const auto& t : inst.distinguishing_store) {
    for (const Name& n : {t.subject, t.predicate}) cfg.universe.insert(Term(n));
    cfg.universe.insert(t.object);
  }
  EXPECT_EQ(query_leq(inst.stronger, inst.weaker, cfg, 3).verdict, Verdict::Bisimilar);
  auto reverse = query_leq(inst.weaker, inst.stronger, cfg, 3);
  ASSERT_EQ(reverse.verdict, Verdict::Distinguished);
  EXPECT_TRUE(reverse.witness);
}

TEST(QueryLeq, AliasOneDirection) {
  EvalConfig cfg;
  cfg.alias = parse_alias("colleague <= knows\n");
  auto c = parse_query("ask b4 colleague b3");
  auto d = parse_query("ask b4 knows b3");
  EXPECT_EQ(query_leq(c, d, cfg, 3).verdict, Verdict::Bisimilar);
  EXPECT_EQ(query_leq(d, c, cfg, 3).verdict, Verdict::Distinguished);
}

TEST(Contextual, CommutedParallelHasNoCounterexample) {
  auto p = proc("data b1 knows b2");
  auto q = proc("query { ask b1 knows b2 then { data b1 met b2 } }");
  EXPECT_FALSE(contextual_counterexample(Process::par(p, q), Process::par(q, p), EvalConfig{}, 3));
}

TEST(Contextual, StoredTripleAgainstNothing) {
  auto t = proc("data b1 knows b2");
  auto nil = Process::nothing();
  auto ctx = contextual_counterexample(t, nil, EvalConfig{}, 3);
  ASSERT_TRUE(ctx);
  EXPECT_FALSE(congruent(plug(*ctx, t), plug(*ctx, nil)));
  // The asking context tells them apart through commitments alone.
  Context ask{{proc("query { ask b1 knows b2 then { data done is yes } }")}};
  EXPECT_EQ(successors(plug(ask, t), EvalConfig{}).size(), 1u);
  EXPECT_TRUE(successors(plug(ask, nil), EvalConfig{}).empty());
}

TEST(Contextual, GuardNeedsItsTriple) {
  // Reduction-equivalent in isolation; a stored triple from the context
  // lets only one of them move.
  auto p = proc("query { ask b1 knows b2 then { data b1 met b2 } }");
  auto q = proc("query { ask b1 knows b3 then { data b1 met b2 } }");
  EXPECT_TRUE(successors(p, EvalConfig{}).empty());
  EXPECT_TRUE(successors(q, EvalConfig{}).empty());
  auto ctx = contextual_counterexample(p, q, EvalConfig{}, 3);
  ASSERT_TRUE(ctx);
  EXPECT_NE(successors(plug(*ctx, p), EvalConfig{}).size() +
                successors(plug(*ctx, q), EvalConfig{}).size(),
            0u);
  EXPECT_NE(to_string(*ctx).find("[.]"), std::string::npos);
}
