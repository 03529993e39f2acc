#include <gtest/gtest.h>

#include "ldcalc/errors.hpp"
#include "ldcalc/generators.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/reduction.hpp"
#include "ldcalc/selftest.hpp"

using namespace ldc;

namespace {

std::set<std::string> nf_set(const std::vector<ProcessPtr>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(to_string(*congruence_normal_form(p)));
  return out;
}

// Naive evaluator for queries without bangs: the continuations a query may
// release when answered from (a sub-multiset of) the given stored triples.
// Tensor branches draw on disjoint parts of the store.
std::vector<ProcessPtr> answers(const QueryPtr& u, const std::vector<Triple>& store,
                                const AliasTable& alias, const Pool& pool) {
  std::vector<ProcessPtr> out;
  switch (u->kind()) {
    case QueryKind::Ask: {
      Triple asked = ground_triple(u->pattern());
      for (const auto& s : store) {
        if (triple_leq(alias, s, asked)) {
          out.push_back(Process::nothing());
          break;
        }
      }
      break;
    }
    case QueryKind::Filter:
      if (holds(*u->constraint())) out.push_back(Process::nothing());
      break;
    case QueryKind::Choice:
      out = answers(u->left(), store, alias, pool);
      for (auto& r : answers(u->right(), store, alias, pool)) out.push_back(r);
      break;
    case QueryKind::Tensor:
      for (std::size_t mask = 0; mask < (1u << store.size()); ++mask) {
        std::vector<Triple> l, r;
        for (std::size_t i = 0; i < store.size(); ++i) (mask >> i & 1 ? l : r).push_back(store[i]);
        for (const auto& a : answers(u->left(), l, alias, pool)) {
          for (const auto& b : answers(u->right(), r, alias, pool)) out.push_back(Process::par(a, b));
        }
      }
      break;
    case QueryKind::SelectName:
      for (const auto& n : pool.names) {
        for (auto& r : answers(substitute(u->body(), {{u->var(), Term(n)}}), store, alias, pool)) {
          out.push_back(r);
        }
      }
      break;
    case QueryKind::SelectLiteral:
      for (const auto& l : pool.literals) {
        for (auto& r : answers(substitute(u->body(), {{u->var(), Term(l)}}), store, alias, pool)) {
          out.push_back(r);
        }
      }
      break;
    case QueryKind::Then:
      for (auto& r : answers(u->body(), store, alias, pool)) {
        out.push_back(Process::par(r, u->continuation()));
      }
      break;
    case QueryKind::Bang:
      ADD_FAILURE() << "oracle does not handle bang";
  }
  return out;
}

std::set<std::string> naive_successors(const ProcessPtr& p, const EvalConfig& cfg) {
  FlatProcess f = flatten(p);
  Pool pool = make_pool(cfg, *p);
  std::vector<ProcessPtr> next;
  for (std::size_t i = 0; i < f.queries.size(); ++i) {
    for (const auto& r : answers(f.queries[i], f.stores, cfg.alias, pool)) {
      std::vector<ProcessPtr> parts;
      for (const auto& t : f.stores) parts.push_back(Process::stored(t));
      for (std::size_t j = 0; j < f.queries.size(); ++j) {
        if (j != i) parts.push_back(Process::query(f.queries[j]));
      }
      parts.push_back(r);
      next.push_back(Process::par_all(parts));
    }
  }
  return nf_set(next);
}

const WorkedExample& example(const std::string& name) {
  for (const auto& e : worked_examples()) {
    if (e.name == name) return e;
  }
  throw std::runtime_error("no example " + name);
}

}  // namespace

TEST(Commitments, AskGuardKeepsStoredTriple) {
  const auto& e = example("ask-guard");
  EvalConfig cfg = workspace_for(e).config();
  auto next = successors(parse_process(e.process), cfg);
  ASSERT_EQ(next.size(), 1u);
  EXPECT_TRUE(congruent(next[0], parse_process(e.expected_target)));
  EXPECT_TRUE(reduces(parse_process(e.process), parse_process(e.expected_target), cfg));
}

TEST(Commitments, AskGuardNeedsAlias) {
  const auto& e = example("ask-guard");
  EXPECT_TRUE(successors(parse_process(e.process), EvalConfig{}).empty());
}

TEST(Commitments, WorkedReductionExamples) {
  for (const auto& e : worked_examples()) {
    if (e.mode != WorkedExample::Mode::Reduction) continue;
    EXPECT_EQ(check_example(e), "") << e.name;
  }
}

TEST(Commitments, TensorSplitsTheStore) {
  auto one = parse_process("data a b c || query { ask a b c & ask a b c }");
  EXPECT_TRUE(successors(one, EvalConfig{}).empty());
  auto two = parse_process("data a b c || data a b c || query { ask a b c & ask a b c }");
  EXPECT_EQ(successors(two, EvalConfig{}).size(), 1u);
}

TEST(Commitments, IterationBoundLimitsCopies) {
  const auto& e = example("iteration");
  auto p = parse_process(e.process);
  auto both = parse_process(e.expected_target);
  EvalConfig cfg;
  cfg.iter_bound = 1;
  EXPECT_FALSE(reduces(p, both, cfg));
  cfg.iter_bound = 2;
  EXPECT_TRUE(reduces(p, both, cfg));
}

TEST(Commitments, BangWeakeningIsAStep) {
  auto p = parse_process("query { bang { ask a b c } }");
  auto next = successors(p, EvalConfig{});
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(next[0]->kind(), ProcessKind::Nothing);
}

TEST(Commitments, IllTypedFilterIsFalse) {
  auto p = parse_process("query { filter (\"a\" <= 3) }");
  EXPECT_TRUE(successors(p, EvalConfig{}).empty());
}

TEST(Commitments, OpenProcessRejected) {
  Var x{Sort::Name, "x"};
  auto q = Query::ask(Pattern{x, Term(Name("p")), Term(Name("o"))});
  EXPECT_THROW(commitments(Process::query(q), EvalConfig{}), OpenProcess);
}

TEST(Commitments, AgreeWithNaiveEvaluator) {
  Generator g(17);
  QueryShape shape;
  shape.bangs = false;
  EvalConfig cfg = g.params().config();
  int checked = 0, reducing = 0;
  while (checked < 300) {
    auto p = g.process(shape);
    if (!flatten(p).bound.empty()) continue;
    cfg.alias = g.chance(0.5) ? g.alias() : AliasTable();
    auto expected = naive_successors(p, cfg);
    ASSERT_EQ(nf_set(successors(p, cfg)), expected) << to_string(*p);
    reducing += !expected.empty();
    ++checked;
  }
  EXPECT_GT(reducing, 50);
}

TEST(Commitments, TracesReplay) {
  Generator g(23);
  EvalConfig cfg = g.params().config();
  cfg.trace = true;
  int traced = 0;
  for (int i = 0; i < 300; ++i) {
    auto p = g.process();
    for (const auto& c : commitments(p, cfg)) {
      ASSERT_TRUE(c.trace);
      ASSERT_NO_THROW(replay(*c.trace, cfg.alias)) << to_string(*p);
      const auto& j = c.trace->commit();
      ASSERT_TRUE(congruent(j.source, p));
      ASSERT_TRUE(congruent(j.target, c.target));
      ++traced;
    }
  }
  EXPECT_GT(traced, 100);
}
