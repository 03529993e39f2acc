#include <gtest/gtest.h>

#include "ldcalc/algebra.hpp"
#include "ldcalc/errors.hpp"
#include "ldcalc/generators.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/selftest.hpp"

using namespace ldc;

namespace {

QueryPtr q(const char* text) { return parse_query(text); }

bool in_catalog(const std::string& name) {
  for (const auto& law : law_catalog()) {
    if (law.name == name) return true;
  }
  return false;
}

EvalConfig small_pool() {
  EvalConfig cfg;
  cfg.universe = {Term(Name("n0")), Term(Name("n1")), Term(Name("n2"))};
  return cfg;
}

}  // namespace

TEST(Catalog, ContainsCoreLaws) {
  EXPECT_TRUE(in_catalog("tensor-distributes-over-choice"));
  EXPECT_TRUE(in_catalog("choice-idempotent"));
  EXPECT_TRUE(in_catalog("then-then"));
  const Law& tt = find_law("then-then");
  EXPECT_EQ(tt.orientation, Orientation::Equation);
  EXPECT_TRUE(tt.rewrite);
  EXPECT_THROW(find_law("no-such-law"), Error);
}

TEST(Catalog, RewritesMatchTheirShape) {
  auto r = find_law("choice-idempotent").rewrite(q("ask a b c + ask a b c"));
  ASSERT_TRUE(r);
  EXPECT_EQ(**r, *q("ask a b c"));
  EXPECT_FALSE(find_law("choice-idempotent").rewrite(q("ask a b c + ask a b d")));
  auto t = find_law("then-then").rewrite(q("(ask a b c then { data x y z }) then { data u v w }"));
  ASSERT_TRUE(t);
  EXPECT_TRUE(congruent(Process::query(*t),
                        Process::query(q("ask a b c then { data x y z || data u v w }"))));
}

TEST(Catalog, LawsHoldOnSmallSamples) {
  Generator g(5);
  for (const auto& law : law_catalog()) {
    if (!law.instantiate) continue;
    int done = 0;
    for (int tries = 0; done < 5 && tries < 200; ++tries) {
      auto inst = law.instantiate(g);
      if (!inst) continue;
      auto r = bisimilar(inst->lhs, inst->cfg_lhs, inst->rhs, inst->cfg_rhs, 3);
      ASSERT_NE(r.verdict, Verdict::Inconclusive) << law.name;
      ASSERT_EQ(r.verdict == Verdict::Bisimilar, inst->expected)
          << law.name << ": " << to_string(*inst->lhs) << " vs " << to_string(*inst->rhs);
      ++done;
    }
    EXPECT_EQ(done, 5) << law.name;
  }
}

TEST(Normalize, TensorDistributes) {
  auto r = normalize(q("ask a p b & (ask c p d + ask e p f)"));
  EXPECT_EQ(*r.output, *q("(ask a p b & ask c p d) + (ask a p b & ask e p f)"));
  ASSERT_FALSE(r.applied.empty());
  EXPECT_EQ(r.applied[0].law, "tensor-distributes-over-choice");
  EXPECT_EQ(to_string(r.applied[0].path), "root");
  EXPECT_EQ(*replay(r), *r.output);
  certify(r, small_pool(), 3);
  EXPECT_TRUE(r.certified);
}

TEST(Normalize, SelectScopedOverItsUse) {
  auto in = q("select ?a { ask ?a p n0 } & ask n1 p n2");
  auto r = normalize(in);
  ASSERT_EQ(r.output->kind(), QueryKind::Tensor);
  EXPECT_EQ(r.output->left()->kind(), QueryKind::SelectName);
  EXPECT_EQ(r.output->right()->kind(), QueryKind::Ask);
  certify(r, small_pool(), 3);
  EXPECT_TRUE(r.certified) << r.certificate;
}

TEST(Normalize, RandomQueriesReplayAndCertify) {
  Generator g(12);
  EvalConfig cfg = g.params().config();
  for (int i = 0; i < 60; ++i) {
    auto u = g.query(3);
    auto r = normalize(u);
    ASSERT_EQ(*replay(r), *r.output) << to_string(*u);
    ASSERT_EQ(*normalize(r.output).output, *r.output) << to_string(*u);
    certify(r, cfg, 3);
    ASSERT_TRUE(r.certified) << to_string(*u) << "\n" << r.certificate;
  }
}

TEST(Normalize, OpenQueryRejected) {
  Var a{Sort::Name, "a"};
  EXPECT_THROW(normalize(Query::ask(Pattern{a, Term(Name("p")), Term(Name("o"))})), OpenQuery);
}

TEST(Replay, MismatchedStepThrows) {
  auto r = normalize(q("ask a p b & (ask c p d + ask e p f)"));
  r.applied[0].law = "choice-idempotent";
  EXPECT_THROW(replay(r), Error);
}

TEST(Paths, SubtermAndReplace) {
  auto u = q("ask a p b & (ask c p d + ask e p f)");
  EXPECT_EQ(*subterm(u, {1, 0}), *q("ask c p d"));
  EXPECT_EQ(to_string(Path{1, 0}), "1.0");
  auto v = replace(u, {1, 0}, q("ask x p y"));
  EXPECT_EQ(*v, *q("ask a p b & (ask x p y + ask e p f)"));
}

TEST(Prune, DropsExactlyTheDominatedBranches) {
  Generator g(19);
  EvalConfig cfg = g.params().config();
  int pruned = 0, kept = 0;
  for (int i = 0; i < 40; ++i) {
    auto v = g.query(1);
    auto w = g.query(1);
    // (W & V) + V: the left branch is dominated exactly when query_leq says so.
    auto in = Query::choice(Query::tensor(w, v), v);
    bool dominated = query_leq(Query::tensor(w, v), v, cfg, 3).verdict == Verdict::Bisimilar;
    auto r = prune_dominated(in, cfg, 3);
    bool dropped = r.output->kind() != QueryKind::Choice;
    if (dominated) {
      EXPECT_TRUE(dropped) << to_string(*in);
    } else {
      EXPECT_EQ(*r.output, *in) << to_string(*in);
    }
    EXPECT_EQ(bisimilar(Process::query(in), Process::query(r.output), cfg, 3).verdict,
              Verdict::Bisimilar)
        << to_string(*in);
    (dropped ? pruned : kept)++;
  }
  EXPECT_GT(pruned, 0);
  EXPECT_GT(kept, 0);
}

TEST(Prune, RecordsSide) {
  EvalConfig cfg;
  auto r = prune_dominated(q("filter (false) + ask a b c"), cfg, 3);
  EXPECT_EQ(*r.output, *q("ask a b c"));
  ASSERT_EQ(r.applied.size(), 1u);
  EXPECT_EQ(r.applied[0].law, "prune-left");
}

TEST(Distribution, WorkedExample) {
  auto r = factor_for_distribution(distribution_example(), distribution_config(), 3);
  EXPECT_EQ(*r.output, *distribution_expected());
  EXPECT_TRUE(r.certified);
  EXPECT_FALSE(r.applied.empty());
  EXPECT_EQ(r.applied[0].law, "bang-select-factor");
}

TEST(Distribution, RandomInstancesCertified) {
  Generator g(29);
  DeskParams small;
  small.names.resize(3);
  small.literals.erase(small.literals.begin() + 1, small.literals.end());
  EvalConfig cfg = small.config();
  int applied = 0;
  for (int i = 0; i < 20; ++i) {
    Var a{Sort::Name, "a"};
    std::vector<Var> vars{a};
    auto left = Query::then(Query::ask(Pattern{a, Term(g.name()), Term(g.name())}),
                            g.continuation(vars));
    auto right = Query::then(Query::ask(Pattern{a, Term(g.name()), Term(g.name())}),
                             g.continuation(vars));
    auto in = Query::bang(Query::select(a, Query::choice(left, right)));
    auto r = factor_for_distribution(in, cfg, 3);
    if (r.applied.empty()) {
      EXPECT_EQ(*r.output, *in);
      continue;
    }
    ASSERT_TRUE(r.certified) << to_string(*in);
    ASSERT_EQ(bisimilar(Process::query(in), Process::query(r.output), cfg, 3).verdict,
              Verdict::Bisimilar);
    ++applied;
  }
  EXPECT_GT(applied, 10);
}

TEST(BooleanEmbed, ConnectivesBecomeChoiceAndTensor) {
  auto a = parse_constraint("len(\"ab\") <= 3");
  auto b = parse_constraint("\"ab\" ~ \"a.*\"");
  EXPECT_EQ(*boolean_embed(Constraint::disj(a, b)),
            *Query::choice(boolean_embed(a), boolean_embed(b)));
  EXPECT_EQ(*boolean_embed(Constraint::conj(a, b)),
            *Query::tensor(boolean_embed(a), boolean_embed(b)));
  EXPECT_TRUE(boolean_embed(Constraint::truth())->is_one());
  EXPECT_TRUE(boolean_embed(Constraint::falsity())->is_zero());
}

TEST(BooleanEmbed, ReflectsImplication) {
  Generator g(47);
  Var x{Sort::Literal, "x"};
  std::vector<Term> universe = {Literal(std::string("ab")), Literal(std::int64_t{3}),
                                Literal(std::string("abcd"))};
  for (int i = 0; i < 100; ++i) {
    auto p = g.constraint({x}, 2);
    auto r = g.constraint({x}, 2);
    ASSERT_TRUE(embed_reflects(p, r, {x}, universe)) << to_string(*p) << " => " << to_string(*r);
  }
}

TEST(RewriteReport, Text) {
  auto r = normalize(q("ask a p b & (ask c p d + ask e p f)"));
  auto text = to_string(r);
  EXPECT_NE(text.find("LAW tensor-distributes-over-choice AT root"), std::string::npos);
}
