#include <gtest/gtest.h>

#include <fstream>

#include "ldcalc/errors.hpp"
#include "ldcalc/frontend.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/selftest.hpp"

using namespace ldc;

TEST(ParsePool, CommaSeparatedTerms) {
  auto pool = parse_pool("b2, b3,\"x y\",7");
  ASSERT_EQ(pool.size(), 4u);
  EXPECT_EQ(pool[0], Term(Name("b2")));
  EXPECT_EQ(pool[2], Term(Literal(std::string("x y"))));
  EXPECT_EQ(pool[3], Term(Literal(std::int64_t{7})));
  EXPECT_TRUE(parse_pool("").empty());
  EXPECT_THROW(parse_pool("b2,,b3"), ParseError);
}

TEST(Workspace, PoolCoversStoreExtrasAndProcess) {
  Workspace ws;
  ws.store = parse_store("s p o .\n");
  ws.extras = parse_pool("extra");
  auto pool = ws.pool_for(parse_process("query { ask q r t }"));
  std::set<std::string> names;
  for (const auto& n : pool.names) names.insert(n.str());
  EXPECT_EQ(names, (std::set<std::string>{"s", "p", "o", "extra", "q", "r", "t"}));
}

TEST(Workspace, ReservedPrefixInAliasRejected) {
  Workspace ws;
  ws.alias = parse_alias("_:b0 <= knows\n");
  EXPECT_THROW(ws.config(), Error);
}

TEST(Reports, EvalAskGuard) {
  const WorkedExample* e = nullptr;
  for (const auto& x : worked_examples()) {
    if (x.name == "ask-guard") e = &x;
  }
  ASSERT_TRUE(e);
  auto text = eval_report(workspace_for(*e), parse_process(e->process));
  EXPECT_EQ(text.rfind("format-version: 1\ncommand: eval\n", 0), 0u);
  EXPECT_NE(text.find("successors: 1\n=> data song0 heard yes || data song0 lyricist b4\n"),
            std::string::npos);
}

TEST(Reports, StoreIsAttached) {
  Workspace ws;
  ws.store = parse_store("b4 knows b3 .\n");
  auto text = eval_report(ws, parse_process("query { ask b4 knows b3 then { data b4 seen b3 } }"));
  EXPECT_NE(text.find("successors: 1"), std::string::npos);
}

TEST(Reports, StepIsDeterministicPerSeed) {
  Workspace ws;
  auto p = parse_process(
      "query { bang { select ?c { ask ?c is busy then { data ?c notified yes } } } }"
      " || data b2 is busy || data b3 is busy");
  EXPECT_EQ(step_report(ws, p, 3, 9), step_report(ws, p, 3, 9));
  auto text = step_report(ws, p, 3, 9);
  EXPECT_NE(text.find("seed: 9\n0: "), std::string::npos);
  EXPECT_NE(text.find("stuck after 1 steps"), std::string::npos);
}

TEST(Reports, GoldensMatch) {
  for (const auto& e : worked_examples()) {
    std::ifstream in(std::string(LDCALC_GOLDEN_DIR) + "/" + e.name + ".golden");
    ASSERT_TRUE(in) << e.name;
    std::string golden((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(example_report(e), golden) << e.name;
  }
}

TEST(ExitCode, Verdicts) {
  BisimResult r;
  r.verdict = Verdict::Bisimilar;
  EXPECT_EQ(exit_code(r), 0);
  r.verdict = Verdict::Distinguished;
  EXPECT_EQ(exit_code(r), 1);
  r.verdict = Verdict::Inconclusive;
  EXPECT_EQ(exit_code(r), 2);
}

TEST(ReadFile, Missing) { EXPECT_THROW(read_file("/nonexistent/ldcalc/file"), Error); }
