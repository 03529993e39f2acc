#include "ldcalc/selftest.hpp"

#include <chrono>
#include <set>
#include <sstream>

#include "ldcalc/algebra.hpp"
#include "ldcalc/equivalence.hpp"
#include "ldcalc/errors.hpp"
#include "ldcalc/lts.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/reduction.hpp"

namespace ldc {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::set<std::string> nf_strings(const std::vector<ProcessPtr>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(to_string(*congruence_normal_form(p)));
  return out;
}

CriterionResult result(unsigned id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

}  // namespace

const std::vector<WorkedExample>& worked_examples() {
  using M = WorkedExample::Mode;
  static const std::vector<WorkedExample> examples = {
      {"ask-guard", M::Reduction,
       "data song0 lyricist b4 || query { ask song1 creator b4 then { data song0 heard yes } }",
       "lyricist <= creator\nsong0 <= song1\n", "",
       "data song0 lyricist b4 || data song0 heard yes", "", true},
      {"tensor-select", M::Reduction,
       "query { ask b2 role singer & select ?b { ask ?b role guitarist then { data ?b plays lead } } }"
       " || data b2 role singer || data b3 role guitarist",
       "", "", "data b2 role singer || data b3 role guitarist || data b3 plays lead", "", true},
      {"choose", M::Reduction,
       "query { select ?a { (ask ?a knows b2 then { data ?a met b2 }) + (ask b2 knows ?a then { data b2 met ?a }) } }"
       " || data b1 knows b2",
       "", "", "data b1 knows b2 || data b1 met b2", "", true},
      {"constraint", M::Reduction,
       "query { select ?l:x { (filter (len(?l:x) <= 5) & ask b1 name ?l:x) then { data b1 greeted ?l:x } } }"
       " || data b1 name \"John\"",
       "", "", "data b1 name \"John\" || data b1 greeted \"John\"", "", true},
      {"iteration", M::Reduction,
       "query { bang { select ?c { ask ?c is busy then { data ?c notified yes } } } }"
       " || data b2 is busy || data b3 is busy",
       "", "",
       "data b2 is busy || data b3 is busy || data b2 notified yes || data b3 notified yes", "",
       false},
      {"blank-node", M::Reduction,
       "query { select ?c { ask ?c creator b2 then { data ?c reviewed yes } } }"
       " || new a { data a author b2 || data a status open }",
       "author <= creator\n", "",
       "new a { data a author b2 || data a status open || data a reviewed yes }", "", true},
      {"unit-label", M::Lts,
       "query { ask b4 knows b3 then { data b4 seen b3 } } || data b4 knows b3", "", "",
       "data b4 knows b3 || data b4 seen b3", "--unit--", false},
      {"extrusion", M::Lts, "new b4 { data b4 colleague b3 }", "colleague <= knows\n", "",
       "data _:x0 colleague b3", "--out[_:x0]: _:x0 knows b3--", false},
      {"input-alias", M::Lts, "query { ask b4 knows b3 then { data b4 seen b3 } }",
       "colleague <= knows\n", "", "data b4 seen b3", "--in: b4 colleague b3--", false},
      {"two-copies", M::Lts,
       "query { bang { select ?a { ask b4 knows ?a then { data b4 greeted ?a } } } }", "", "b2,b3",
       "data b4 greeted b2 || data b4 greeted b3", "--in: b4 knows b2 (x) b4 knows b3--", false},
      {"close", M::Lts,
       "query { bang { select ?a { ask b4 knows ?a then { data b4 greeted ?a } } } }"
       " || new b3 { data b4 knows b3 }",
       "", "b2", "new b3 { data b4 greeted b2 || data b4 greeted b3 || data b4 knows b3 }",
       "--in: b4 knows b2--", false},
  };
  return examples;
}

Workspace workspace_for(const WorkedExample& e) {
  Workspace ws;
  ws.alias = parse_alias(e.alias);
  ws.extras = parse_pool(e.pool);
  return ws;
}

std::string example_report(const WorkedExample& e) {
  Workspace ws = workspace_for(e);
  ProcessPtr p = parse_process(e.process);
  return e.mode == WorkedExample::Mode::Reduction ? eval_report(ws, p) : lts_report(ws, p);
}

std::string check_example(const WorkedExample& e) {
  Workspace ws = workspace_for(e);
  EvalConfig cfg = ws.config();
  ProcessPtr p = parse_process(e.process);
  ProcessPtr expected = parse_process(e.expected_target);
  if (e.mode == WorkedExample::Mode::Reduction) {
    auto next = successors(p, cfg);
    bool found = false;
    for (const auto& t : next) found = found || congruent(t, expected);
    if (!found) return "expected successor missing";
    if (e.unique && next.size() != 1) return std::to_string(next.size()) + " successors, expected 1";
    return "";
  }
  Label label = parse_label(e.expected_label);
  for (const auto& t : process_transitions(p, cfg)) {
    if (t.label == label && congruent(t.target, expected)) return "";
  }
  return "expected transition missing";
}

std::string to_string(const CriterionResult& r) {
  std::ostringstream out;
  out << (r.pass ? "PASS" : "FAIL") << " criterion-" << r.id << " " << r.title << ": " << r.detail;
  out.precision(3);
  out << std::fixed << " (" << r.seconds << "s)";
  return out.str();
}

std::string relativization_statement(const DeskParams& params) {
  std::ostringstream out;
  out << "all verdicts are relative to (pool, iter_bound, depth); this run uses pool = {";
  bool first = true;
  for (const auto& n : params.names) {
    out << (first ? "" : ", ") << to_string(n);
    first = false;
  }
  for (const auto& l : params.literals) out << ", " << to_string(l);
  out << "} plus the terms of each process, iter_bound = " << params.iter_bound
      << ", depth = " << params.depth;
  return out.str();
}

CriterionResult check_label_elimination(const SelftestOptions& o) {
  CriterionResult r = result(1, "unit transitions agree with commitments");
  auto t0 = Clock::now();
  unsigned n = o.small ? 100 : 1000;
  Generator g(o.seed, o.params);
  EvalConfig cfg = o.params.config();
  unsigned agree = 0;
  std::string first_failure;
  unsigned reducing = 0;
  for (unsigned i = 0; i < n; ++i) {
    ProcessPtr p = g.process();
    cfg.alias = g.chance(0.5) ? g.alias() : AliasTable();
    if (!successors(p, cfg).empty()) ++reducing;
    bool same = nf_strings(unit_successors(p, cfg)) == nf_strings(successors(p, cfg));
    if (same) {
      ++agree;
    } else if (first_failure.empty()) {
      first_failure = to_string(*p);
    }
  }
  r.seconds = since(t0);
  r.pass = agree == n && r.seconds < 300;
  r.detail = std::to_string(agree) + "/" + std::to_string(n) + " processes agree, " +
             std::to_string(reducing) + " with at least one commitment";
  if (!first_failure.empty()) r.detail += "; first disagreement: " + first_failure;
  return r;
}

CriterionResult check_worked_examples(const SelftestOptions&) {
  CriterionResult r = result(2, "worked examples");
  auto t0 = Clock::now();
  unsigned ok = 0;
  std::string failures;
  for (const auto& e : worked_examples()) {
    std::string why;
    try {
      why = check_example(e);
    } catch (const Error& err) {
      why = err.what();
    }
    if (why.empty()) {
      ++ok;
    } else {
      failures += " " + e.name + " (" + why + ")";
    }
  }
  r.seconds = since(t0);
  r.pass = ok == worked_examples().size();
  r.detail = std::to_string(ok) + "/" + std::to_string(worked_examples().size()) + " fixtures";
  if (!failures.empty()) r.detail += "; failing:" + failures;
  return r;
}

CriterionResult check_law_suite(const SelftestOptions& o) {
  CriterionResult r = result(3, "law suite");
  auto t0 = Clock::now();
  unsigned equations = o.small ? 20 : 200;
  unsigned inequations = o.small ? 10 : 100;
  Generator g(o.seed + 3, o.params);
  std::size_t laws = 0, instances = 0;
  std::string failures;
  for (const auto& law : law_catalog()) {
    if (!law.instantiate) continue;
    ++laws;
    unsigned need = law.orientation == Orientation::Equation ? equations : inequations;
    unsigned done = 0, failed = 0, tries = 0;
    while (done < need && tries < need * 50) {
      ++tries;
      auto inst = law.instantiate(g);
      if (!inst) continue;
      ++done;
      auto b = bisimilar(inst->lhs, inst->cfg_lhs, inst->rhs, inst->cfg_rhs, o.params.depth);
      bool ok = b.verdict != Verdict::Inconclusive &&
                (b.verdict == Verdict::Bisimilar) == inst->expected;
      if (!ok) ++failed;
    }
    instances += done;
    if (failed || done < need) {
      failures += " " + law.name + "(" + std::to_string(failed) + " failed, " +
                  std::to_string(done) + " drawn)";
    }
  }
  r.seconds = since(t0);
  r.pass = failures.empty();
  r.detail = std::to_string(laws) + " laws, " + std::to_string(instances) + " instances";
  if (!failures.empty()) r.detail += "; failing:" + failures;
  return r;
}

OptionalNesting optional_nesting_instance() {
  QueryPtr u = parse_query("ask b1 name n1");
  QueryPtr v = parse_query("ask b1 email e1 then { data b1 got email }");
  QueryPtr w = parse_query("ask b1 phone f1 then { data b1 got phone }");
  OptionalNesting o;
  o.stronger = Query::tensor(u, Query::choice(Query::tensor(v, optional(w)), Query::one()));
  o.weaker = Query::tensor(u, Query::tensor(optional(v), optional(w)));
  return o;
}

namespace {

// Triples of the first input label on the witness path, as a store.
std::vector<Triple> store_from_path(const BisimResult& r) {
  for (const auto& l : r.path) {
    if (l.is_input()) return l.triples;
  }
  return {};
}

bool outcomes_differ(const std::vector<Triple>& store, const QueryPtr& a, const QueryPtr& b,
                     const EvalConfig& cfg) {
  std::vector<ProcessPtr> parts;
  for (const auto& t : store) parts.push_back(Process::stored(t));
  auto with = [&](const QueryPtr& q) {
    auto ps = parts;
    ps.push_back(Process::query(q));
    return nf_strings(successors(Process::par_all(ps), cfg));
  };
  return with(a) != with(b);
}

}  // namespace

CriterionResult check_strictness(const SelftestOptions& o) {
  CriterionResult r = result(4, "strictness witnesses");
  auto t0 = Clock::now();
  EvalConfig cfg = o.params.config();
  std::ostringstream detail;
  bool pass = true;

  OptionalNesting on = optional_nesting_instance();
  auto forward = query_leq(on.stronger, on.weaker, cfg, o.params.depth);
  auto backward = query_leq(on.weaker, on.stronger, cfg, o.params.depth);
  std::vector<Triple> store = store_from_path(backward);
  bool store_ok = !store.empty() && outcomes_differ(store, on.weaker, on.stronger, cfg);
  pass = pass && forward.verdict == Verdict::Bisimilar &&
         backward.verdict == Verdict::Distinguished && store_ok;
  detail << "(a) nested optional <= flat optional: " << to_string(forward.verdict)
         << ", reverse: " << to_string(backward.verdict);
  if (backward.witness) detail << " witness " << to_string(*backward.witness);
  detail << " store {";
  for (std::size_t i = 0; i < store.size(); ++i) detail << (i ? ", " : "") << to_string(store[i]);
  detail << "}" << (store_ok ? "" : " does not distinguish");

  EvalConfig aliased = cfg;
  aliased.alias = parse_alias("colleague <= knows\n");
  QueryPtr c = parse_query("ask b4 colleague b3");
  QueryPtr d = parse_query("ask b4 knows b3");
  auto up = query_leq(c, d, aliased, o.params.depth);
  auto down = query_leq(d, c, aliased, o.params.depth);
  pass = pass && up.verdict == Verdict::Bisimilar && down.verdict == Verdict::Distinguished &&
         down.witness.has_value();
  detail << "; (b) ask C <= ask D: " << to_string(up.verdict) << ", reverse: "
         << to_string(down.verdict);
  if (down.witness) detail << " witness " << to_string(*down.witness);

  r.seconds = since(t0);
  r.pass = pass;
  r.detail = detail.str();
  return r;
}

QueryPtr distribution_example() {
  return parse_query(
      "bang { select ?a { (ask ?a knows b2 then { data b2 knows b3 }) + "
      "(ask ?a knows b3 then { data b3 knows b2 }) } }");
}

QueryPtr distribution_expected() {
  return parse_query(
      "bang { select ?a { ask ?a knows b2 then { data b2 knows b3 } } } & "
      "bang { select ?a { ask ?a knows b3 then { data b3 knows b2 } } }");
}

EvalConfig distribution_config() {
  EvalConfig cfg;
  cfg.universe.insert(Term(Name("b1")));
  cfg.iter_bound = 2;
  return cfg;
}

CriterionResult check_distribution(const SelftestOptions& o) {
  CriterionResult r = result(5, "distribution rewrite");
  auto t0 = Clock::now();
  EvalConfig cfg = distribution_config();
  QueryPtr q = distribution_example();
  RewriteReport rep = factor_for_distribution(q, cfg, o.params.depth);
  r.seconds = since(t0);
  Pool pool = make_pool(cfg, *Process::query(q));
  bool shape = *rep.output == *distribution_expected();
  r.pass = shape && rep.certified && pool.names.size() + pool.literals.size() == 4 && r.seconds < 60;
  r.detail = "output " + to_string(*rep.output) + " certified=" + (rep.certified ? "true" : "false") +
             " pool=" + std::to_string(pool.names.size() + pool.literals.size());
  return r;
}

CriterionResult check_contextual(const SelftestOptions& o) {
  CriterionResult r = result(6, "contextual spot-check");
  auto t0 = Clock::now();
  unsigned want_bisimilar = o.small ? 20 : 100;
  unsigned want_distinct = o.small ? 10 : 50;
  const unsigned budget = 3;
  Generator g(o.seed + 6, o.params);
  EvalConfig cfg = o.params.config();

  std::vector<const Law*> laws;
  for (const auto& law : law_catalog()) {
    if (law.instantiate && law.orientation == Orientation::Equation && law.family != "process-monoid") {
      laws.push_back(&law);
    }
  }
  auto with_store = [&](const std::vector<Triple>& store, const ProcessPtr& p) {
    std::vector<ProcessPtr> parts;
    for (const auto& t : store) parts.push_back(Process::stored(t));
    parts.push_back(p);
    return Process::par_all(parts);
  };

  unsigned bisim = 0, bisim_clean = 0, tries = 0;
  std::string first_bad;
  while (bisim < want_bisimilar && tries < want_bisimilar * 20) {
    ++tries;
    const Law& law = *laws[g.below(laws.size())];
    auto inst = law.instantiate(g);
    if (!inst || inst->cfg_lhs.iter_bound != inst->cfg_rhs.iter_bound) continue;
    auto store = g.store();
    ProcessPtr p = with_store(store, inst->lhs), q = with_store(store, inst->rhs);
    if (bisimilar(p, q, cfg, o.params.depth).verdict != Verdict::Bisimilar) continue;
    ++bisim;
    if (!contextual_counterexample(p, q, cfg, budget)) {
      ++bisim_clean;
    } else if (first_bad.empty()) {
      first_bad = law.name + ": " + to_string(*p);
    }
  }

  unsigned distinct = 0, distinct_found = 0;
  tries = 0;
  QueryShape shape;
  shape.continuations = false;
  while (distinct < want_distinct && tries < want_distinct * 20) {
    ++tries;
    QueryPtr u = g.query(1 + static_cast<unsigned>(g.below(2)), shape);
    Triple t1 = g.triple(), t2 = g.triple();
    if (t1 == t2) continue;
    auto store = g.store();
    ProcessPtr p = with_store(store, Process::query(Query::then(u, Process::stored(t1))));
    ProcessPtr q = with_store(store, Process::query(Query::then(u, Process::stored(t2))));
    if (bisimilar(p, q, cfg, o.params.depth).verdict != Verdict::Distinguished) continue;
    ++distinct;
    if (contextual_counterexample(p, q, cfg, budget)) {
      ++distinct_found;
    } else if (first_bad.empty()) {
      first_bad = "no context for " + to_string(*p) + " vs " + to_string(*q);
    }
  }

  r.seconds = since(t0);
  r.pass = bisim == want_bisimilar && bisim_clean == bisim && distinct == want_distinct &&
           distinct_found == distinct;
  r.detail = std::to_string(bisim_clean) + "/" + std::to_string(bisim) +
             " bisimilar pairs without a counterexample, " + std::to_string(distinct_found) + "/" +
             std::to_string(distinct) + " distinguished pairs with a context (budget 3)";
  if (!first_bad.empty()) r.detail += "; first problem: " + first_bad;
  return r;
}

CriterionResult check_relativization(const SelftestOptions& o, const std::string& statement) {
  CriterionResult r = result(7, "explicit relativization");
  bool mentions = statement.find("pool") != std::string::npos &&
                  statement.find("iter_bound = " + std::to_string(o.params.iter_bound)) != std::string::npos &&
                  statement.find("depth = " + std::to_string(o.params.depth)) != std::string::npos;
  r.pass = mentions;
  r.detail = mentions ? "statement printed with the fixed parameters" : "statement incomplete";
  return r;
}

int run_selftest(const SelftestOptions& o, std::ostream& out) {
  std::string statement = relativization_statement(o.params);
  out << "format-version: " << kFormatVersion << "\n";
  out << "command: selftest\n";
  out << "size: " << (o.small ? "small" : "full") << "\n";
  out << "seed: " << o.seed << "\n";
  out << "relativization: " << statement << "\n";
  out.flush();
  int failures = 0;
  unsigned passed = 0;
  auto report = [&](const CriterionResult& r) {
    out << to_string(r) << "\n";
    out.flush();
    if (r.pass) {
      ++passed;
    } else {
      ++failures;
    }
  };
  report(check_label_elimination(o));
  report(check_worked_examples(o));
  report(check_law_suite(o));
  report(check_strictness(o));
  report(check_distribution(o));
  report(check_contextual(o));
  report(check_relativization(o, statement));
  out << "summary: " << passed << "/" << passed + failures << " criteria passed\n";
  return failures;
}

}  // namespace ldc
