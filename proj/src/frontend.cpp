#include "ldcalc/frontend.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "ldcalc/errors.hpp"
#include "ldcalc/lts.hpp"
#include "ldcalc/parser.hpp"
#include "ldcalc/reduction.hpp"

namespace ldc {

EvalConfig Workspace::config() const {
  EvalConfig cfg;
  cfg.alias = alias;
  cfg.iter_bound = iter_bound;
  for (const auto& t : store) {
    cfg.universe.insert(Term(t.subject));
    cfg.universe.insert(Term(t.predicate));
    cfg.universe.insert(t.object);
  }
  cfg.universe.insert(extras.begin(), extras.end());
  validate(cfg);
  return cfg;
}

ProcessPtr Workspace::attach(const ProcessPtr& p) const {
  std::vector<ProcessPtr> parts;
  for (const auto& t : store) parts.push_back(Process::stored(t));
  parts.push_back(p);
  return Process::par_all(parts);
}

Pool Workspace::pool_for(const ProcessPtr& p) const { return make_pool(config(), *attach(p)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<Term> parse_pool(const std::string& text) {
  std::vector<std::string> items{""};
  bool quoted = false, escaped = false;
  for (char c : text) {
    if (!quoted && c == ',') {
      items.emplace_back();
      continue;
    }
    if (quoted && !escaped && c == '"') quoted = false;
    else if (!quoted && c == '"') quoted = true;
    escaped = quoted && !escaped && c == '\\';
    items.back() += c;
  }
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
  };
  std::vector<Term> out;
  std::size_t col = 1;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::string item = trim(items[i]);
    // A trailing comma is tolerated.
    if (item.empty() && i + 1 != items.size()) {
      throw ParseError("empty pool entry", 1, col);
    }
    if (!item.empty()) out.push_back(parse_term(item));
    col += items[i].size() + 1;
  }
  return out;
}

namespace {

std::string header(const std::string& command, const Workspace& ws, const ProcessPtr& p) {
  Pool pool = ws.pool_for(p);
  std::ostringstream out;
  out << "format-version: " << kFormatVersion << "\n";
  out << "command: " << command << "\n";
  out << "relative-to: pool=" << pool.names.size() + pool.literals.size()
      << " iter_bound=" << ws.iter_bound << "\n";
  return out.str();
}

}  // namespace

std::string eval_report(const Workspace& ws, const ProcessPtr& p) {
  ProcessPtr source = ws.attach(p);
  auto cs = commitments(source, ws.config());
  std::ostringstream out;
  out << header("eval", ws, p);
  out << "source: " << to_string(*congruence_normal_form(source)) << "\n";
  out << "successors: " << cs.size() << "\n";
  for (const auto& c : cs) out << "=> " << to_string(*c.target) << "\n";
  return out.str();
}

std::string step_report(const Workspace& ws, const ProcessPtr& p, unsigned n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EvalConfig cfg = ws.config();
  ProcessPtr cur = congruence_normal_form(ws.attach(p));
  std::ostringstream out;
  out << header("step", ws, p);
  out << "seed: " << seed << "\n";
  out << "0: " << to_string(*cur) << "\n";
  for (unsigned i = 1; i <= n; ++i) {
    auto next = successors(cur, cfg);
    if (next.empty()) {
      out << "stuck after " << i - 1 << " steps\n";
      break;
    }
    cur = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
    out << i << ": " << to_string(*cur) << "\n";
  }
  return out.str();
}

std::string lts_report(const Workspace& ws, const ProcessPtr& p) {
  ProcessPtr source = ws.attach(p);
  auto ts = process_transitions(source, ws.config());
  std::ostringstream out;
  out << header("lts", ws, p);
  out << "source: " << to_string(*congruence_normal_form(source)) << "\n";
  out << "transitions: " << ts.size() << "\n";
  for (const auto& t : ts) out << to_string(t.label) << " " << to_string(*t.target) << "\n";
  return out.str();
}

std::string equiv_report(const std::string& command, const BisimResult& r) {
  std::ostringstream out;
  out << "format-version: " << kFormatVersion << "\n";
  out << "command: " << command << "\n";
  out << to_string(r);
  return out.str();
}

std::string rewrite_report(const std::string& goal, const RewriteReport& r) {
  std::ostringstream out;
  out << "format-version: " << kFormatVersion << "\n";
  out << "command: rewrite\n";
  out << "goal: " << goal << "\n";
  out << to_string(r);
  return out.str();
}

int exit_code(const BisimResult& r) {
  switch (r.verdict) {
    case Verdict::Bisimilar: return 0;
    case Verdict::Distinguished: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

}  // namespace ldc
