#include "ldcalc/equivalence.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

#include "ldcalc/errors.hpp"
#include "ldcalc/reduction.hpp"

namespace ldc {

std::optional<std::size_t> StateSpace::find(const Process& p) const {
  auto it = index_.find(to_string(*congruence_normal_form(
      std::shared_ptr<const Process>(std::shared_ptr<const Process>(), &p))));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

class Explorer {
 public:
  static StateSpace run(const std::vector<ProcessPtr>& roots, const EvalConfig& cfg,
                        unsigned depth) {
    StateSpace s;
    std::deque<std::size_t> queue;
    auto add = [&](const ProcessPtr& p, unsigned dist) -> std::optional<std::size_t> {
      std::string key = to_string(*p);
      auto it = s.index_.find(key);
      if (it != s.index_.end()) return it->second;
      if (s.states.size() >= cfg.state_cap) {
        throw StateExplosion("state space exceeds " + std::to_string(cfg.state_cap) + " states");
      }
      std::size_t id = s.states.size();
      s.index_.emplace(std::move(key), id);
      s.states.push_back(p);
      s.edges.emplace_back();
      s.expanded.push_back(false);
      s.distance.push_back(dist);
      queue.push_back(id);
      return id;
    };
    for (const auto& r : roots) add(congruence_normal_form(r), 0);

    EvalConfig plain = cfg;
    plain.trace = false;
    while (!queue.empty()) {
      std::size_t id = queue.front();
      queue.pop_front();
      auto transitions = process_transitions(s.states[id], plain);
      std::vector<std::pair<Label, std::size_t>> out;
      bool complete = true;
      for (auto& t : transitions) {
        if (s.distance[id] < depth) {
          out.emplace_back(t.label, *add(t.target, s.distance[id] + 1));
        } else {
          auto it = s.index_.find(to_string(*t.target));
          if (it == s.index_.end()) {
            complete = false;
            break;
          }
          out.emplace_back(t.label, it->second);
        }
      }
      if (complete) {
        s.edges[id] = std::move(out);
        s.expanded[id] = true;
      } else {
        s.truncated = true;
      }
    }
    return s;
  }
};

StateSpace explore(const std::vector<ProcessPtr>& roots, const EvalConfig& cfg, unsigned depth) {
  for (const auto& r : roots) require_closed(*r);
  return Explorer::run(roots, cfg, depth);
}

// ---------------------------------------------------------------------------
// Formulae

std::string to_string(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::True:
      return "tt";
    case Formula::Kind::Not:
      return "!" + to_string(f.children.at(0));
    case Formula::Kind::And: {
      if (f.children.empty()) return "tt";
      if (f.children.size() == 1) return to_string(f.children[0]);
      std::string out = "(";
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) out += " & ";
        out += to_string(f.children[i]);
      }
      return out + ")";
    }
    case Formula::Kind::Diamond:
      return "<" + to_string(f.label) + ">" + to_string(f.children.at(0));
  }
  return "?";
}

bool models(const ProcessPtr& p, const Formula& f, const EvalConfig& cfg) {
  switch (f.kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::Not:
      return !models(p, f.children.at(0), cfg);
    case Formula::Kind::And:
      return std::all_of(f.children.begin(), f.children.end(),
                         [&](const Formula& c) { return models(p, c, cfg); });
    case Formula::Kind::Diamond: {
      EvalConfig plain = cfg;
      plain.trace = false;
      for (const auto& t : process_transitions(p, plain)) {
        if (t.label == f.label && models(t.target, f.children.at(0), cfg)) return true;
      }
      return false;
    }
  }
  return false;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Bisimilar: return "bisimilar";
    case Verdict::Distinguished: return "distinguished";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(const BisimResult& r) {
  std::ostringstream out;
  out << "verdict: " << to_string(r.verdict) << "\n";
  out << "relative-to: pool=" << r.pool_size << " iter_bound=" << r.iter_bound
      << " depth=" << r.depth << "\n";
  out << "states: " << r.states << (r.truncated ? " (truncated)" : "") << "\n";
  if (r.witness) {
    out << "witness: " << to_string(*r.witness) << "\n";
    out << "path:";
    for (const auto& l : r.path) out << " " << to_string(l);
    out << "\n";
  }
  return out.str();
}

namespace {

// Both compared processes live in one graph; the two halves may come from
// separately explored spaces.
struct Graph {
  std::vector<std::vector<std::pair<int, std::size_t>>> edges;  // (label id, target)
  std::vector<bool> expanded;
  std::vector<std::string> keys;  // normal-form text, for identical-state shortcuts
  std::vector<Label> labels;
  bool truncated = false;
  std::size_t states = 0;
};

void append(Graph& g, const StateSpace& s, std::map<std::string, int>& label_ids) {
  std::size_t offset = g.edges.size();
  for (std::size_t i = 0; i < s.states.size(); ++i) {
    std::vector<std::pair<int, std::size_t>> out;
    for (const auto& [l, t] : s.edges[i]) {
      auto [it, fresh] = label_ids.emplace(to_string(l), static_cast<int>(g.labels.size()));
      if (fresh) g.labels.push_back(l);
      out.emplace_back(it->second, t + offset);
    }
    std::sort(out.begin(), out.end());
    g.edges.push_back(std::move(out));
    g.expanded.push_back(s.expanded[i]);
    g.keys.push_back(to_string(*s.states[i]));
  }
  g.truncated = g.truncated || s.truncated;
  g.states += s.states.size();
}

// Coarsest stable partition; returns block ids.
std::vector<std::size_t> refine(const Graph& g) {
  std::size_t n = g.edges.size();
  std::vector<std::size_t> block(n, 0);
  std::size_t count = 1;
  for (;;) {
    std::map<std::pair<std::size_t, std::vector<std::pair<int, std::size_t>>>, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<int, std::size_t>> sig;
      for (const auto& [l, t] : g.edges[i]) sig.emplace_back(l, block[t]);
      std::sort(sig.begin(), sig.end());
      sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
      auto [it, _] = ids.emplace(std::make_pair(block[i], std::move(sig)), ids.size());
      next[i] = it->second;
    }
    block = std::move(next);
    if (ids.size() == count) return block;
    count = ids.size();
  }
}

enum class Tri { No = 0, Unknown = 1, Yes = 2 };

// Three-valued approximants of bisimilarity over the pairs reachable from
// (p, q), with the round at which each pair was first separated.
class Approximants {
 public:
  Approximants(const Graph& g, std::size_t p, std::size_t q, bool same_config)
      : g_(g), same_config_(same_config) {
    index(p, q);
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      auto [s, t] = pairs_[k];
      if (g_.expanded[s] && g_.expanded[t]) {
        for (const auto& [l, s2] : g_.edges[s]) {
          for (const auto& [l2, t2] : g_.edges[t]) {
            if (l == l2) index(s2, t2);
          }
        }
      }
    }
    value_.assign(pairs_.size(), Tri::Yes);
    level_.assign(pairs_.size(), 0);
    for (std::size_t k = 0; k < pairs_.size(); ++k) {
      auto [s, t] = pairs_[k];
      if ((!g_.expanded[s] || !g_.expanded[t]) && !(same_config_ && g_.keys[s] == g_.keys[t])) {
        value_[k] = Tri::Unknown;
      }
    }
    for (unsigned round = 1;; ++round) {
      std::vector<Tri> next = value_;
      bool changed = false;
      for (std::size_t k = 0; k < pairs_.size(); ++k) {
        if (value_[k] == Tri::No) continue;
        auto [s, t] = pairs_[k];
        if (!g_.expanded[s] || !g_.expanded[t]) continue;
        Tri v = std::min({value_[k], match(s, t, false), match(t, s, true)});
        if (v != value_[k]) {
          next[k] = v;
          changed = true;
          if (v == Tri::No) level_[k] = round;
        }
      }
      value_ = std::move(next);
      if (!changed) break;
    }
  }

  Tri value(std::size_t s, std::size_t t) const { return value_[at_.at({s, t})]; }

  // A formula true of s and false of t; requires value(s, t) == No.
  Formula witness(std::size_t s, std::size_t t) const {
    unsigned lvl = level_[at_.at({s, t})];
    if (auto f = forward(s, t, lvl, false)) return *f;
    if (auto f = forward(t, s, lvl, true)) {
      Formula n;
      n.kind = Formula::Kind::Not;
      n.children.push_back(*f);
      return n;
    }
    throw Error("inconsistent approximants");
  }

 private:
  void index(std::size_t s, std::size_t t) {
    if (at_.emplace(std::make_pair(s, t), pairs_.size()).second) pairs_.emplace_back(s, t);
  }

  Tri pair_value(std::size_t a, std::size_t b, bool flipped) const {
    return flipped ? value_[at_.at({b, a})] : value_[at_.at({a, b})];
  }

  // Worst case over a's moves of the best answer b can give.
  Tri match(std::size_t a, std::size_t b, bool flipped) const {
    Tri worst = Tri::Yes;
    for (const auto& [l, a2] : g_.edges[a]) {
      Tri best = Tri::No;
      for (const auto& [l2, b2] : g_.edges[b]) {
        if (l2 == l) best = std::max(best, pair_value(a2, b2, flipped));
      }
      worst = std::min(worst, best);
    }
    return worst;
  }

  // A move of a that b cannot answer within level `lvl`; the formula holds
  // of a and fails for b.
  std::optional<Formula> forward(std::size_t a, std::size_t b, unsigned lvl, bool flipped) const {
    for (const auto& [l, a2] : g_.edges[a]) {
      bool all_separated = true;
      std::vector<std::size_t> answers;
      for (const auto& [l2, b2] : g_.edges[b]) {
        if (l2 != l) continue;
        std::size_t k = flipped ? at_.at({b2, a2}) : at_.at({a2, b2});
        if (value_[k] != Tri::No || level_[k] >= lvl) {
          all_separated = false;
          break;
        }
        answers.push_back(b2);
      }
      if (!all_separated) continue;
      Formula conj;
      conj.kind = Formula::Kind::And;
      for (std::size_t b2 : answers) {
        if (flipped) {
          Formula n;
          n.kind = Formula::Kind::Not;
          n.children.push_back(witness(b2, a2));
          conj.children.push_back(std::move(n));
        } else {
          conj.children.push_back(witness(a2, b2));
        }
      }
      Formula d;
      d.kind = Formula::Kind::Diamond;
      d.label = g_.labels[l];
      d.children.push_back(std::move(conj));
      return d;
    }
    return std::nullopt;
  }

  const Graph& g_;
  bool same_config_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> at_;
  std::vector<Tri> value_;
  std::vector<unsigned> level_;
};

void path_of(const Formula& f, std::vector<Label>& out) {
  switch (f.kind) {
    case Formula::Kind::Diamond:
      out.push_back(f.label);
      path_of(f.children.at(0), out);
      return;
    case Formula::Kind::Not:
    case Formula::Kind::And:
      if (!f.children.empty()) path_of(f.children.front(), out);
      return;
    case Formula::Kind::True:
      return;
  }
}

EvalConfig widened(const EvalConfig& cfg, const Process& p, const Process& q) {
  EvalConfig out = cfg;
  out.trace = false;
  for (const Process* x : {&p, &q}) {
    for (const auto& n : all_names(*x)) out.universe.insert(Term(n));
    for (const auto& l : literals_of(*x)) out.universe.insert(Term(l));
  }
  return out;
}

BisimResult decide(const Graph& g, std::size_t p, std::size_t q, bool same_config) {
  BisimResult r;
  r.states = g.states;
  r.truncated = g.truncated;
  if (!g.truncated) {
    auto block = refine(g);
    if (block[p] == block[q]) {
      r.verdict = Verdict::Bisimilar;
      return r;
    }
  }
  Approximants a(g, p, q, same_config);
  Tri v = a.value(p, q);
  if (v == Tri::No) {
    r.verdict = Verdict::Distinguished;
    r.witness = a.witness(p, q);
    path_of(*r.witness, r.path);
  } else if (v == Tri::Yes) {
    r.verdict = Verdict::Bisimilar;
  } else {
    r.verdict = Verdict::Inconclusive;
  }
  return r;
}

}  // namespace

BisimResult bisimilar(const ProcessPtr& p, const ProcessPtr& q, const EvalConfig& cfg,
                      unsigned depth) {
  EvalConfig w = widened(cfg, *p, *q);
  StateSpace s = explore({p, q}, w, depth);
  Graph g;
  std::map<std::string, int> ids;
  append(g, s, ids);
  BisimResult r = decide(g, *s.find(*p), *s.find(*q), true);
  Pool pool = make_pool(w, *Process::par(p, q));
  r.pool_size = pool.names.size() + pool.literals.size();
  r.iter_bound = cfg.iter_bound;
  r.depth = depth;
  return r;
}

BisimResult bisimilar(const ProcessPtr& p, const EvalConfig& cfg_p, const ProcessPtr& q,
                      const EvalConfig& cfg_q, unsigned depth) {
  if (cfg_p.alias.assumptions() == cfg_q.alias.assumptions() &&
      cfg_p.universe == cfg_q.universe && cfg_p.iter_bound == cfg_q.iter_bound &&
      cfg_p.fresh_prefix == cfg_q.fresh_prefix) {
    return bisimilar(p, q, cfg_p, depth);
  }
  EvalConfig wp = widened(cfg_p, *p, *q);
  EvalConfig wq = widened(cfg_q, *p, *q);
  wp.universe.insert(wq.universe.begin(), wq.universe.end());
  wq.universe = wp.universe;
  StateSpace sp = explore({p}, wp, depth);
  StateSpace sq = explore({q}, wq, depth);
  Graph g;
  std::map<std::string, int> ids;
  append(g, sp, ids);
  append(g, sq, ids);
  BisimResult r = decide(g, *sp.find(*p), sp.states.size() + *sq.find(*q), false);
  Pool pool = make_pool(wp, *Process::par(p, q));
  r.pool_size = pool.names.size() + pool.literals.size();
  r.iter_bound = std::max(cfg_p.iter_bound, cfg_q.iter_bound);
  r.depth = depth;
  return r;
}

BisimResult query_leq(const QueryPtr& u, const QueryPtr& v, const EvalConfig& cfg,
                      unsigned depth) {
  return bisimilar(Process::query(Query::choice(u, v)), Process::query(v), cfg, depth);
}

// ---------------------------------------------------------------------------
// Contextual search

std::string to_string(const Context& c) {
  if (c.components.empty()) return "[.]";
  std::string out = "[.]";
  for (const auto& p : c.components) out += " || " + to_string(*p);
  return out;
}

ProcessPtr plug(const Context& c, const ProcessPtr& p) {
  std::vector<ProcessPtr> parts{p};
  parts.insert(parts.end(), c.components.begin(), c.components.end());
  return Process::par_all(parts);
}

namespace {

constexpr std::size_t kContextCandidates = 16;

class Observer {
 public:
  explicit Observer(const EvalConfig& cfg) : cfg_(cfg) {
    for (const auto& n : cfg.alias.names()) alias_names_.push_back(n);
  }

  int observe(const ProcessPtr& p, unsigned depth) {
    std::string key = to_string(*p) + "#" + std::to_string(depth);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    FlatProcess f = flatten(p);
    std::set<Name> bound(f.bound.begin(), f.bound.end());
    std::vector<std::string> stores;
    for (const auto& t : f.stores) {
      auto name = [&](const Name& n) { return bound.count(n) ? std::string("_") : rep(n).str(); };
      stores.push_back(name(t.subject) + " " + name(t.predicate) + " " +
                       (t.object.is_name() ? name(t.object.name()) : to_string(t.object)));
    }
    std::sort(stores.begin(), stores.end());
    std::string sig;
    for (const auto& s : stores) sig += s + ";";
    if (depth > 0) {
      std::set<int> next;
      for (const auto& t : successors(p, cfg_)) next.insert(observe(t, depth - 1));
      sig += "{";
      for (int id : next) sig += std::to_string(id) + ",";
      sig += "}";
    }
    auto [sit, _] = sigs_.emplace(sig, static_cast<int>(sigs_.size()));
    memo_.emplace(std::move(key), sit->second);
    return sit->second;
  }

 private:
  // Smallest name in the alias cycle of n.
  Name rep(const Name& n) const {
    Name best = n;
    for (const auto& m : alias_names_) {
      if (m < best && cfg_.alias.leq(n, m) && cfg_.alias.leq(m, n)) best = m;
    }
    return best;
  }

  const EvalConfig& cfg_;
  std::vector<Name> alias_names_;
  std::map<std::string, int> memo_;
  std::map<std::string, int> sigs_;
};

void collect_patterns(const Process& p, std::vector<Pattern>& stores, std::vector<Pattern>& asks);

void collect_patterns(const Query& q, std::vector<Pattern>& stores, std::vector<Pattern>& asks) {
  if (q.kind() == QueryKind::Ask) asks.push_back(q.pattern());
  if (q.left()) collect_patterns(*q.left(), stores, asks);
  if (q.right()) collect_patterns(*q.right(), stores, asks);
  if (q.continuation()) collect_patterns(*q.continuation(), stores, asks);
}

void collect_patterns(const Process& p, std::vector<Pattern>& stores, std::vector<Pattern>& asks) {
  switch (p.kind()) {
    case ProcessKind::Nothing:
      return;
    case ProcessKind::Par:
      collect_patterns(*p.left(), stores, asks);
      collect_patterns(*p.right(), stores, asks);
      return;
    case ProcessKind::Scope:
      collect_patterns(*p.body(), stores, asks);
      return;
    case ProcessKind::Query:
      collect_patterns(*p.as_query(), stores, asks);
      return;
    case ProcessKind::Stored:
      stores.push_back(p.triple());
      return;
  }
}

void instantiate(const Pattern& pat, const Pool& pool, std::set<Triple>& out) {
  std::vector<Slot> slots{pat.subject, pat.predicate, pat.object};
  std::function<void(std::size_t, std::vector<Term>&)> go = [&](std::size_t i,
                                                                 std::vector<Term>& acc) {
    if (i == 3) {
      if (acc[0].is_name() && acc[1].is_name()) out.insert(Triple{acc[0].name(), acc[1].name(), acc[2]});
      return;
    }
    if (const Term* t = std::get_if<Term>(&slots[i])) {
      acc.push_back(*t);
      go(i + 1, acc);
      acc.pop_back();
      return;
    }
    const Var& v = std::get<Var>(slots[i]);
    if (v.sort == Sort::Name) {
      for (const auto& n : pool.names) {
        acc.emplace_back(n);
        go(i + 1, acc);
        acc.pop_back();
      }
    } else {
      for (const auto& l : pool.literals) {
        acc.emplace_back(l);
        go(i + 1, acc);
        acc.pop_back();
      }
    }
  };
  std::vector<Term> acc;
  go(0, acc);
}

}  // namespace

std::optional<Context> contextual_counterexample(const ProcessPtr& p, const ProcessPtr& q,
                                                 const EvalConfig& cfg, unsigned budget) {
  require_closed(*p);
  require_closed(*q);
  EvalConfig w = widened(cfg, *p, *q);
  ProcessPtr np = congruence_normal_form(p);
  ProcessPtr nq = congruence_normal_form(q);

  // Only free names of the compared processes may appear in context data.
  std::set<Name> visible = free_names(*np);
  auto fq = free_names(*nq);
  visible.insert(fq.begin(), fq.end());
  for (const auto& t : w.universe) {
    if (t.is_name() && t.name().str().rfind(kBoundPrefix, 0) != 0) visible.insert(t.name());
  }
  Pool pool = make_pool(w, *Process::par(np, nq));
  Pool ctx_pool;
  for (const auto& n : pool.names) {
    if (visible.count(n)) ctx_pool.names.push_back(n);
  }
  ctx_pool.literals = pool.literals;

  std::vector<Pattern> stores, asks;
  collect_patterns(*p, stores, asks);
  collect_patterns(*q, stores, asks);
  auto visible_triple = [&](const Triple& t) {
    if (!visible.count(t.subject) || !visible.count(t.predicate)) return false;
    return !t.object.is_name() || visible.count(t.object.name()) > 0;
  };
  // Instantiations of each pattern, taken round-robin so every ask is
  // represented before the cap is reached.
  std::vector<std::vector<Triple>> per_pattern;
  for (const auto* group : {&asks, &stores}) {
    for (const auto& pat : *group) {
      std::set<Triple> inst;
      instantiate(pat, ctx_pool, inst);
      std::vector<Triple> kept;
      for (const auto& t : inst) {
        if (visible_triple(t)) kept.push_back(t);
      }
      per_pattern.push_back(std::move(kept));
    }
  }
  std::vector<ProcessPtr> candidates;
  std::set<Triple> seen;
  for (std::size_t round = 0; candidates.size() < kContextCandidates; ++round) {
    bool any = false;
    for (const auto& list : per_pattern) {
      if (round >= list.size()) continue;
      any = true;
      if (seen.insert(list[round]).second && candidates.size() < kContextCandidates) {
        candidates.push_back(Process::stored(list[round]));
      }
    }
    if (!any) break;
  }

  Observer obs(w);
  std::vector<std::size_t> chosen;
  std::optional<Context> found;
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t from, std::size_t left) {
    if (left == 0) {
      Context c;
      for (std::size_t i : chosen) c.components.push_back(candidates[i]);
      if (obs.observe(congruence_normal_form(plug(c, np)), budget) !=
          obs.observe(congruence_normal_form(plug(c, nq)), budget)) {
        found = std::move(c);
        return true;
      }
      return false;
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      chosen.push_back(i);
      if (search(i, left - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t size = 0; size <= budget; ++size) {
    if (search(0, size)) return found;
  }
  return std::nullopt;
}

}  // namespace ldc
