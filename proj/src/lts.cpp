#include "ldcalc/lts.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "ldcalc/errors.hpp"
#include "ldcalc/reduction.hpp"

namespace ldc {

namespace {

ProcessPtr par_nil(const ProcessPtr& a, const ProcessPtr& b) {
  if (a->kind() == ProcessKind::Nothing) return b;
  if (b->kind() == ProcessKind::Nothing) return a;
  return Process::par(a, b);
}

struct QT {
  std::vector<Triple> input;
  ProcessPtr target;
  unsigned cost = 0;
  DerivationPtr d;
};

class QueryLts {
 public:
  QueryLts(const EvalConfig& cfg, const Pool& pool) : cfg_(cfg), pool_(pool) {}

  std::vector<QT> run(const QueryPtr& q, unsigned budget) {
    std::vector<QT> out;
    const bool tr = cfg_.trace;
    switch (q->kind()) {
      case QueryKind::Ask: {
        if (!is_ground(q->pattern())) throw OpenProcess("open ask " + to_string(q->pattern()));
        for (const auto& c : triple_downset(cfg_.alias, ground_triple(q->pattern()))) {
          out.push_back(QT{{c}, Process::nothing(), 0,
                           tr ? derive::input_triple(cfg_.alias, c, q->pattern()) : nullptr});
        }
        break;
      }
      case QueryKind::Filter: {
        bool ok = false;
        try {
          ok = holds(*q->constraint());
        } catch (const NonGroundConstraint& e) {
          throw OpenProcess(e.what());
        }
        if (ok) {
          out.push_back(QT{{}, Process::nothing(), 0, tr ? derive::in_filter(q->constraint()) : nullptr});
        }
        break;
      }
      case QueryKind::Choice:
        for (auto& t : run(q->left(), budget)) {
          if (tr) t.d = derive::in_choose_left(t.d, q->right());
          out.push_back(std::move(t));
        }
        for (auto& t : run(q->right(), budget)) {
          if (tr) t.d = derive::in_choose_right(q->left(), t.d);
          out.push_back(std::move(t));
        }
        break;
      case QueryKind::Tensor: {
        auto left = run(q->left(), budget);
        if (left.empty()) break;
        auto right = run(q->right(), budget);
        for (const auto& l : left) {
          for (const auto& r : right) {
            if (l.cost + r.cost > budget) continue;
            QT t;
            t.input = l.input;
            t.input.insert(t.input.end(), r.input.begin(), r.input.end());
            std::sort(t.input.begin(), t.input.end());
            t.target = par_nil(l.target, r.target);
            t.cost = l.cost + r.cost;
            if (tr) t.d = derive::in_tensor(l.d, r.d);
            out.push_back(std::move(t));
          }
        }
        break;
      }
      case QueryKind::SelectName:
      case QueryKind::SelectLiteral: {
        auto each = [&](const Term& w) {
          QueryPtr body = substitute(q->body(), Substitution{{q->var(), w}});
          for (auto& t : run(body, budget)) {
            if (tr) t.d = derive::in_select(q->var(), q->body(), w, t.d);
            out.push_back(std::move(t));
          }
        };
        if (q->kind() == QueryKind::SelectName) {
          for (const auto& n : pool_.names) each(Term(n));
        } else {
          for (const auto& l : pool_.literals) each(Term(l));
        }
        break;
      }
      case QueryKind::Bang: {
        out.push_back(QT{{}, Process::nothing(), 0, tr ? derive::in_weakening(q->body()) : nullptr});
        if (budget == 0) break;
        auto copies = run(q->body(), budget - 1);
        // Multisets of copies in nondecreasing index order; the first copy
        // is derelicted and the rest come from the contracted bang.
        std::vector<std::size_t> chosen;
        std::function<void(std::size_t, unsigned)> pick = [&](std::size_t from, unsigned used) {
          if (!chosen.empty()) out.push_back(assemble(q, copies, chosen, used));
          for (std::size_t i = from; i < copies.size(); ++i) {
            unsigned cost = used + 1 + copies[i].cost;
            if (cost > budget) continue;
            chosen.push_back(i);
            pick(i, cost);
            chosen.pop_back();
          }
        };
        pick(0, 0);
        break;
      }
      case QueryKind::Then:
        for (auto& t : run(q->left(), budget)) {
          t.target = par_nil(t.target, q->continuation());
          if (tr) t.d = derive::trigger_guard(t.d, q->continuation());
          out.push_back(std::move(t));
        }
        break;
    }
    return dedup(std::move(out));
  }

 private:
  QT assemble(const QueryPtr& bang, const std::vector<QT>& copies,
              const std::vector<std::size_t>& chosen, unsigned cost) {
    const bool tr = cfg_.trace;
    QT acc = copies[chosen.back()];
    if (tr) acc.d = derive::in_dereliction(acc.d);
    for (std::size_t k = chosen.size() - 1; k-- > 0;) {
      const QT& c = copies[chosen[k]];
      QT next;
      next.input = c.input;
      next.input.insert(next.input.end(), acc.input.begin(), acc.input.end());
      std::sort(next.input.begin(), next.input.end());
      next.target = par_nil(c.target, acc.target);
      if (tr) {
        next.d = derive::in_contraction(derive::in_tensor(derive::in_dereliction(c.d), acc.d));
      }
      acc = std::move(next);
    }
    acc.cost = cost;
    (void)bang;
    return acc;
  }

  static std::vector<QT> dedup(std::vector<QT> in) {
    std::map<std::string, std::size_t> seen;
    std::vector<QT> out;
    for (auto& t : in) {
      std::string key = to_string(Label::input(t.input)) + "|" + to_string(*t.target);
      auto [it, fresh] = seen.emplace(key, out.size());
      if (fresh) {
        out.push_back(std::move(t));
      } else if (t.cost < out[it->second].cost) {
        out[it->second] = std::move(t);
      }
    }
    return out;
  }

  const EvalConfig& cfg_;
  const Pool& pool_;
};

std::set<Name> names_of(const std::vector<Triple>& ts) {
  std::set<Name> out;
  for (const auto& t : ts) {
    out.insert(t.subject);
    out.insert(t.predicate);
    if (t.object.is_name()) out.insert(t.object.name());
  }
  return out;
}

ProcessPtr scoped(const std::vector<Name>& bound, ProcessPtr body) {
  for (auto it = bound.rbegin(); it != bound.rend(); ++it) body = Process::scope(*it, body);
  return body;
}

Triple rename_triple(const Triple& t, const std::map<Name, Name>& m) {
  auto rn = [&](const Name& n) {
    auto it = m.find(n);
    return it == m.end() ? n : it->second;
  };
  return Triple{rn(t.subject), rn(t.predicate),
                t.object.is_name() ? Term(rn(t.object.name())) : t.object};
}

struct Collector {
  std::map<std::string, LTransition> out;

  void add(LTransition t) {
    std::string key = to_string(t.label) + "|" + to_string(*t.target);
    out.emplace(std::move(key), std::move(t));
  }
};

// Sub-multisets of positions 0..n-1, as bitmasks, smallest first.
std::vector<unsigned> subsets(std::size_t n) {
  std::vector<unsigned> out;
  for (unsigned m = 0; m < (1u << n); ++m) out.push_back(m);
  return out;
}

// Assigns every triple of `wanted` a distinct store below it.
bool match_exact(const AliasTable& alias, const std::vector<Triple>& wanted,
                 const std::vector<Triple>& stores, std::vector<std::size_t>& assignment) {
  assignment.assign(wanted.size(), 0);
  std::vector<bool> used(stores.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == wanted.size()) return true;
    for (std::size_t s = 0; s < stores.size(); ++s) {
      if (used[s]) continue;
      const auto up = triple_upset(alias, stores[s]);
      if (std::find(up.begin(), up.end(), wanted[i]) == up.end()) continue;
      used[s] = true;
      assignment[i] = s;
      if (go(i + 1)) return true;
      used[s] = false;
    }
    return false;
  };
  return go(0);
}

DerivationPtr output_chain(const AliasTable& alias, const std::vector<Triple>& stores,
                           const std::vector<Triple>& labels) {
  DerivationPtr d = derive::output_triple(alias, stores.back(), labels.back());
  for (std::size_t k = stores.size() - 1; k-- > 0;) {
    d = derive::parallel_outputs(derive::output_triple(alias, stores[k], labels[k]), d);
  }
  return d;
}

}  // namespace

std::vector<QueryTransition> query_transitions(const QueryPtr& u, const EvalConfig& cfg) {
  ProcessPtr as_process = Process::query(u);
  require_closed(*as_process);
  Pool pool = make_pool(cfg, *as_process);
  QueryLts lts(cfg, pool);
  std::map<std::string, QueryTransition> out;
  for (auto& t : lts.run(u, cfg.iter_bound)) {
    ProcessPtr target = congruence_normal_form(t.target);
    Label l = Label::input(t.input);
    DerivationPtr d = cfg.trace ? derive::congruence(t.d, as_process, target) : nullptr;
    out.emplace(to_string(l) + "|" + to_string(*target), QueryTransition{l, target, d});
  }
  std::vector<QueryTransition> result;
  for (auto& [_, t] : out) result.push_back(std::move(t));
  return result;
}

std::vector<LTransition> process_transitions(const ProcessPtr& p, const EvalConfig& cfg) {
  require_closed(*p);
  const bool tr = cfg.trace;
  FlatProcess f = flatten(p);
  ProcessPtr source = compose(f);
  Pool pool = make_pool(cfg, *source);
  const std::set<Name> bound(f.bound.begin(), f.bound.end());
  Collector col;

  // Outputs: some stores, each weakened upward, queries idle.
  const std::size_t ns = f.stores.size();
  std::vector<std::vector<Triple>> ups;
  for (const auto& s : f.stores) ups.push_back(triple_upset(cfg.alias, s));
  std::set<Name> avoid = all_names(*source);
  for (unsigned mask : subsets(ns)) {
    if (mask == 0) continue;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ns; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    std::vector<std::size_t> choice(idx.size(), 0);
    for (;;) {
      std::vector<Triple> labels;
      for (std::size_t k = 0; k < idx.size(); ++k) labels.push_back(ups[idx[k]][choice[k]]);

      std::vector<Name> alpha;
      for (const auto& n : names_of(labels)) {
        if (bound.count(n)) alpha.push_back(n);
      }
      std::vector<Name> kept;
      for (const auto& b : f.bound) {
        if (!std::count(alpha.begin(), alpha.end(), b)) kept.push_back(b);
      }
      std::vector<Name> fresh;
      for (std::size_t n = 0; fresh.size() < alpha.size(); ++n) {
        Name cand(cfg.fresh_prefix + std::to_string(n));
        if (!avoid.count(cand)) fresh.push_back(cand);
      }
      ProcessPtr body = source;
      for (std::size_t i = 0; i < f.bound.size(); ++i) body = body->body();

      std::vector<std::size_t> perm(alpha.size());
      std::iota(perm.begin(), perm.end(), 0);
      std::string best_key;
      LTransition best;
      std::map<Name, Name> best_map;
      do {
        std::map<Name, Name> m;
        for (std::size_t i = 0; i < alpha.size(); ++i) m[alpha[i]] = fresh[perm[i]];
        std::vector<Triple> renamed;
        for (const auto& t : labels) renamed.push_back(rename_triple(t, m));
        ProcessPtr tb = body;
        for (const auto& [from, to] : m) tb = rename_name(tb, from, to);
        std::vector<Name> ex;
        for (const auto& a : alpha) ex.push_back(m[a]);
        Label l = Label::output(ex, renamed);
        ProcessPtr target = congruence_normal_form(scoped(kept, tb));
        std::string key = to_string(l) + "|" + to_string(*target);
        if (best_key.empty() || key < best_key) {
          best_key = key;
          best = LTransition{source, l, target, nullptr};
          best_map = m;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));

      if (tr) {
        std::vector<Triple> chosen_stores;
        for (std::size_t i : idx) chosen_stores.push_back(f.stores[i]);
        DerivationPtr d = output_chain(cfg.alias, chosen_stores, labels);
        std::vector<ProcessPtr> idle;
        for (std::size_t i = 0; i < ns; ++i) {
          if (!(mask & (1u << i))) idle.push_back(Process::stored(f.stores[i]));
        }
        for (const auto& q : f.queries) idle.push_back(Process::query(q));
        if (!idle.empty()) d = derive::par_context(d, Process::par_all(idle));
        for (auto it = f.bound.rbegin(); it != f.bound.rend(); ++it) {
          d = std::count(alpha.begin(), alpha.end(), *it) ? derive::open(cfg.alias, d, *it)
                                                          : derive::blank_node_context(d, *it);
        }
        for (const auto& [from, to] : best_map) d = derive::alpha(d, from, to);
        best.trace = derive::congruence(d, source, best.target);
      }
      col.add(std::move(best));

      std::size_t k = 0;
      while (k < idx.size() && ++choice[k] == ups[idx[k]].size()) choice[k++] = 0;
      if (k == idx.size()) break;
    }
  }

  // Inputs and unit steps: one query moves; part of its input may be
  // supplied by stores, the rest stays on the label.
  QueryLts qlts(cfg, pool);
  for (std::size_t i = 0; i < f.queries.size(); ++i) {
    for (const auto& t : qlts.run(f.queries[i], cfg.iter_bound)) {
      const std::size_t n = t.input.size();
      std::set<std::string> tried;
      for (unsigned mask : subsets(n)) {
        std::vector<Triple> supplied, residual;
        for (std::size_t k = 0; k < n; ++k) {
          ((mask & (1u << k)) ? supplied : residual).push_back(t.input[k]);
        }
        std::string sig = to_string(Label::input(supplied));
        if (!tried.insert(sig).second) continue;
        bool leaks = false;
        for (const auto& nm : names_of(residual)) leaks = leaks || bound.count(nm);
        if (leaks) continue;
        std::vector<std::size_t> assignment;
        if (!match_exact(cfg.alias, supplied, f.stores, assignment)) continue;

        std::vector<ProcessPtr> parts;
        for (const auto& s : f.stores) parts.push_back(Process::stored(s));
        for (std::size_t j = 0; j < f.queries.size(); ++j) {
          if (j != i) parts.push_back(Process::query(f.queries[j]));
        }
        parts.push_back(t.target);
        ProcessPtr target = congruence_normal_form(scoped(f.bound, Process::par_all(parts)));
        LTransition lt{source, Label::input(residual), target, nullptr};

        if (tr) {
          DerivationPtr d = derive::query_input(t.d);
          std::vector<bool> used(f.stores.size(), false);
          if (!supplied.empty()) {
            std::vector<Triple> from;
            for (std::size_t k : assignment) {
              from.push_back(f.stores[k]);
              used[k] = true;
            }
            d = derive::close(d, output_chain(cfg.alias, from, supplied));
          }
          std::vector<ProcessPtr> idle;
          for (std::size_t k = 0; k < f.stores.size(); ++k) {
            if (!used[k]) idle.push_back(Process::stored(f.stores[k]));
          }
          for (std::size_t j = 0; j < f.queries.size(); ++j) {
            if (j != i) idle.push_back(Process::query(f.queries[j]));
          }
          if (!idle.empty()) d = derive::par_context(d, Process::par_all(idle));
          for (auto it = f.bound.rbegin(); it != f.bound.rend(); ++it) {
            d = derive::blank_node_context(d, *it);
          }
          lt.trace = derive::congruence(d, source, target);
        }
        col.add(std::move(lt));
      }
    }
  }

  std::vector<LTransition> result;
  for (auto& [_, t] : col.out) result.push_back(std::move(t));
  return result;
}

std::vector<ProcessPtr> unit_successors(const ProcessPtr& p, const EvalConfig& cfg) {
  EvalConfig plain = cfg;
  plain.trace = false;
  std::map<std::string, ProcessPtr> out;
  for (const auto& t : process_transitions(p, plain)) {
    if (t.label.is_unit()) out.emplace(to_string(*t.target), t.target);
  }
  std::vector<ProcessPtr> result;
  for (auto& [_, q] : out) result.push_back(q);
  return result;
}

namespace {

void collect_witnesses(const Derivation& d, std::set<Term>& out) {
  if (d.witness()) out.insert(*d.witness());
  for (const auto& p : d.premises()) collect_witnesses(*p, out);
}

}  // namespace

DerivationPtr eliminate_extrusion(const DerivationPtr& d, const EvalConfig& cfg) {
  const auto* s = std::get_if<Step>(&d->conclusion());
  if (!s) throw InvalidDerivation("not a process transition");
  if (s->label.is_output() && !s->label.extruded.empty()) {
    throw ExtrudedConclusion("conclusion extrudes " + to_string(s->label));
  }
  replay(*d, cfg.alias);
  if (!d->uses(Rule::Open)) return d;

  EvalConfig traced = cfg;
  traced.trace = true;
  collect_witnesses(*d, traced.universe);
  const std::string want = to_string(*congruence_normal_form(s->target));
  for (const auto& t : process_transitions(s->source, traced)) {
    if (t.label == s->label && to_string(*t.target) == want) {
      return derive::congruence(t.trace, s->source, s->target);
    }
  }
  throw InvalidDerivation("no extrusion-free derivation of " + to_string(s->label) +
                          " within the bounded pool");
}

}  // namespace ldc
