#include "ldcalc/reduction.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "ldcalc/errors.hpp"

namespace ldc {

Pool make_pool(const EvalConfig& cfg, const Process& p) {
  std::set<Name> names = all_names(p);
  std::set<Literal> literals = literals_of(p);
  for (const auto& t : cfg.universe) {
    if (t.is_name()) {
      names.insert(t.name());
    } else {
      literals.insert(t.literal());
    }
  }
  for (const auto& n : cfg.alias.names()) names.insert(n);
  return Pool{{names.begin(), names.end()}, {literals.begin(), literals.end()}};
}

void validate(const EvalConfig& cfg) {
  for (const auto& n : cfg.alias.names()) {
    if (n.str().rfind(kBoundPrefix, 0) == 0 ||
        (!cfg.fresh_prefix.empty() && n.str().rfind(cfg.fresh_prefix, 0) == 0)) {
      throw Error("alias table mentions reserved name " + to_string(n));
    }
  }
}

void require_closed(const Process& p) {
  auto vars = free_vars(p);
  if (!vars.empty()) throw OpenProcess("free variable " + to_string(*vars.begin()));
}

namespace {

// How one query was answered, kept so that a commitment derivation can be
// produced for the chosen resolution on demand.
struct Proof {
  enum class Kind { Ask, Filter, ChooseLeft, ChooseRight, Tensor, Bang, Select, Guard };
  Kind kind;
  QueryPtr query;
  std::vector<std::shared_ptr<const Proof>> children;  // Bang: one per copy
  std::optional<Term> witness;
  std::size_t ask_index = 0;  // Ask: position in Resolution::asks
};
using ProofPtr = std::shared_ptr<const Proof>;

struct Resolution {
  std::vector<Triple> asks;
  std::vector<ProcessPtr> conts;
  unsigned cost = 0;
  ProofPtr proof;
};

ProofPtr make_proof(Proof::Kind k, QueryPtr q, std::vector<ProofPtr> children = {}) {
  auto p = std::make_shared<Proof>();
  p->kind = k;
  p->query = std::move(q);
  p->children = std::move(children);
  return p;
}

// Shifts ask indices of a proof by `offset` (tensor combination).
ProofPtr shifted(const ProofPtr& p, std::size_t offset) {
  if (offset == 0) return p;
  auto q = std::make_shared<Proof>(*p);
  if (q->kind == Proof::Kind::Ask) q->ask_index += offset;
  for (auto& c : q->children) c = shifted(c, offset);
  return q;
}

Resolution combine(const Resolution& a, const Resolution& b) {
  Resolution r;
  r.asks = a.asks;
  r.asks.insert(r.asks.end(), b.asks.begin(), b.asks.end());
  r.conts = a.conts;
  r.conts.insert(r.conts.end(), b.conts.begin(), b.conts.end());
  r.cost = a.cost + b.cost;
  return r;
}

std::string key_of(const Resolution& r) {
  std::vector<std::string> asks, conts;
  for (const auto& t : r.asks) asks.push_back(to_string(t));
  for (const auto& c : r.conts) conts.push_back(to_string(*c));
  std::sort(asks.begin(), asks.end());
  std::sort(conts.begin(), conts.end());
  std::string k;
  for (const auto& s : asks) k += s + ";";
  k += "|";
  for (const auto& s : conts) k += s + ";";
  return k;
}

void dedup(std::vector<Resolution>& rs) {
  std::map<std::string, std::size_t> seen;
  std::vector<Resolution> out;
  for (auto& r : rs) {
    auto [it, fresh] = seen.emplace(key_of(r), out.size());
    if (fresh) {
      out.push_back(std::move(r));
    } else if (r.cost < out[it->second].cost) {
      out[it->second] = std::move(r);
    }
  }
  rs = std::move(out);
}

class Resolver {
 public:
  explicit Resolver(const Pool& pool) : pool_(pool) {}

  std::vector<Resolution> resolve(const QueryPtr& q, unsigned budget) {
    std::vector<Resolution> out;
    switch (q->kind()) {
      case QueryKind::Ask: {
        if (!is_ground(q->pattern())) throw OpenProcess("open ask " + to_string(q->pattern()));
        Resolution r;
        r.asks.push_back(ground_triple(q->pattern()));
        r.proof = make_proof(Proof::Kind::Ask, q);
        out.push_back(std::move(r));
        return out;
      }
      case QueryKind::Filter: {
        bool ok = false;
        try {
          ok = holds(*q->constraint());
        } catch (const NonGroundConstraint& e) {
          throw OpenProcess(e.what());
        }
        if (ok) {
          Resolution r;
          r.proof = make_proof(Proof::Kind::Filter, q);
          out.push_back(std::move(r));
        }
        return out;
      }
      case QueryKind::Choice: {
        for (auto& r : resolve(q->left(), budget)) {
          r.proof = make_proof(Proof::Kind::ChooseLeft, q, {r.proof});
          out.push_back(std::move(r));
        }
        for (auto& r : resolve(q->right(), budget)) {
          r.proof = make_proof(Proof::Kind::ChooseRight, q, {r.proof});
          out.push_back(std::move(r));
        }
        break;
      }
      case QueryKind::Tensor: {
        auto left = resolve(q->left(), budget);
        if (left.empty()) return out;
        unsigned min_left = budget;
        for (const auto& l : left) min_left = std::min(min_left, l.cost);
        auto right = resolve(q->right(), budget - min_left);
        for (const auto& l : left) {
          for (const auto& r : right) {
            if (l.cost + r.cost > budget) continue;
            Resolution c = combine(l, r);
            c.proof = make_proof(Proof::Kind::Tensor, q, {l.proof, shifted(r.proof, l.asks.size())});
            out.push_back(std::move(c));
          }
        }
        break;
      }
      case QueryKind::SelectName:
      case QueryKind::SelectLiteral: {
        std::vector<Term> candidates;
        if (q->kind() == QueryKind::SelectName) {
          for (const auto& n : pool_.names) candidates.emplace_back(n);
        } else {
          for (const auto& l : pool_.literals) candidates.emplace_back(l);
        }
        for (const auto& c : candidates) {
          QueryPtr body = substitute(q->body(), Substitution{{q->var(), c}});
          for (auto& r : resolve(body, budget)) {
            auto p = make_proof(Proof::Kind::Select, q, {r.proof});
            std::const_pointer_cast<Proof>(p)->witness = c;
            r.proof = p;
            out.push_back(std::move(r));
          }
        }
        break;
      }
      case QueryKind::Bang: {
        std::vector<Resolution> copies;
        if (budget > 0) copies = resolve(q->body(), budget - 1);
        std::vector<const Resolution*> chosen;
        std::function<void(std::size_t, unsigned)> pick = [&](std::size_t from, unsigned used) {
          Resolution r;
          std::vector<ProofPtr> parts;
          for (const Resolution* c : chosen) {
            Resolution next = combine(r, *c);
            parts.push_back(shifted(c->proof, r.asks.size()));
            r = std::move(next);
          }
          r.cost = used;
          r.proof = make_proof(Proof::Kind::Bang, q, parts);
          out.push_back(std::move(r));
          for (std::size_t i = from; i < copies.size(); ++i) {
            unsigned cost = used + 1 + copies[i].cost;
            if (cost > budget) continue;
            chosen.push_back(&copies[i]);
            pick(i, cost);
            chosen.pop_back();
          }
        };
        pick(0, 0);
        break;
      }
      case QueryKind::Then: {
        for (auto& r : resolve(q->left(), budget)) {
          r.conts.push_back(q->continuation());
          r.proof = make_proof(Proof::Kind::Guard, q, {r.proof});
          out.push_back(std::move(r));
        }
        break;
      }
    }
    dedup(out);
    return out;
  }

 private:
  const Pool& pool_;
};

// Assigns each ask a distinct store below it; returns store indices.
bool match(const AliasTable& alias, const std::vector<Triple>& asks,
           const std::vector<Triple>& stores, std::vector<std::size_t>& assignment) {
  assignment.assign(asks.size(), 0);
  std::vector<bool> used(stores.size(), false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == asks.size()) return true;
    for (std::size_t s = 0; s < stores.size(); ++s) {
      if (used[s] || !triple_leq(alias, stores[s], asks[i])) continue;
      used[s] = true;
      assignment[i] = s;
      if (go(i + 1)) return true;
      used[s] = false;
    }
    return false;
  };
  return go(0);
}

DerivationPtr to_derivation(const ProofPtr& p, const AliasTable& alias,
                            const std::vector<Triple>& asks,
                            const std::vector<Triple>& matched) {
  const QueryPtr& q = p->query;
  auto sub = [&](std::size_t i) { return to_derivation(p->children[i], alias, asks, matched); };
  switch (p->kind) {
    case Proof::Kind::Ask:
      return derive::ask(alias, matched[p->ask_index], q->pattern());
    case Proof::Kind::Filter:
      return derive::filter(q->constraint());
    case Proof::Kind::ChooseLeft:
      return derive::choose_left(sub(0), q->right());
    case Proof::Kind::ChooseRight:
      return derive::choose_right(q->left(), sub(0));
    case Proof::Kind::Tensor:
      return derive::tensor(sub(0), sub(1));
    case Proof::Kind::Select:
      return derive::select(q->var(), q->body(), *p->witness, sub(0));
    case Proof::Kind::Guard:
      return derive::guard(sub(0), q->continuation());
    case Proof::Kind::Bang: {
      std::size_t m = p->children.size();
      if (m == 0) return derive::weakening(q->body());
      // !U => ... from U, or from !U (x) !U with one copy derelicted.
      DerivationPtr acc = derive::dereliction(sub(m - 1));
      for (std::size_t i = m - 1; i-- > 0;) {
        acc = derive::contraction(derive::tensor(derive::dereliction(sub(i)), acc));
      }
      return acc;
    }
  }
  throw Error("unreachable proof kind");
}

}  // namespace

std::vector<Commitment> commitments(const ProcessPtr& p, const EvalConfig& cfg) {
  require_closed(*p);
  FlatProcess f = flatten(p);
  ProcessPtr source = compose(f);
  Pool pool = make_pool(cfg, *source);
  Resolver resolver(pool);

  std::map<std::string, Commitment> out;
  for (std::size_t i = 0; i < f.queries.size(); ++i) {
    for (const auto& r : resolver.resolve(f.queries[i], cfg.iter_bound)) {
      std::vector<std::size_t> assignment;
      if (!match(cfg.alias, r.asks, f.stores, assignment)) continue;

      std::vector<ProcessPtr> parts;
      for (const auto& s : f.stores) parts.push_back(Process::stored(s));
      for (std::size_t j = 0; j < f.queries.size(); ++j) {
        if (j != i) parts.push_back(Process::query(f.queries[j]));
      }
      parts.insert(parts.end(), r.conts.begin(), r.conts.end());
      ProcessPtr target = Process::par_all(parts);
      for (auto it = f.bound.rbegin(); it != f.bound.rend(); ++it) {
        target = Process::scope(*it, target);
      }
      target = congruence_normal_form(target);
      std::string key = to_string(*target);
      if (out.count(key)) continue;

      Commitment c{source, target, nullptr};
      if (cfg.trace) {
        std::vector<Triple> matched;
        std::vector<bool> used(f.stores.size(), false);
        for (std::size_t k : assignment) {
          matched.push_back(f.stores[k]);
          used[k] = true;
        }
        DerivationPtr d = to_derivation(r.proof, cfg.alias, r.asks, matched);
        std::vector<ProcessPtr> idle;
        for (std::size_t k = 0; k < f.stores.size(); ++k) {
          if (!used[k]) idle.push_back(Process::stored(f.stores[k]));
        }
        for (std::size_t j = 0; j < f.queries.size(); ++j) {
          if (j != i) idle.push_back(Process::query(f.queries[j]));
        }
        if (!idle.empty()) d = derive::context(d, Process::par_all(idle));
        for (auto it = f.bound.rbegin(); it != f.bound.rend(); ++it) {
          d = derive::blank_node(cfg.alias, d, *it);
        }
        c.trace = derive::congruence(d, source, target);
      }
      out.emplace(key, std::move(c));
    }
  }
  std::vector<Commitment> result;
  for (auto& [_, c] : out) result.push_back(std::move(c));
  return result;
}

std::vector<ProcessPtr> successors(const ProcessPtr& p, const EvalConfig& cfg) {
  EvalConfig plain = cfg;
  plain.trace = false;
  std::vector<ProcessPtr> out;
  for (auto& c : commitments(p, plain)) out.push_back(c.target);
  return out;
}

bool reduces(const ProcessPtr& p, const ProcessPtr& q, const EvalConfig& cfg) {
  std::string want = to_string(*congruence_normal_form(q));
  for (const auto& t : successors(p, cfg)) {
    if (to_string(*t) == want) return true;
  }
  return false;
}

}  // namespace ldc
