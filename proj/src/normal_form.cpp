#include <algorithm>
#include <map>
#include <numeric>

#include "ldcalc/errors.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

namespace {

using VarMap = std::map<Var, Var>;

Slot map_var(const Slot& s, const VarMap& env) {
  if (const Var* v = std::get_if<Var>(&s)) {
    auto it = env.find(*v);
    if (it != env.end()) return it->second;
  }
  return s;
}

Pattern map_pattern(const Pattern& p, const VarMap& env) {
  return Pattern{map_var(p.subject, env), map_var(p.predicate, env), map_var(p.object, env)};
}

ConstraintPtr map_constraint(const ConstraintPtr& c, const VarMap& env) {
  switch (c->kind()) {
    case ConstraintKind::True:
    case ConstraintKind::False:
      return c;
    case ConstraintKind::Or:
      return Constraint::disj(map_constraint(c->left(), env), map_constraint(c->right(), env));
    case ConstraintKind::And:
      return Constraint::conj(map_constraint(c->left(), env), map_constraint(c->right(), env));
    case ConstraintKind::Not:
      return Constraint::neg(map_constraint(c->left(), env));
    case ConstraintKind::LenLeq:
      return Constraint::len_leq(map_var(c->lhs(), env), c->bound());
    case ConstraintKind::Regex:
      return Constraint::regex(map_var(c->lhs(), env), c->pattern());
    case ConstraintKind::NumLeq:
      return Constraint::num_leq(map_var(c->lhs(), env), map_var(c->rhs(), env));
    case ConstraintKind::Eq:
      return Constraint::eq(map_var(c->lhs(), env), map_var(c->rhs(), env));
  }
  return c;
}

ProcessPtr canon_vars(const ProcessPtr& p, unsigned level, const VarMap& env);

// Select variables become v<level>, numbered by select nesting depth.
// The numbering continues into continuations so inner binders never
// capture outer ones.
QueryPtr canon_vars(const QueryPtr& q, unsigned level, const VarMap& env) {
  switch (q->kind()) {
    case QueryKind::Ask:
      return Query::ask(map_pattern(q->pattern(), env));
    case QueryKind::Filter:
      return Query::filter(map_constraint(q->constraint(), env));
    case QueryKind::Choice:
      return Query::choice(canon_vars(q->left(), level, env), canon_vars(q->right(), level, env));
    case QueryKind::Tensor:
      return Query::tensor(canon_vars(q->left(), level, env), canon_vars(q->right(), level, env));
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral: {
      Var fresh{q->var().sort, "v" + std::to_string(level)};
      VarMap inner = env;
      inner[q->var()] = fresh;
      return Query::select(fresh, canon_vars(q->body(), level + 1, inner));
    }
    case QueryKind::Bang:
      return Query::bang(canon_vars(q->body(), level, env));
    case QueryKind::Then:
      return Query::then(canon_vars(q->left(), level, env),
                         canon_vars(q->continuation(), level, env));
  }
  return q;
}

ProcessPtr canon_vars(const ProcessPtr& p, unsigned level, const VarMap& env) {
  switch (p->kind()) {
    case ProcessKind::Nothing:
      return p;
    case ProcessKind::Par:
      return Process::par(canon_vars(p->left(), level, env), canon_vars(p->right(), level, env));
    case ProcessKind::Scope:
      return Process::scope(p->bound(), canon_vars(p->body(), level, env));
    case ProcessKind::Query:
      return Process::query(canon_vars(p->as_query(), level, env));
    case ProcessKind::Stored:
      return Process::stored(map_pattern(p->triple(), env));
  }
  return p;
}

// The i-th canonical bound name, skipping names in `avoid`.
class CanonicalNames {
 public:
  explicit CanonicalNames(const std::set<Name>* avoid) : avoid_(avoid) {}

  Name at(std::size_t i) {
    while (names_.size() <= i) {
      Name n(kBoundPrefix + std::to_string(next_++));
      if (!avoid_->count(n)) names_.push_back(n);
    }
    return names_[i];
  }

 private:
  const std::set<Name>* avoid_;
  std::vector<Name> names_;
  std::size_t next_ = 0;
};

struct Gathered {
  std::vector<Name> bound;
  std::vector<ProcessPtr> parts;  // Stored or Query leaves
};

std::size_t& temp_counter() {
  static thread_local std::size_t n = 0;
  return n;
}

void gather(const ProcessPtr& p, Gathered& g) {
  switch (p->kind()) {
    case ProcessKind::Nothing:
      return;
    case ProcessKind::Par:
      gather(p->left(), g);
      gather(p->right(), g);
      return;
    case ProcessKind::Scope: {
      Name temp("\x01" + std::to_string(temp_counter()++) + "\x02");
      g.bound.push_back(temp);
      gather(rename_name(p->body(), p->bound(), temp), g);
      return;
    }
    default:
      g.parts.push_back(p);
  }
}

ProcessPtr nf_process(const ProcessPtr& p, std::size_t offset, CanonicalNames& canon);

QueryPtr nf_continuations(const QueryPtr& q, std::size_t offset, CanonicalNames& canon) {
  switch (q->kind()) {
    case QueryKind::Ask:
    case QueryKind::Filter:
      return q;
    case QueryKind::Choice:
      return Query::choice(nf_continuations(q->left(), offset, canon),
                           nf_continuations(q->right(), offset, canon));
    case QueryKind::Tensor:
      return Query::tensor(nf_continuations(q->left(), offset, canon),
                           nf_continuations(q->right(), offset, canon));
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral:
      return Query::select(q->var(), nf_continuations(q->body(), offset, canon));
    case QueryKind::Bang:
      return Query::bang(nf_continuations(q->body(), offset, canon));
    case QueryKind::Then:
      return Query::then(nf_continuations(q->left(), offset, canon),
                         nf_process(q->continuation(), offset, canon));
  }
  return q;
}

struct Candidate {
  std::string key;
  std::vector<std::pair<std::string, ProcessPtr>> parts;
};

Candidate render(const std::vector<ProcessPtr>& parts, const std::vector<Name>& from,
                 const std::vector<Name>& to, std::size_t offset, CanonicalNames& canon) {
  Candidate c;
  for (const auto& part : parts) {
    ProcessPtr r = part;
    for (std::size_t i = 0; i < from.size(); ++i) r = rename_name(r, from[i], to[i]);
    if (r->kind() == ProcessKind::Query) {
      r = Process::query(nf_continuations(r->as_query(), offset + from.size(), canon));
    }
    c.parts.emplace_back(to_string(*r), r);
  }
  std::sort(c.parts.begin(), c.parts.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [s, _] : c.parts) {
    c.key += s;
    c.key += '\n';
  }
  return c;
}

ProcessPtr nf_process(const ProcessPtr& p, std::size_t offset, CanonicalNames& canon) {
  Gathered g;
  gather(p, g);

  std::set<Name> used;
  for (const auto& part : g.parts) {
    auto fn = free_names(*part);
    used.insert(fn.begin(), fn.end());
  }
  std::vector<Name> bound;
  for (const auto& b : g.bound) {
    if (used.count(b)) bound.push_back(b);
  }

  std::vector<Name> targets;
  for (std::size_t i = 0; i < bound.size(); ++i) targets.push_back(canon.at(offset + i));

  Candidate best;
  if (bound.size() <= 6) {
    std::vector<std::size_t> perm(bound.size());
    std::iota(perm.begin(), perm.end(), 0);
    bool first = true;
    do {
      std::vector<Name> to(bound.size());
      for (std::size_t i = 0; i < bound.size(); ++i) to[i] = targets[perm[i]];
      Candidate c = render(g.parts, bound, to, offset, canon);
      if (first || c.key < best.key) best = std::move(c);
      first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    // Order binders by first occurrence once every binder is masked.
    Name mask("\x01?");
    std::vector<Name> masks(bound.size(), mask);
    std::vector<std::pair<std::string, std::size_t>> order;
    for (std::size_t i = 0; i < g.parts.size(); ++i) {
      ProcessPtr r = g.parts[i];
      for (const auto& b : bound) r = rename_name(r, b, mask);
      order.emplace_back(to_string(*r), i);
    }
    std::sort(order.begin(), order.end());
    std::vector<Name> seen;
    for (const auto& [_, i] : order) {
      std::string s = to_string(*g.parts[i]);
      std::vector<std::pair<std::size_t, Name>> hits;
      for (const auto& b : bound) {
        if (std::find(seen.begin(), seen.end(), b) != seen.end()) continue;
        auto pos = s.find(b.str());
        if (pos != std::string::npos) hits.emplace_back(pos, b);
      }
      std::sort(hits.begin(), hits.end());
      for (const auto& [pos, b] : hits) seen.push_back(b);
    }
    std::vector<Name> to(bound.size());
    for (std::size_t i = 0; i < seen.size(); ++i) {
      auto idx = std::find(bound.begin(), bound.end(), seen[i]) - bound.begin();
      to[idx] = targets[i];
    }
    best = render(g.parts, bound, to, offset, canon);
  }

  std::vector<ProcessPtr> parts;
  for (auto& [_, r] : best.parts) parts.push_back(r);
  ProcessPtr out = Process::par_all(parts);
  for (auto it = targets.rbegin(); it != targets.rend(); ++it) out = Process::scope(*it, out);
  return out;
}

}  // namespace

ProcessPtr congruence_normal_form(const ProcessPtr& p) {
  ProcessPtr renamed = canon_vars(p, 0, {});
  std::set<Name> avoid = free_names(*renamed);
  CanonicalNames canon(&avoid);
  return nf_process(renamed, 0, canon);
}

bool congruent(const ProcessPtr& p, const ProcessPtr& q) {
  return to_string(*congruence_normal_form(p)) == to_string(*congruence_normal_form(q));
}

FlatProcess flatten(const ProcessPtr& p) {
  ProcessPtr n = congruence_normal_form(p);
  FlatProcess f;
  while (n->kind() == ProcessKind::Scope) {
    f.bound.push_back(n->bound());
    n = n->body();
  }
  std::vector<ProcessPtr> parts;
  while (n->kind() == ProcessKind::Par) {
    parts.push_back(n->left());
    n = n->right();
  }
  if (n->kind() != ProcessKind::Nothing) parts.push_back(n);
  for (const auto& part : parts) {
    if (part->kind() == ProcessKind::Stored) {
      if (!is_ground(part->triple())) {
        throw OpenProcess("stored triple is not ground: " + to_string(part->triple()));
      }
      f.stores.push_back(ground_triple(part->triple()));
    } else {
      f.queries.push_back(part->as_query());
    }
  }
  return f;
}

ProcessPtr compose(const FlatProcess& f) {
  std::vector<ProcessPtr> parts;
  for (const auto& t : f.stores) parts.push_back(Process::stored(t));
  for (const auto& q : f.queries) parts.push_back(Process::query(q));
  ProcessPtr out = Process::par_all(parts);
  for (auto it = f.bound.rbegin(); it != f.bound.rend(); ++it) out = Process::scope(*it, out);
  return congruence_normal_form(out);
}

}  // namespace ldc
