#include "ldcalc/syntax.hpp"

#include <algorithm>

#include "ldcalc/errors.hpp"

namespace ldc {

Pattern pattern_of(const Triple& t) { return Pattern{Term(t.subject), Term(t.predicate), t.object}; }

bool is_ground(const Pattern& p) {
  return !is_var(p.subject) && !is_var(p.predicate) && !is_var(p.object);
}

Triple ground_triple(const Pattern& p) {
  return Triple{std::get<Term>(p.subject).name(), std::get<Term>(p.predicate).name(),
                std::get<Term>(p.object)};
}

std::string to_string(const Pattern& p) {
  return to_string(p.subject) + " " + to_string(p.predicate) + " " + to_string(p.object);
}

// ---------------------------------------------------------------------------
// Construction

QueryPtr Query::ask(Pattern p) {
  auto* q = new Query(QueryKind::Ask);
  q->pattern_ = std::move(p);
  return QueryPtr(q);
}

QueryPtr Query::filter(ConstraintPtr c) {
  auto* q = new Query(QueryKind::Filter);
  q->constraint_ = std::move(c);
  return QueryPtr(q);
}

QueryPtr Query::choice(QueryPtr a, QueryPtr b) {
  auto* q = new Query(QueryKind::Choice);
  q->left_ = std::move(a);
  q->right_ = std::move(b);
  return QueryPtr(q);
}

QueryPtr Query::tensor(QueryPtr a, QueryPtr b) {
  auto* q = new Query(QueryKind::Tensor);
  q->left_ = std::move(a);
  q->right_ = std::move(b);
  return QueryPtr(q);
}

QueryPtr Query::select(Var v, QueryPtr body) {
  auto* q = new Query(v.sort == Sort::Name ? QueryKind::SelectName : QueryKind::SelectLiteral);
  q->var_ = std::move(v);
  q->left_ = std::move(body);
  return QueryPtr(q);
}

QueryPtr Query::bang(QueryPtr body) {
  auto* q = new Query(QueryKind::Bang);
  q->left_ = std::move(body);
  return QueryPtr(q);
}

QueryPtr Query::then(QueryPtr guard, ProcessPtr continuation) {
  auto* q = new Query(QueryKind::Then);
  q->left_ = std::move(guard);
  q->continuation_ = std::move(continuation);
  return QueryPtr(q);
}

QueryPtr Query::one() {
  static const QueryPtr q = filter(Constraint::truth());
  return q;
}

QueryPtr Query::zero() {
  static const QueryPtr q = filter(Constraint::falsity());
  return q;
}

bool Query::is_one() const {
  return kind_ == QueryKind::Filter && constraint_->kind() == ConstraintKind::True;
}

bool Query::is_zero() const {
  return kind_ == QueryKind::Filter && constraint_->kind() == ConstraintKind::False;
}

ProcessPtr Process::nothing() {
  static const ProcessPtr p(new Process(ProcessKind::Nothing));
  return p;
}

ProcessPtr Process::par(ProcessPtr a, ProcessPtr b) {
  auto* p = new Process(ProcessKind::Par);
  p->left_ = std::move(a);
  p->right_ = std::move(b);
  return ProcessPtr(p);
}

ProcessPtr Process::scope(Name bound, ProcessPtr body) {
  auto* p = new Process(ProcessKind::Scope);
  p->bound_ = bound;
  p->left_ = std::move(body);
  return ProcessPtr(p);
}

ProcessPtr Process::query(QueryPtr q) {
  auto* p = new Process(ProcessKind::Query);
  p->query_ = std::move(q);
  return ProcessPtr(p);
}

ProcessPtr Process::stored(Pattern t) {
  auto* p = new Process(ProcessKind::Stored);
  p->triple_ = std::move(t);
  return ProcessPtr(p);
}

ProcessPtr Process::par_all(const std::vector<ProcessPtr>& parts) {
  if (parts.empty()) return nothing();
  ProcessPtr acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = par(*it, acc);
  return acc;
}

bool operator==(const Query& a, const Query& b) { return to_string(a) == to_string(b); }
bool operator==(const Process& a, const Process& b) { return to_string(a) == to_string(b); }

// ---------------------------------------------------------------------------
// Traversals

namespace {

void slot_names(const Slot& s, std::set<Name>& out) {
  if (const Term* t = std::get_if<Term>(&s); t && t->is_name()) out.insert(t->name());
}

void pattern_names(const Pattern& p, std::set<Name>& out) {
  slot_names(p.subject, out);
  slot_names(p.predicate, out);
  slot_names(p.object, out);
}

void constraint_names(const Constraint& c, std::set<Name>& out) {
  if (c.left()) constraint_names(*c.left(), out);
  if (c.right()) constraint_names(*c.right(), out);
  if (c.is_atom()) {
    slot_names(c.lhs(), out);
    if (c.kind() == ConstraintKind::NumLeq || c.kind() == ConstraintKind::Eq) {
      slot_names(c.rhs(), out);
    }
  }
}

void query_free_names(const Query& q, std::set<Name>& out);

void process_free_names(const Process& p, std::set<Name>& out) {
  switch (p.kind()) {
    case ProcessKind::Nothing:
      return;
    case ProcessKind::Par:
      process_free_names(*p.left(), out);
      process_free_names(*p.right(), out);
      return;
    case ProcessKind::Scope: {
      std::set<Name> inner;
      process_free_names(*p.body(), inner);
      inner.erase(p.bound());
      out.insert(inner.begin(), inner.end());
      return;
    }
    case ProcessKind::Query:
      query_free_names(*p.as_query(), out);
      return;
    case ProcessKind::Stored:
      pattern_names(p.triple(), out);
      return;
  }
}

void query_free_names(const Query& q, std::set<Name>& out) {
  switch (q.kind()) {
    case QueryKind::Ask:
      pattern_names(q.pattern(), out);
      return;
    case QueryKind::Filter:
      constraint_names(*q.constraint(), out);
      return;
    case QueryKind::Choice:
    case QueryKind::Tensor:
      query_free_names(*q.left(), out);
      query_free_names(*q.right(), out);
      return;
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral:
    case QueryKind::Bang:
      query_free_names(*q.body(), out);
      return;
    case QueryKind::Then:
      query_free_names(*q.left(), out);
      process_free_names(*q.continuation(), out);
      return;
  }
}

void slot_vars(const Slot& s, std::set<Var>& out) {
  if (const Var* v = std::get_if<Var>(&s)) out.insert(*v);
}

void query_free_vars(const Query& q, std::set<Var>& out);

void process_free_vars(const Process& p, std::set<Var>& out) {
  switch (p.kind()) {
    case ProcessKind::Nothing:
      return;
    case ProcessKind::Par:
      process_free_vars(*p.left(), out);
      process_free_vars(*p.right(), out);
      return;
    case ProcessKind::Scope:
      process_free_vars(*p.body(), out);
      return;
    case ProcessKind::Query:
      query_free_vars(*p.as_query(), out);
      return;
    case ProcessKind::Stored:
      slot_vars(p.triple().subject, out);
      slot_vars(p.triple().predicate, out);
      slot_vars(p.triple().object, out);
      return;
  }
}

void query_free_vars(const Query& q, std::set<Var>& out) {
  switch (q.kind()) {
    case QueryKind::Ask:
      slot_vars(q.pattern().subject, out);
      slot_vars(q.pattern().predicate, out);
      slot_vars(q.pattern().object, out);
      return;
    case QueryKind::Filter: {
      auto vs = free_vars(*q.constraint());
      out.insert(vs.begin(), vs.end());
      return;
    }
    case QueryKind::Choice:
    case QueryKind::Tensor:
      query_free_vars(*q.left(), out);
      query_free_vars(*q.right(), out);
      return;
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral: {
      std::set<Var> inner;
      query_free_vars(*q.body(), inner);
      inner.erase(q.var());
      out.insert(inner.begin(), inner.end());
      return;
    }
    case QueryKind::Bang:
      query_free_vars(*q.body(), out);
      return;
    case QueryKind::Then:
      query_free_vars(*q.left(), out);
      process_free_vars(*q.continuation(), out);
      return;
  }
}

Pattern map_pattern(const Pattern& p, const Substitution& s) {
  return Pattern{apply(s, p.subject), apply(s, p.predicate), apply(s, p.object)};
}

Name fresh_variant(const Name& base, const std::set<Name>& avoid) {
  for (int i = 1;; ++i) {
    Name candidate(base.str() + "'" + (i > 1 ? std::to_string(i) : std::string()));
    if (!avoid.count(candidate)) return candidate;
  }
}

Substitution restrict_to(const Substitution& s, const std::set<Var>& vars) {
  Substitution out;
  for (const auto& [v, t] : s) {
    if (vars.count(v)) out.emplace(v, t);
  }
  return out;
}

ProcessPtr subst_process(const ProcessPtr& p, const Substitution& s);

QueryPtr subst_query(const QueryPtr& q, const Substitution& s) {
  if (s.empty()) return q;
  switch (q->kind()) {
    case QueryKind::Ask:
      return Query::ask(map_pattern(q->pattern(), s));
    case QueryKind::Filter:
      return Query::filter(substitute(q->constraint(), s));
    case QueryKind::Choice:
      return Query::choice(subst_query(q->left(), s), subst_query(q->right(), s));
    case QueryKind::Tensor:
      return Query::tensor(subst_query(q->left(), s), subst_query(q->right(), s));
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral: {
      Substitution inner = s;
      inner.erase(q->var());
      if (inner.empty()) return q;
      return Query::select(q->var(), subst_query(q->body(), inner));
    }
    case QueryKind::Bang:
      return Query::bang(subst_query(q->body(), s));
    case QueryKind::Then:
      return Query::then(subst_query(q->left(), s), subst_process(q->continuation(), s));
  }
  return q;
}

ProcessPtr subst_process(const ProcessPtr& p, const Substitution& s) {
  if (s.empty()) return p;
  switch (p->kind()) {
    case ProcessKind::Nothing:
      return p;
    case ProcessKind::Par:
      return Process::par(subst_process(p->left(), s), subst_process(p->right(), s));
    case ProcessKind::Scope: {
      Substitution relevant = restrict_to(s, free_vars(*p->body()));
      if (relevant.empty()) return p;
      bool captures = false;
      std::set<Name> avoid = free_names(*p->body());
      for (const auto& [v, t] : relevant) {
        if (t.is_name()) {
          avoid.insert(t.name());
          if (t.name() == p->bound()) captures = true;
        }
      }
      if (!captures) return Process::scope(p->bound(), subst_process(p->body(), relevant));
      Name fresh = fresh_variant(p->bound(), avoid);
      ProcessPtr body = rename_name(p->body(), p->bound(), fresh);
      return Process::scope(fresh, subst_process(body, relevant));
    }
    case ProcessKind::Query:
      return Process::query(subst_query(p->as_query(), s));
    case ProcessKind::Stored:
      return Process::stored(map_pattern(p->triple(), s));
  }
  return p;
}

Slot rename_slot(const Slot& s, const Name& from, const Name& to) {
  if (const Term* t = std::get_if<Term>(&s); t && t->is_name() && t->name() == from) {
    return Term(to);
  }
  return s;
}

Pattern rename_pattern(const Pattern& p, const Name& from, const Name& to) {
  return Pattern{rename_slot(p.subject, from, to), rename_slot(p.predicate, from, to),
                 rename_slot(p.object, from, to)};
}

ConstraintPtr rename_constraint_name(const ConstraintPtr& c, const Name& from, const Name& to) {
  switch (c->kind()) {
    case ConstraintKind::True:
    case ConstraintKind::False:
      return c;
    case ConstraintKind::Or:
      return Constraint::disj(rename_constraint_name(c->left(), from, to),
                              rename_constraint_name(c->right(), from, to));
    case ConstraintKind::And:
      return Constraint::conj(rename_constraint_name(c->left(), from, to),
                              rename_constraint_name(c->right(), from, to));
    case ConstraintKind::Not:
      return Constraint::neg(rename_constraint_name(c->left(), from, to));
    case ConstraintKind::LenLeq:
      return Constraint::len_leq(rename_slot(c->lhs(), from, to), c->bound());
    case ConstraintKind::Regex:
      return Constraint::regex(rename_slot(c->lhs(), from, to), c->pattern());
    case ConstraintKind::NumLeq:
      return Constraint::num_leq(rename_slot(c->lhs(), from, to), rename_slot(c->rhs(), from, to));
    case ConstraintKind::Eq:
      return Constraint::eq(rename_slot(c->lhs(), from, to), rename_slot(c->rhs(), from, to));
  }
  return c;
}

}  // namespace

std::set<Name> free_names(const Process& p) {
  std::set<Name> out;
  process_free_names(p, out);
  return out;
}

std::set<Name> free_names(const Query& q) {
  std::set<Name> out;
  query_free_names(q, out);
  return out;
}

std::set<Var> free_vars(const Query& q) {
  std::set<Var> out;
  query_free_vars(q, out);
  return out;
}

std::set<Var> free_vars(const Process& p) {
  std::set<Var> out;
  process_free_vars(p, out);
  return out;
}

QueryPtr substitute(const QueryPtr& q, const Substitution& s) {
  check_sorts(s);
  return subst_query(q, s);
}

ProcessPtr substitute(const ProcessPtr& p, const Substitution& s) {
  check_sorts(s);
  return subst_process(p, s);
}

QueryPtr rename_name(const QueryPtr& q, const Name& from, const Name& to) {
  if (from == to) return q;
  switch (q->kind()) {
    case QueryKind::Ask:
      return Query::ask(rename_pattern(q->pattern(), from, to));
    case QueryKind::Filter:
      return Query::filter(rename_constraint_name(q->constraint(), from, to));
    case QueryKind::Choice:
      return Query::choice(rename_name(q->left(), from, to), rename_name(q->right(), from, to));
    case QueryKind::Tensor:
      return Query::tensor(rename_name(q->left(), from, to), rename_name(q->right(), from, to));
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral:
      return Query::select(q->var(), rename_name(q->body(), from, to));
    case QueryKind::Bang:
      return Query::bang(rename_name(q->body(), from, to));
    case QueryKind::Then:
      return Query::then(rename_name(q->left(), from, to),
                         rename_name(q->continuation(), from, to));
  }
  return q;
}

ProcessPtr rename_name(const ProcessPtr& p, const Name& from, const Name& to) {
  if (from == to) return p;
  switch (p->kind()) {
    case ProcessKind::Nothing:
      return p;
    case ProcessKind::Par:
      return Process::par(rename_name(p->left(), from, to), rename_name(p->right(), from, to));
    case ProcessKind::Scope: {
      if (p->bound() == from) return p;
      if (p->bound() == to) {
        std::set<Name> avoid = free_names(*p->body());
        avoid.insert(to);
        avoid.insert(from);
        Name fresh = fresh_variant(p->bound(), avoid);
        ProcessPtr body = rename_name(p->body(), p->bound(), fresh);
        return Process::scope(fresh, rename_name(body, from, to));
      }
      return Process::scope(p->bound(), rename_name(p->body(), from, to));
    }
    case ProcessKind::Query:
      return Process::query(rename_name(p->as_query(), from, to));
    case ProcessKind::Stored:
      return Process::stored(rename_pattern(p->triple(), from, to));
  }
  return p;
}

namespace {

Slot rename_var_slot(const Slot& s, const Var& from, const Var& to) {
  if (const Var* v = std::get_if<Var>(&s); v && *v == from) return to;
  return s;
}

}  // namespace

QueryPtr rename_var(const QueryPtr& q, const Var& from, const Var& to) {
  if (from == to) return q;
  switch (q->kind()) {
    case QueryKind::Ask: {
      const Pattern& p = q->pattern();
      return Query::ask(Pattern{rename_var_slot(p.subject, from, to),
                                rename_var_slot(p.predicate, from, to),
                                rename_var_slot(p.object, from, to)});
    }
    case QueryKind::Filter:
      return Query::filter(rename(q->constraint(), from, to));
    case QueryKind::Choice:
      return Query::choice(rename_var(q->left(), from, to), rename_var(q->right(), from, to));
    case QueryKind::Tensor:
      return Query::tensor(rename_var(q->left(), from, to), rename_var(q->right(), from, to));
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral:
      if (q->var() == from) return q;
      return Query::select(q->var(), rename_var(q->body(), from, to));
    case QueryKind::Bang:
      return Query::bang(rename_var(q->body(), from, to));
    case QueryKind::Then:
      return Query::then(rename_var(q->left(), from, to),
                         rename_var(q->continuation(), from, to));
  }
  return q;
}

ProcessPtr rename_var(const ProcessPtr& p, const Var& from, const Var& to) {
  if (from == to) return p;
  switch (p->kind()) {
    case ProcessKind::Nothing:
      return p;
    case ProcessKind::Par:
      return Process::par(rename_var(p->left(), from, to), rename_var(p->right(), from, to));
    case ProcessKind::Scope:
      return Process::scope(p->bound(), rename_var(p->body(), from, to));
    case ProcessKind::Query:
      return Process::query(rename_var(p->as_query(), from, to));
    case ProcessKind::Stored: {
      const Pattern& t = p->triple();
      return Process::stored(Pattern{rename_var_slot(t.subject, from, to),
                                     rename_var_slot(t.predicate, from, to),
                                     rename_var_slot(t.object, from, to)});
    }
  }
  return p;
}

namespace {

void collect_literals_slot(const Slot& s, std::set<Literal>& out) {
  if (const Term* t = std::get_if<Term>(&s); t && t->is_literal()) out.insert(t->literal());
}

void collect_literals_constraint(const Constraint& c, std::set<Literal>& out) {
  if (c.left()) collect_literals_constraint(*c.left(), out);
  if (c.right()) collect_literals_constraint(*c.right(), out);
  if (c.is_atom()) {
    collect_literals_slot(c.lhs(), out);
    if (c.kind() == ConstraintKind::NumLeq || c.kind() == ConstraintKind::Eq) {
      collect_literals_slot(c.rhs(), out);
    }
  }
}

void collect_literals(const Process& p, std::set<Literal>& out);

void collect_literals(const Query& q, std::set<Literal>& out) {
  switch (q.kind()) {
    case QueryKind::Ask:
      collect_literals_slot(q.pattern().object, out);
      return;
    case QueryKind::Filter:
      collect_literals_constraint(*q.constraint(), out);
      return;
    case QueryKind::Then:
      collect_literals(*q.left(), out);
      collect_literals(*q.continuation(), out);
      return;
    default:
      if (q.left()) collect_literals(*q.left(), out);
      if (q.right()) collect_literals(*q.right(), out);
  }
}

void collect_literals(const Process& p, std::set<Literal>& out) {
  switch (p.kind()) {
    case ProcessKind::Nothing:
      return;
    case ProcessKind::Par:
      collect_literals(*p.left(), out);
      collect_literals(*p.right(), out);
      return;
    case ProcessKind::Scope:
      collect_literals(*p.body(), out);
      return;
    case ProcessKind::Query:
      collect_literals(*p.as_query(), out);
      return;
    case ProcessKind::Stored:
      collect_literals_slot(p.triple().object, out);
      return;
  }
}

void collect_all_names(const Process& p, std::set<Name>& out) {
  switch (p.kind()) {
    case ProcessKind::Nothing:
      return;
    case ProcessKind::Par:
      collect_all_names(*p.left(), out);
      collect_all_names(*p.right(), out);
      return;
    case ProcessKind::Scope:
      out.insert(p.bound());
      collect_all_names(*p.body(), out);
      return;
    default: {
      // Scopes inside continuations: collect bound names too.
      auto fn = free_names(p);
      out.insert(fn.begin(), fn.end());
      if (p.kind() == ProcessKind::Query) {
        std::vector<const Query*> stack{p.as_query().get()};
        while (!stack.empty()) {
          const Query* q = stack.back();
          stack.pop_back();
          if (q->kind() == QueryKind::Then) collect_all_names(*q->continuation(), out);
          if (q->left()) stack.push_back(q->left().get());
          if (q->right()) stack.push_back(q->right().get());
        }
      }
    }
  }
}

}  // namespace

std::set<Literal> literals_of(const Process& p) {
  std::set<Literal> out;
  collect_literals(p, out);
  return out;
}

std::set<Name> all_names(const Process& p) {
  std::set<Name> out;
  collect_all_names(p, out);
  return out;
}

std::size_t size(const Query& q) {
  std::size_t n = 1;
  if (q.left()) n += size(*q.left());
  if (q.right()) n += size(*q.right());
  if (q.continuation()) n += size(*q.continuation());
  return n;
}

std::size_t size(const Process& p) {
  switch (p.kind()) {
    case ProcessKind::Query:
      return 1 + size(*p.as_query());
    case ProcessKind::Par:
      return 1 + size(*p.left()) + size(*p.right());
    case ProcessKind::Scope:
      return 1 + size(*p.body());
    default:
      return 1;
  }
}

std::size_t depth(const Query& q) {
  std::size_t d = 0;
  if (q.left()) d = std::max(d, depth(*q.left()));
  if (q.right()) d = std::max(d, depth(*q.right()));
  return d + 1;
}

// ---------------------------------------------------------------------------
// Derived forms

QueryPtr expand_exponent(const QueryPtr& u, unsigned n) {
  if (n == 0) return Query::one();
  QueryPtr acc = u;
  for (unsigned i = 1; i < n; ++i) acc = Query::tensor(u, acc);
  return acc;
}

QueryPtr expand_limit(const QueryPtr& u, unsigned k) {
  QueryPtr acc = Query::one();
  for (unsigned n = 1; n <= k; ++n) acc = Query::choice(acc, expand_exponent(u, n));
  return acc;
}

QueryPtr optional(const QueryPtr& u) { return Query::choice(u, Query::one()); }

}  // namespace ldc
