#include "ldcalc/algebra.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "ldcalc/equivalence.hpp"
#include "ldcalc/errors.hpp"

namespace ldc {

namespace {

using Q = Query;
using P = Process;

QueryPtr with_children(const QueryPtr& q, const std::vector<QueryPtr>& c) {
  switch (q->kind()) {
    case QueryKind::Choice: return Q::choice(c[0], c[1]);
    case QueryKind::Tensor: return Q::tensor(c[0], c[1]);
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral: return Q::select(q->var(), c[0]);
    case QueryKind::Bang: return Q::bang(c[0]);
    case QueryKind::Then: return Q::then(c[0], q->continuation());
    default: return q;
  }
}

std::vector<QueryPtr> children(const QueryPtr& q) {
  switch (q->kind()) {
    case QueryKind::Choice:
    case QueryKind::Tensor: return {q->left(), q->right()};
    case QueryKind::SelectName:
    case QueryKind::SelectLiteral:
    case QueryKind::Bang:
    case QueryKind::Then: return {q->left()};
    default: return {};
  }
}

bool is_select(const QueryPtr& q) {
  return q->kind() == QueryKind::SelectName || q->kind() == QueryKind::SelectLiteral;
}

bool same(const QueryPtr& a, const QueryPtr& b) { return *a == *b; }

// ---------------------------------------------------------------------------
// Oriented rewrites

using Rewrite = std::function<std::optional<QueryPtr>(const QueryPtr&)>;

std::optional<QueryPtr> tensor_unit(const QueryPtr& q) {
  if (q->kind() != QueryKind::Tensor) return std::nullopt;
  if (q->right()->is_one()) return q->left();
  if (q->left()->is_one()) return q->right();
  return std::nullopt;
}

std::optional<QueryPtr> choice_unit(const QueryPtr& q) {
  if (q->kind() != QueryKind::Choice) return std::nullopt;
  if (q->right()->is_zero()) return q->left();
  if (q->left()->is_zero()) return q->right();
  return std::nullopt;
}

std::optional<QueryPtr> zero_annihilates(const QueryPtr& q) {
  if (q->kind() != QueryKind::Tensor) return std::nullopt;
  if (q->left()->is_zero() || q->right()->is_zero()) return Q::zero();
  return std::nullopt;
}

std::optional<QueryPtr> select_zero(const QueryPtr& q) {
  if (is_select(q) && q->body()->is_zero()) return Q::zero();
  return std::nullopt;
}

std::optional<QueryPtr> reassociate(const QueryPtr& q, QueryKind kind) {
  if (q->kind() != kind || q->left()->kind() != kind) return std::nullopt;
  const QueryPtr& inner = q->left();
  if (kind == QueryKind::Choice) return Q::choice(inner->left(), Q::choice(inner->right(), q->right()));
  return Q::tensor(inner->left(), Q::tensor(inner->right(), q->right()));
}

bool in_chain(const QueryPtr& u, const QueryPtr& chain) {
  if (same(u, chain)) return true;
  return chain->kind() == QueryKind::Choice && (same(u, chain->left()) || in_chain(u, chain->right()));
}

std::optional<QueryPtr> choice_idempotent(const QueryPtr& q) {
  if (q->kind() != QueryKind::Choice) return std::nullopt;
  if (in_chain(q->left(), q->right())) return q->right();
  return std::nullopt;
}

std::optional<QueryPtr> filter_and(const QueryPtr& q) {
  if (q->kind() != QueryKind::Tensor || q->left()->kind() != QueryKind::Filter ||
      q->right()->kind() != QueryKind::Filter) {
    return std::nullopt;
  }
  return Q::filter(Constraint::conj(q->left()->constraint(), q->right()->constraint()));
}

std::optional<QueryPtr> filter_or(const QueryPtr& q) {
  if (q->kind() != QueryKind::Choice || q->left()->kind() != QueryKind::Filter ||
      q->right()->kind() != QueryKind::Filter) {
    return std::nullopt;
  }
  return Q::filter(Constraint::disj(q->left()->constraint(), q->right()->constraint()));
}

std::optional<QueryPtr> distribute(const QueryPtr& q) {
  if (q->kind() != QueryKind::Tensor) return std::nullopt;
  const QueryPtr& l = q->left();
  const QueryPtr& r = q->right();
  if (r->kind() == QueryKind::Choice) {
    return Q::choice(Q::tensor(l, r->left()), Q::tensor(l, r->right()));
  }
  if (l->kind() == QueryKind::Choice) {
    return Q::choice(Q::tensor(l->left(), r), Q::tensor(l->right(), r));
  }
  return std::nullopt;
}

std::optional<QueryPtr> select_choice(const QueryPtr& q) {
  if (!is_select(q) || q->body()->kind() != QueryKind::Choice) return std::nullopt;
  return Q::choice(Q::select(q->var(), q->body()->left()), Q::select(q->var(), q->body()->right()));
}

std::optional<QueryPtr> select_tensor(const QueryPtr& q) {
  if (!is_select(q) || q->body()->kind() != QueryKind::Tensor) return std::nullopt;
  const QueryPtr& l = q->body()->left();
  const QueryPtr& r = q->body()->right();
  if (!free_vars(*r).count(q->var())) return Q::tensor(Q::select(q->var(), l), r);
  if (!free_vars(*l).count(q->var())) return Q::tensor(l, Q::select(q->var(), r));
  return std::nullopt;
}

std::optional<QueryPtr> then_then(const QueryPtr& q) {
  if (q->kind() != QueryKind::Then || q->left()->kind() != QueryKind::Then) return std::nullopt;
  return Q::then(q->left()->left(), P::par(q->left()->continuation(), q->continuation()));
}

std::optional<QueryPtr> then_nil(const QueryPtr& q) {
  if (q->kind() != QueryKind::Then || !q->left()->is_one() ||
      q->continuation()->kind() != ProcessKind::Nothing) {
    return std::nullopt;
  }
  return Q::one();
}

// Peels the selects under a bang; returns the innermost body.
QueryPtr under_selects(const QueryPtr& q, std::vector<Var>& vars) {
  QueryPtr cur = q;
  while (is_select(cur)) {
    vars.push_back(cur->var());
    cur = cur->body();
  }
  return cur;
}

QueryPtr wrap_selects(QueryPtr body, const std::vector<Var>& vars) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Q::select(*it, body);
  return body;
}

std::optional<QueryPtr> bang_select_factor(const QueryPtr& q) {
  if (q->kind() != QueryKind::Bang || !is_select(q->body())) return std::nullopt;
  std::vector<Var> vars;
  QueryPtr body = under_selects(q->body(), vars);
  if (body->kind() != QueryKind::Choice) return std::nullopt;
  return Q::tensor(Q::bang(wrap_selects(body->left(), vars)),
                   Q::bang(wrap_selects(body->right(), vars)));
}

std::optional<QueryPtr> prune_left(const QueryPtr& q) {
  if (q->kind() != QueryKind::Choice) return std::nullopt;
  return q->right();
}

std::optional<QueryPtr> prune_right(const QueryPtr& q) {
  if (q->kind() != QueryKind::Choice) return std::nullopt;
  return q->left();
}

// ---------------------------------------------------------------------------
// Instances

QueryPtr sub(Generator& g, const QueryShape& shape = {}) {
  return g.query(1 + static_cast<unsigned>(g.below(2)), shape);
}

QueryPtr open_sub(Generator& g, std::vector<Var> vars, const QueryShape& shape = {}) {
  return g.open_query(1 + static_cast<unsigned>(g.below(2)), vars, shape);
}

LawInstance equation(Generator& g, ProcessPtr lhs, ProcessPtr rhs) {
  EvalConfig cfg = g.params().config();
  return LawInstance{std::move(lhs), std::move(rhs), cfg, cfg, nullptr, nullptr, true};
}

LawInstance query_equation(Generator& g, const QueryPtr& lhs, const QueryPtr& rhs) {
  return equation(g, P::query(lhs), P::query(rhs));
}

LawInstance inequation(Generator& g, const QueryPtr& lower, const QueryPtr& upper,
                       bool expected = true) {
  EvalConfig cfg = g.params().config();
  return LawInstance{P::query(Q::choice(lower, upper)), P::query(upper), cfg, cfg, lower, upper, expected};
}

Var var_a(Generator& g) { return Var{g.chance(0.75) ? Sort::Name : Sort::Literal, "a"}; }

std::vector<Term> candidates(Generator& g, Sort sort) {
  std::vector<Term> out;
  if (sort == Sort::Name) {
    for (const auto& n : g.params().names) out.emplace_back(n);
  } else {
    for (const auto& l : g.params().literals) out.emplace_back(l);
  }
  return out;
}

Term candidate(Generator& g, Sort sort) {
  auto all = candidates(g, sort);
  return all[g.below(all.size())];
}

std::vector<Law> build_catalog() {
  using O = Orientation;
  std::vector<Law> laws;
  auto add = [&](std::string name, std::string family, std::string lhs, std::string rhs, O o,
                 std::vector<std::string> side, Rewrite rw,
                 std::function<std::optional<LawInstance>(Generator&)> inst) {
    laws.push_back(Law{std::move(name), std::move(family), std::move(lhs), std::move(rhs), o,
                       std::move(side), std::move(rw), std::move(inst)});
  };

  // Processes.
  add("par-unit", "process-monoid", "P || nil", "P", O::Equation, {}, nullptr, [](Generator& g) {
    auto p = g.process();
    return std::optional(equation(g, P::par(p, P::nothing()), p));
  });
  add("par-commute", "process-monoid", "P || Q", "Q || P", O::Equation, {}, nullptr,
      [](Generator& g) {
        auto p = g.process(), q = g.process();
        return std::optional(equation(g, P::par(p, q), P::par(q, p)));
      });
  add("par-assoc", "process-monoid", "(P || Q) || R", "P || (Q || R)", O::Equation, {}, nullptr,
      [](Generator& g) {
        auto p = g.process(), q = g.process(), r = g.process();
        return std::optional(equation(g, P::par(P::par(p, q), r), P::par(p, P::par(q, r))));
      });
  add("scope-nil", "process-monoid", "new a { nil }", "nil", O::Equation, {}, nullptr,
      [](Generator& g) {
        auto p = g.process();
        return std::optional(equation(g, P::par(P::scope(g.name(), P::nothing()), p), p));
      });
  add("scope-commute", "process-monoid", "new a { new b { P } }", "new b { new a { P } }",
      O::Equation, {}, nullptr, [](Generator& g) -> std::optional<LawInstance> {
        Name a = g.name(), b = g.name();
        if (a == b) return std::nullopt;
        auto p = g.process();
        return equation(g, P::scope(a, P::scope(b, p)), P::scope(b, P::scope(a, p)));
      });
  add("scope-par", "process-monoid", "new a { P || Q }", "new a { P } || Q", O::Equation,
      {"a not free in Q"}, nullptr, [](Generator& g) -> std::optional<LawInstance> {
        Name a = g.name();
        auto p = g.process(), q = g.process();
        if (free_names(*q).count(a)) return std::nullopt;
        return equation(g, P::scope(a, P::par(p, q)), P::par(P::scope(a, p), q));
      });

  // Semiring.
  add("tensor-unit", "semiring", "U & 1", "U", O::Equation, {}, tensor_unit, [](Generator& g) {
    auto u = sub(g);
    return std::optional(query_equation(g, Q::tensor(u, Q::one()), u));
  });
  add("tensor-commute", "semiring", "U & V", "V & U", O::Equation, {}, nullptr, [](Generator& g) {
    auto u = sub(g), v = sub(g);
    return std::optional(query_equation(g, Q::tensor(u, v), Q::tensor(v, u)));
  });
  add("tensor-assoc", "semiring", "(U & V) & W", "U & (V & W)", O::Equation, {},
      [](const QueryPtr& q) { return reassociate(q, QueryKind::Tensor); }, [](Generator& g) {
        auto u = sub(g), v = sub(g), w = sub(g);
        return std::optional(
            query_equation(g, Q::tensor(Q::tensor(u, v), w), Q::tensor(u, Q::tensor(v, w))));
      });
  add("choice-unit", "semiring", "U + 0", "U", O::Equation, {}, choice_unit, [](Generator& g) {
    auto u = sub(g);
    return std::optional(query_equation(g, Q::choice(u, Q::zero()), u));
  });
  add("choice-commute", "semiring", "U + V", "V + U", O::Equation, {}, nullptr, [](Generator& g) {
    auto u = sub(g), v = sub(g);
    return std::optional(query_equation(g, Q::choice(u, v), Q::choice(v, u)));
  });
  add("choice-assoc", "semiring", "(U + V) + W", "U + (V + W)", O::Equation, {},
      [](const QueryPtr& q) { return reassociate(q, QueryKind::Choice); }, [](Generator& g) {
        auto u = sub(g), v = sub(g), w = sub(g);
        return std::optional(
            query_equation(g, Q::choice(Q::choice(u, v), w), Q::choice(u, Q::choice(v, w))));
      });
  add("choice-idempotent", "semiring", "U + (... + U + ...)", "(... + U + ...)", O::Equation, {},
      choice_idempotent, [](Generator& g) {
        auto u = sub(g);
        if (g.chance(0.5)) return std::optional(query_equation(g, Q::choice(u, u), u));
        auto v = sub(g);
        return std::optional(query_equation(g, Q::choice(u, Q::choice(v, u)), Q::choice(v, u)));
      });
  add("tensor-distributes-over-choice", "semiring", "U & (V + W)", "(U & V) + (U & W)",
      O::Equation, {}, distribute, [](Generator& g) {
        auto u = sub(g), v = sub(g), w = sub(g);
        return std::optional(query_equation(g, Q::tensor(u, Q::choice(v, w)),
                                            Q::choice(Q::tensor(u, v), Q::tensor(u, w))));
      });
  add("zero-annihilates", "semiring", "U & 0", "0", O::Equation, {}, zero_annihilates,
      [](Generator& g) {
        auto u = sub(g);
        return std::optional(query_equation(g, Q::tensor(u, Q::zero()), Q::zero()));
      });

  // Choice as least upper bound.
  add("choice-upper", "choice-colimit", "V", "V + U", O::Inequation, {}, nullptr,
      [](Generator& g) {
        auto v = sub(g), u = sub(g);
        return std::optional(inequation(g, v, Q::choice(v, u)));
      });
  add("choice-least", "choice-colimit", "V + U", "W", O::Inequation, {"V <= W", "U <= W"},
      nullptr, [](Generator& g) {
        auto v = sub(g), u = sub(g), x = sub(g);
        // W mentions both branches, so the premises hold by choice-upper.
        auto w = Q::choice(Q::choice(u, x), v);
        return std::optional(inequation(g, Q::choice(v, u), w));
      });
  add("optional-nesting", "choice-colimit", "U & ((V & optional { W }) + 1)",
      "U & (optional { V } & optional { W })", O::Inequation, {}, nullptr, [](Generator& g) {
        auto u = sub(g), v = sub(g), w = sub(g);
        auto lower = Q::tensor(u, Q::choice(Q::tensor(v, optional(w)), Q::one()));
        auto upper = Q::tensor(u, Q::tensor(optional(v), optional(w)));
        return std::optional(inequation(g, lower, upper));
      });
  add("prune-left", "choice-colimit", "U + V", "V", O::Inequation, {"U <= V"}, prune_left,
      nullptr);
  add("prune-right", "choice-colimit", "U + V", "U", O::Inequation, {"V <= U"}, prune_right,
      nullptr);

  // Select.
  add("select-instance", "select-colimit", "U[a:=b] & V", "select a { U } & V", O::Inequation,
      {"b in pool"}, nullptr, [](Generator& g) {
        Var a = var_a(g);
        auto u = open_sub(g, {a});
        auto v = sub(g);
        auto lower = Q::tensor(substitute(u, Substitution{{a, candidate(g, a.sort)}}), v);
        return std::optional(inequation(g, lower, Q::tensor(Q::select(a, u), v)));
      });
  add("select-commute", "select-colimit", "select a { select b { U } }",
      "select b { select a { U } }", O::Equation, {}, nullptr, [](Generator& g) {
        Var a = var_a(g);
        Var b{g.chance(0.75) ? Sort::Name : Sort::Literal, "b"};
        auto u = open_sub(g, {a, b});
        return std::optional(query_equation(g, Q::select(a, Q::select(b, u)),
                                            Q::select(b, Q::select(a, u))));
      });
  add("select-distributes-over-choice", "select-colimit", "select a { U + V }",
      "select a { U } + select a { V }", O::Equation, {}, select_choice, [](Generator& g) {
        Var a = var_a(g);
        auto u = open_sub(g, {a}), v = open_sub(g, {a});
        return std::optional(query_equation(g, Q::select(a, Q::choice(u, v)),
                                            Q::choice(Q::select(a, u), Q::select(a, v))));
      });
  add("select-true", "select-colimit", "select a { 1 }", "1", O::Equation, {"pool nonempty"},
      nullptr, [](Generator& g) {
        auto u = sub(g);
        return std::optional(
            query_equation(g, Q::tensor(Q::select(var_a(g), Q::one()), u), Q::tensor(Q::one(), u)));
      });
  add("select-zero", "select-colimit", "select a { 0 }", "0", O::Equation, {}, select_zero,
      [](Generator& g) {
        auto u = sub(g);
        return std::optional(
            query_equation(g, Q::choice(Q::select(var_a(g), Q::zero()), u), Q::choice(Q::zero(), u)));
      });
  add("select-tensor", "select-colimit", "select a { U & V }", "select a { U } & V", O::Equation,
      {"a not free in V"}, select_tensor, [](Generator& g) {
        Var a = var_a(g);
        auto u = open_sub(g, {a});
        auto v = sub(g);
        return std::optional(
            query_equation(g, Q::select(a, Q::tensor(u, v)), Q::tensor(Q::select(a, u), v)));
      });
  add("select-alpha", "select-colimit", "select a { U }", "select b { U[a:=b] }", O::Equation,
      {"b not free in U"}, nullptr, [](Generator& g) {
        Var a = var_a(g);
        Var b{a.sort, "b"};
        auto u = open_sub(g, {a});
        return std::optional(query_equation(g, Q::select(a, u), Q::select(b, rename_var(u, a, b))));
      });

  // Iteration.
  add("bang-expand", "iteration", "bang { U }", "1 + (U & bang { U })", O::Equation,
      {"rhs explored with one copy fewer"}, nullptr, [](Generator& g) {
        QueryShape shape;
        shape.bangs = false;
        auto u = sub(g, shape);
        LawInstance i = query_equation(g, Q::bang(u), Q::choice(Q::one(), Q::tensor(u, Q::bang(u))));
        i.cfg_rhs.iter_bound = i.cfg_lhs.iter_bound - 1;
        return std::optional(i);
      });
  add("bang-least-fixpoint", "iteration", "bang { V } & U", "W", O::Inequation,
      {"U + (V & W) <= W"}, nullptr, [](Generator& g) -> std::optional<LawInstance> {
        QueryShape shape;
        shape.bangs = false;
        auto u = sub(g, shape);
        QueryPtr v = g.chance(0.8) ? Q::filter(g.constraint({}, 2)) : Q::zero();
        auto w = Q::choice(u, sub(g, shape));
        EvalConfig cfg = g.params().config();
        auto premise = query_leq(Q::choice(u, Q::tensor(v, w)), w, cfg, g.params().depth);
        if (premise.verdict != Verdict::Bisimilar) return std::nullopt;
        return inequation(g, Q::tensor(Q::bang(v), u), w);
      });
  add("bang-powers", "iteration", "U^n & V", "bang { U } & V", O::Inequation, {"n <= iter_bound"},
      nullptr, [](Generator& g) {
        QueryShape shape;
        shape.bangs = false;
        auto u = sub(g, shape), v = sub(g, shape);
        unsigned n = static_cast<unsigned>(g.below(4));
        LawInstance i = inequation(g, Q::tensor(expand_exponent(u, n), v), Q::tensor(Q::bang(u), v));
        i.cfg_lhs.iter_bound = i.cfg_rhs.iter_bound = std::max(n, g.params().iter_bound);
        return std::optional(i);
      });
  add("bang-select-factor", "iteration", "bang { select a { U + V } }",
      "bang { select a { U } } & bang { select a { V } }", O::Equation, {}, bang_select_factor,
      [](Generator& g) {
        QueryShape shape;
        shape.bangs = false;
        Var a = var_a(g);
        auto u = open_sub(g, {a}, shape), v = open_sub(g, {a}, shape);
        return std::optional(query_equation(g, Q::bang(Q::select(a, Q::choice(u, v))),
                                            Q::tensor(Q::bang(Q::select(a, u)), Q::bang(Q::select(a, v)))));
      });

  // Constraints.
  add("filter-or", "boolean", "filter (c || d)", "filter (c) + filter (d)", O::Equation, {},
      filter_or, [](Generator& g) {
        Var a = var_a(g);
        auto c = g.constraint({a}), d = g.constraint({a});
        return std::optional(query_equation(
            g, Q::select(a, Q::choice(Q::filter(c), Q::filter(d))), Q::select(a, Q::filter(Constraint::disj(c, d)))));
      });
  add("filter-and", "boolean", "filter (c && d)", "filter (c) & filter (d)", O::Equation, {},
      filter_and, [](Generator& g) {
        Var a = var_a(g);
        auto c = g.constraint({a}), d = g.constraint({a});
        auto u = open_sub(g, {a});
        return std::optional(query_equation(
            g, Q::select(a, Q::tensor(Q::tensor(Q::filter(c), Q::filter(d)), u)),
            Q::select(a, Q::tensor(Q::filter(Constraint::conj(c, d)), u))));
      });
  add("filter-exists", "boolean", "filter (c[a:=t1] || ... || c[a:=tn])", "select a { filter (c) }",
      O::Equation, {"t1..tn enumerate the pool"}, nullptr, [](Generator& g) {
        Var a = var_a(g);
        auto c = g.constraint({a});
        ConstraintPtr disj = Constraint::falsity();
        for (const auto& t : candidates(g, a.sort)) disj = Constraint::disj(disj, substitute(c, Substitution{{a, t}}));
        return std::optional(query_equation(g, Q::filter(disj), Q::select(a, Q::filter(c))));
      });
  add("bang-test", "boolean", "bang { filter (c) }", "1", O::Equation, {}, nullptr, [](Generator& g) {
    Var a = var_a(g);
    auto c = g.constraint({a});
    auto u = open_sub(g, {a});
    return std::optional(query_equation(g, Q::select(a, Q::tensor(Q::bang(Q::filter(c)), u)),
                                        Q::select(a, Q::tensor(Q::one(), u))));
  });
  add("filter-implies", "boolean", "filter (c)", "filter (d)", O::Biconditional,
      {"c implies d"}, nullptr, [](Generator& g) {
        Var a = var_a(g);
        Substitution s{{a, candidate(g, a.sort)}};
        auto c = substitute(g.constraint({a}), s), d = substitute(g.constraint({a}), s);
        bool expected = !holds(*c) || holds(*d);
        return std::optional(inequation(g, Q::filter(c), Q::filter(d), expected));
      });

  // Alias preorder.
  add("ask-alias", "alias", "ask C", "ask D", O::Biconditional, {"C below D"}, nullptr,
      [](Generator& g) {
        AliasTable alias = g.alias();
        Triple c = g.triple();
        Triple d = g.triple();
        if (g.chance(0.5)) {
          auto up = triple_upset(alias, c);
          d = up[g.below(up.size())];
        }
        LawInstance i = inequation(g, Q::ask(pattern_of(c)), Q::ask(pattern_of(d)), triple_leq(alias, c, d));
        i.cfg_lhs.alias = i.cfg_rhs.alias = alias;
        return std::optional(i);
      });

  // Continuations.
  add("then-nil", "continuation", "1 then { nil }", "1", O::Equation, {}, then_nil,
      [](Generator& g) {
        auto u = sub(g);
        return std::optional(
            query_equation(g, Q::tensor(Q::then(Q::one(), P::nothing()), u), Q::tensor(Q::one(), u)));
      });
  add("then-unit-delay", "continuation", "U & (1 then { P })", "U then { P }", O::Equation, {},
      nullptr, [](Generator& g) {
        Var a{Sort::Name, "a"};
        auto u = open_sub(g, {a});
        auto p = g.continuation({a});
        return std::optional(query_equation(g, Q::select(a, Q::tensor(u, Q::then(Q::one(), p))),
                                            Q::select(a, Q::then(u, p))));
      });
  add("then-then", "continuation", "(U then { P }) then { Q }", "U then { P || Q }", O::Equation,
      {}, then_then, [](Generator& g) {
        Var a{Sort::Name, "a"};
        auto u = open_sub(g, {a});
        auto p = g.continuation({a}), q = g.continuation({a});
        return std::optional(query_equation(g, Q::select(a, Q::then(Q::then(u, p), q)),
                                            Q::select(a, Q::then(u, P::par(p, q)))));
      });
  return laws;
}

// Rules of the normalizing engine, in priority order.
const std::vector<std::string>& normalizing_rules() {
  static const std::vector<std::string> names = {
      "tensor-unit",  "choice-unit", "zero-annihilates", "select-zero",
      "choice-assoc", "tensor-assoc", "choice-idempotent", "filter-and",
      "filter-or",    "tensor-distributes-over-choice", "select-distributes-over-choice",
      "select-tensor", "then-then",  "then-nil"};
  return names;
}

constexpr std::size_t kStepLimit = 200000;

class Engine {
 public:
  Engine(const std::vector<std::string>& rules, RewriteReport& report) : report_(report) {
    for (const auto& n : rules) rules_.push_back(&find_law(n));
  }

  QueryPtr run(const QueryPtr& q) {
    Path path;
    return visit(q, path);
  }

 private:
  QueryPtr visit(QueryPtr q, Path& path) {
    for (;;) {
      auto kids = children(q);
      bool changed = false;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        path.push_back(i);
        QueryPtr k = visit(kids[i], path);
        path.pop_back();
        if (k != kids[i]) {
          kids[i] = k;
          changed = true;
        }
      }
      if (changed) q = with_children(q, kids);
      bool applied = false;
      for (const Law* law : rules_) {
        if (auto r = law->rewrite(q)) {
          report_.applied.push_back(RewriteStep{law->name, path});
          if (report_.applied.size() > kStepLimit) throw StateExplosion("rewrite step limit exceeded");
          q = *r;
          applied = true;
          break;
        }
      }
      if (!applied) return q;
    }
  }

  std::vector<const Law*> rules_;
  RewriteReport& report_;
};

void require_closed_query(const QueryPtr& q) {
  auto vars = free_vars(*q);
  if (!vars.empty()) throw OpenQuery("query has free variable " + to_string(*vars.begin()));
}

}  // namespace

const std::vector<Law>& law_catalog() {
  static const std::vector<Law> laws = build_catalog();
  return laws;
}

const Law& find_law(const std::string& name) {
  for (const auto& l : law_catalog()) {
    if (l.name == name) return l;
  }
  throw Error("unknown law " + name);
}

std::string to_string(const Path& p) {
  if (p.empty()) return "root";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(p[i]);
  }
  return out;
}

std::string to_string(const RewriteReport& r) {
  std::ostringstream out;
  out << "input: " << to_string(*r.input) << "\n";
  out << "output: " << to_string(*r.output) << "\n";
  out << "certified: " << (r.certified ? "true" : "false") << "\n";
  if (!r.certificate.empty()) out << "certificate: " << r.certificate << "\n";
  out << "steps: " << r.applied.size() << "\n";
  for (const auto& s : r.applied) out << "LAW " << s.law << " AT " << to_string(s.path) << "\n";
  return out.str();
}

QueryPtr subterm(const QueryPtr& q, const Path& p) {
  QueryPtr cur = q;
  for (std::size_t i : p) {
    auto kids = children(cur);
    if (i >= kids.size()) throw Error("path " + to_string(p) + " leaves the query");
    cur = kids[i];
  }
  return cur;
}

QueryPtr replace(const QueryPtr& q, const Path& p, const QueryPtr& with) {
  if (p.empty()) return with;
  auto kids = children(q);
  if (p[0] >= kids.size()) throw Error("path " + to_string(p) + " leaves the query");
  kids[p[0]] = replace(kids[p[0]], Path(p.begin() + 1, p.end()), with);
  return with_children(q, kids);
}

QueryPtr replay(const RewriteReport& r) {
  QueryPtr cur = r.input;
  for (const auto& s : r.applied) {
    const Law& law = find_law(s.law);
    if (!law.rewrite) throw Error("law " + s.law + " is not a rewrite");
    auto out = law.rewrite(subterm(cur, s.path));
    if (!out) throw Error("law " + s.law + " does not apply at " + to_string(s.path));
    cur = replace(cur, s.path, *out);
  }
  return cur;
}

RewriteReport normalize(const QueryPtr& q) {
  require_closed_query(q);
  RewriteReport r;
  r.input = q;
  Engine engine(normalizing_rules(), r);
  r.output = engine.run(q);
  return r;
}

void certify(RewriteReport& r, const EvalConfig& cfg, unsigned depth) {
  BisimResult b = bisimilar(P::query(r.input), P::query(r.output), cfg, depth);
  r.certified = b.verdict == Verdict::Bisimilar;
  r.certificate = std::string(to_string(b.verdict)) + " at pool=" + std::to_string(b.pool_size) +
                  " iter_bound=" + std::to_string(b.iter_bound) + " depth=" + std::to_string(depth);
}

namespace {

QueryPtr prune_at(QueryPtr q, Path& path, RewriteReport& r, const EvalConfig& cfg, unsigned depth) {
  auto kids = children(q);
  bool changed = false;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    QueryPtr k = prune_at(kids[i], path, r, cfg, depth);
    path.pop_back();
    if (k != kids[i]) {
      kids[i] = k;
      changed = true;
    }
  }
  if (changed) q = with_children(q, kids);
  if (q->kind() != QueryKind::Choice) return q;

  // Branches of the right-nested chain.
  std::vector<QueryPtr> branches;
  for (QueryPtr cur = q;; cur = cur->right()) {
    if (cur->kind() != QueryKind::Choice) {
      branches.push_back(cur);
      break;
    }
    branches.push_back(cur->left());
  }
  auto rebuild = [](const std::vector<QueryPtr>& bs) {
    QueryPtr acc = bs.back();
    for (std::size_t i = bs.size() - 1; i-- > 0;) acc = Q::choice(bs[i], acc);
    return acc;
  };
  std::size_t i = 0;
  while (branches.size() > 1 && i < branches.size()) {
    std::vector<QueryPtr> rest = branches;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    BisimResult dominated = query_leq(branches[i], rebuild(rest), cfg, depth);
    if (dominated.verdict != Verdict::Bisimilar) {
      ++i;
      continue;
    }
    Path at = path;
    if (i + 1 < branches.size()) {
      at.insert(at.end(), i, 1);
      r.applied.push_back(RewriteStep{"prune-left", at});
    } else {
      at.insert(at.end(), i - 1, 1);
      r.applied.push_back(RewriteStep{"prune-right", at});
    }
    branches = std::move(rest);
  }
  return rebuild(branches);
}

QueryPtr factor_at(QueryPtr q, Path& path, RewriteReport& r) {
  if (auto f = bang_select_factor(q)) {
    r.applied.push_back(RewriteStep{"bang-select-factor", path});
    q = *f;
  }
  auto kids = children(q);
  bool changed = false;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    QueryPtr k = factor_at(kids[i], path, r);
    path.pop_back();
    if (k != kids[i]) {
      kids[i] = k;
      changed = true;
    }
  }
  return changed ? with_children(q, kids) : q;
}

}  // namespace

RewriteReport prune_dominated(const QueryPtr& q, const EvalConfig& cfg, unsigned depth) {
  require_closed_query(q);
  RewriteReport r;
  r.input = q;
  Path path;
  r.output = prune_at(q, path, r, cfg, depth);
  certify(r, cfg, depth);
  return r;
}

RewriteReport factor_for_distribution(const QueryPtr& q, const EvalConfig& cfg, unsigned depth) {
  require_closed_query(q);
  RewriteReport r;
  r.input = q;
  Path path;
  QueryPtr factored = factor_at(q, path, r);
  Engine tighten({"select-tensor"}, r);
  r.output = tighten.run(factored);
  if (r.applied.empty()) {
    r.certified = true;
    r.certificate = "unchanged";
    return r;
  }
  certify(r, cfg, depth);
  if (!r.certified) {
    r.output = q;
    r.applied.clear();
  }
  return r;
}

QueryPtr boolean_embed(const ConstraintPtr& c) {
  switch (c->kind()) {
    case ConstraintKind::True: return Q::one();
    case ConstraintKind::False: return Q::zero();
    case ConstraintKind::Or: return Q::choice(boolean_embed(c->left()), boolean_embed(c->right()));
    case ConstraintKind::And: return Q::tensor(boolean_embed(c->left()), boolean_embed(c->right()));
    default: return Q::filter(c);
  }
}

bool embed_reflects(const ConstraintPtr& p, const ConstraintPtr& q, const std::vector<Var>& vars,
                    const std::vector<Term>& universe) {
  bool implication = implies(*p, *q, vars, universe);
  EvalConfig cfg;
  cfg.universe.insert(universe.begin(), universe.end());
  bool ordered = true;
  Substitution s;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (!ordered) return;
    if (i == vars.size()) {
      auto verdict = query_leq(boolean_embed(substitute(p, s)), boolean_embed(substitute(q, s)), cfg, 2);
      if (verdict.verdict != Verdict::Bisimilar) ordered = false;
      return;
    }
    for (const auto& t : universe) {
      if (t.is_name() != (vars[i].sort == Sort::Name)) continue;
      s.insert_or_assign(vars[i], t);
      go(i + 1);
    }
    s.erase(vars[i]);
  };
  go(0);
  return implication == ordered;
}

}  // namespace ldc
