#include "ldcalc/generators.hpp"

namespace ldc {

EvalConfig DeskParams::config() const {
  EvalConfig cfg;
  for (const auto& n : names) cfg.universe.insert(Term(n));
  for (const auto& l : literals) cfg.universe.insert(Term(l));
  cfg.iter_bound = iter_bound;
  return cfg;
}

Generator::Generator(std::uint64_t seed, DeskParams params)
    : rng_(seed), params_(std::move(params)) {}

std::size_t Generator::below(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

Name Generator::name() { return params_.names[below(params_.names.size())]; }

Literal Generator::literal() { return params_.literals[below(params_.literals.size())]; }

Term Generator::term() {
  if (!params_.literals.empty() && chance(0.25)) return literal();
  return name();
}

Triple Generator::triple() { return Triple{name(), name(), term()}; }

std::vector<Triple> Generator::store() {
  std::vector<Triple> out;
  std::size_t n = below(params_.max_store + 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(triple());
  return out;
}

Slot Generator::name_slot(const std::vector<Var>& vars) {
  std::vector<Var> names;
  for (const auto& v : vars) {
    if (v.sort == Sort::Name) names.push_back(v);
  }
  if (!names.empty() && chance(0.5)) return names[below(names.size())];
  return Term(name());
}

Slot Generator::object_slot(const std::vector<Var>& vars) {
  if (!vars.empty() && chance(0.5)) return vars[below(vars.size())];
  return term();
}

Pattern Generator::pattern(const std::vector<Var>& vars) {
  if (hints_.empty() || !chance(0.6)) return Pattern{name_slot(vars), name_slot(vars), object_slot(vars)};
  const Triple& t = hints_[below(hints_.size())];
  auto keep = [&](const Term& term) -> Slot {
    Sort sort = term.is_name() ? Sort::Name : Sort::Literal;
    std::vector<Var> fitting;
    for (const auto& v : vars) {
      if (v.sort == sort) fitting.push_back(v);
    }
    if (!fitting.empty() && chance(0.3)) return fitting[below(fitting.size())];
    return term;
  };
  return Pattern{keep(Term(t.subject)), keep(Term(t.predicate)), keep(t.object)};
}

AliasTable Generator::alias() {
  std::vector<NamePair> pairs;
  std::size_t n = 1 + below(3);
  for (std::size_t i = 0; i < n; ++i) {
    Name a = name(), b = name();
    if (a != b) pairs.emplace_back(a, b);
  }
  return AliasTable(std::move(pairs));
}

ConstraintPtr Generator::constraint(const std::vector<Var>& vars, unsigned depth) {
  if (depth > 1 && chance(0.4)) {
    switch (below(3)) {
      case 0: return Constraint::conj(constraint(vars, depth - 1), constraint(vars, depth - 1));
      case 1: return Constraint::disj(constraint(vars, depth - 1), constraint(vars, depth - 1));
      default: return Constraint::neg(constraint(vars, depth - 1));
    }
  }
  auto operand = [&]() -> Slot {
    if (!vars.empty() && chance(0.7)) return vars[below(vars.size())];
    return term();
  };
  switch (below(6)) {
    case 0: return chance(0.7) ? Constraint::truth() : Constraint::falsity();
    case 1: return Constraint::len_leq(operand(), static_cast<std::int64_t>(below(3)));
    case 2: return Constraint::regex(operand(), chance(0.5) ? "a.*" : "[0-9]+");
    case 3: return Constraint::num_leq(operand(), Term(Literal(std::int64_t{3})));
    default: return Constraint::eq(operand(), operand());
  }
}

ProcessPtr Generator::continuation(const std::vector<Var>& vars) {
  std::vector<ProcessPtr> parts;
  std::size_t n = below(3);
  for (std::size_t i = 0; i < n; ++i) parts.push_back(Process::stored(pattern(vars)));
  return Process::par_all(parts);
}

QueryPtr Generator::open_query(unsigned depth, std::vector<Var>& vars, const QueryShape& shape) {
  if (depth <= 1) {
    if (shape.filters && chance(0.2)) return Query::filter(constraint(vars, 1));
    return Query::ask(pattern(vars));
  }
  std::vector<int> ops{0, 1};
  if (shape.selects) ops.push_back(2);
  if (shape.bangs) ops.push_back(3);
  if (shape.continuations) ops.push_back(4);
  ops.push_back(5);  // shallower subterm
  switch (ops[below(ops.size())]) {
    case 0:
      return Query::choice(open_query(depth - 1, vars, shape), open_query(depth - 1, vars, shape));
    case 1:
      return Query::tensor(open_query(depth - 1, vars, shape), open_query(depth - 1, vars, shape));
    case 2: {
      Var v{chance(0.75) ? Sort::Name : Sort::Literal, "x" + std::to_string(fresh_++)};
      vars.push_back(v);
      QueryPtr body = open_query(depth - 1, vars, shape);
      vars.pop_back();
      return Query::select(v, body);
    }
    case 3: {
      QueryShape inner = shape;
      inner.bangs = false;
      return Query::bang(open_query(depth - 1, vars, inner));
    }
    case 4:
      return Query::then(open_query(depth - 1, vars, shape), continuation(vars));
    default:
      return open_query(depth - 1, vars, shape);
  }
}

QueryPtr Generator::query(unsigned depth, const QueryShape& shape) {
  std::vector<Var> vars;
  return open_query(depth, vars, shape);
}

ProcessPtr Generator::process(const QueryShape& shape) {
  std::vector<ProcessPtr> parts;
  hints_ = store();
  for (const auto& t : hints_) parts.push_back(Process::stored(t));
  std::size_t queries = 1 + below(2);
  for (std::size_t i = 0; i < queries; ++i) {
    parts.push_back(Process::query(query(1 + static_cast<unsigned>(below(params_.query_depth)), shape)));
  }
  hints_.clear();
  if (chance(0.2)) {
    // Hide one name of the pool inside a scope.
    return Process::scope(name(), Process::par_all(parts));
  }
  return Process::par_all(parts);
}

}  // namespace ldc
