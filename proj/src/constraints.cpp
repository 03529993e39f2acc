#include "ldcalc/constraints.hpp"

#include <functional>

#include "ldcalc/errors.hpp"

namespace ldc {

void check_sorts(const Substitution& s) {
  for (const auto& [var, term] : s) {
    bool ok = var.sort == Sort::Name ? term.is_name() : term.is_literal();
    if (!ok) throw SortError("ill-sorted substitution for " + to_string(var));
  }
}

Slot apply(const Substitution& s, const Slot& slot) {
  if (const Var* v = std::get_if<Var>(&slot)) {
    auto it = s.find(*v);
    if (it != s.end()) return it->second;
  }
  return slot;
}

std::string to_string(const Var& v) {
  return std::string(v.sort == Sort::Name ? "?n:" : "?l:") + v.id;
}

std::string to_string(const Slot& s) {
  if (const Var* v = std::get_if<Var>(&s)) return to_string(*v);
  return to_string(std::get<Term>(s));
}

Constraint::Constraint(ConstraintKind kind, ConstraintPtr l, ConstraintPtr r, Slot lhs, Slot rhs,
                       std::int64_t bound, std::string pattern)
    : kind_(kind),
      left_(std::move(l)),
      right_(std::move(r)),
      lhs_(std::move(lhs)),
      rhs_(std::move(rhs)),
      bound_(bound),
      pattern_(std::move(pattern)) {
  if (kind_ == ConstraintKind::Regex) compiled_ = std::make_shared<Regex>(Regex::compile(pattern_));
}

namespace {

const Slot kNoSlot = Term(Name());

}  // namespace

ConstraintPtr Constraint::truth() {
  static const ConstraintPtr t(
      new Constraint(ConstraintKind::True, nullptr, nullptr, kNoSlot, kNoSlot, 0, {}));
  return t;
}

ConstraintPtr Constraint::falsity() {
  static const ConstraintPtr f(
      new Constraint(ConstraintKind::False, nullptr, nullptr, kNoSlot, kNoSlot, 0, {}));
  return f;
}

ConstraintPtr Constraint::disj(ConstraintPtr a, ConstraintPtr b) {
  return ConstraintPtr(
      new Constraint(ConstraintKind::Or, std::move(a), std::move(b), kNoSlot, kNoSlot, 0, {}));
}

ConstraintPtr Constraint::conj(ConstraintPtr a, ConstraintPtr b) {
  return ConstraintPtr(
      new Constraint(ConstraintKind::And, std::move(a), std::move(b), kNoSlot, kNoSlot, 0, {}));
}

ConstraintPtr Constraint::neg(ConstraintPtr a) {
  return ConstraintPtr(
      new Constraint(ConstraintKind::Not, std::move(a), nullptr, kNoSlot, kNoSlot, 0, {}));
}

ConstraintPtr Constraint::len_leq(Slot operand, std::int64_t bound) {
  return ConstraintPtr(new Constraint(ConstraintKind::LenLeq, nullptr, nullptr,
                                      std::move(operand), kNoSlot, bound, {}));
}

ConstraintPtr Constraint::regex(Slot operand, std::string pattern) {
  return ConstraintPtr(new Constraint(ConstraintKind::Regex, nullptr, nullptr, std::move(operand),
                                      kNoSlot, 0, std::move(pattern)));
}

ConstraintPtr Constraint::num_leq(Slot lhs, Slot rhs) {
  return ConstraintPtr(new Constraint(ConstraintKind::NumLeq, nullptr, nullptr, std::move(lhs),
                                      std::move(rhs), 0, {}));
}

ConstraintPtr Constraint::eq(Slot lhs, Slot rhs) {
  return ConstraintPtr(
      new Constraint(ConstraintKind::Eq, nullptr, nullptr, std::move(lhs), std::move(rhs), 0, {}));
}

namespace {

const Term& ground(const Slot& s) {
  if (const Var* v = std::get_if<Var>(&s)) {
    throw NonGroundConstraint("constraint mentions free variable " + to_string(*v));
  }
  return std::get<Term>(s);
}

// Evaluates an atom; ill-typed atoms throw when `strict`, else are false.
bool eval_atom(const Constraint& c, bool strict) {
  auto mismatch = [&](const char* what) {
    if (strict) throw TypeMismatch(std::string(what) + " in " + to_string(c));
    return false;
  };
  switch (c.kind()) {
    case ConstraintKind::LenLeq: {
      const Term& t = ground(c.lhs());
      if (!t.is_literal() || !t.literal().is_string()) return mismatch("len() expects a string");
      auto length = static_cast<std::int64_t>(decode_utf8(t.literal().as_string()).size());
      return length <= c.bound();
    }
    case ConstraintKind::Regex: {
      const Term& t = ground(c.lhs());
      if (!t.is_literal() || !t.literal().is_string()) return mismatch("~ expects a string");
      return c.compiled()->full_match(t.literal().as_string());
    }
    case ConstraintKind::NumLeq: {
      const Term& a = ground(c.lhs());
      const Term& b = ground(c.rhs());
      if (!a.is_literal() || !a.literal().is_integer() || !b.is_literal() ||
          !b.literal().is_integer()) {
        return mismatch("<= expects integers");
      }
      return a.literal().as_integer() <= b.literal().as_integer();
    }
    case ConstraintKind::Eq:
      return ground(c.lhs()) == ground(c.rhs());
    default:
      return false;
  }
}

bool evaluate(const Constraint& c, bool strict) {
  switch (c.kind()) {
    case ConstraintKind::True:
      return true;
    case ConstraintKind::False:
      return false;
    case ConstraintKind::Or: {
      // Evaluate both sides so that errors surface regardless of order.
      bool a = evaluate(*c.left(), strict);
      bool b = evaluate(*c.right(), strict);
      return a || b;
    }
    case ConstraintKind::And: {
      bool a = evaluate(*c.left(), strict);
      bool b = evaluate(*c.right(), strict);
      return a && b;
    }
    case ConstraintKind::Not:
      return !evaluate(*c.left(), strict);
    default:
      return eval_atom(c, strict);
  }
}

void collect_vars(const Constraint& c, std::set<Var>& out) {
  if (c.left()) collect_vars(*c.left(), out);
  if (c.right()) collect_vars(*c.right(), out);
  if (c.is_atom()) {
    if (const Var* v = std::get_if<Var>(&c.lhs())) out.insert(*v);
    if (c.kind() == ConstraintKind::NumLeq || c.kind() == ConstraintKind::Eq) {
      if (const Var* v = std::get_if<Var>(&c.rhs())) out.insert(*v);
    }
  }
}

ConstraintPtr map_slots(const ConstraintPtr& c, const std::function<Slot(const Slot&)>& f) {
  switch (c->kind()) {
    case ConstraintKind::True:
    case ConstraintKind::False:
      return c;
    case ConstraintKind::Or:
    case ConstraintKind::And: {
      auto l = map_slots(c->left(), f);
      auto r = map_slots(c->right(), f);
      if (l == c->left() && r == c->right()) return c;
      return c->kind() == ConstraintKind::Or ? Constraint::disj(l, r) : Constraint::conj(l, r);
    }
    case ConstraintKind::Not: {
      auto l = map_slots(c->left(), f);
      return l == c->left() ? c : Constraint::neg(l);
    }
    default:
      break;
  }
  Slot lhs = f(c->lhs());
  Slot rhs = f(c->rhs());
  if (lhs == c->lhs() && rhs == c->rhs()) return c;
  switch (c->kind()) {
    case ConstraintKind::LenLeq:
      return Constraint::len_leq(lhs, c->bound());
    case ConstraintKind::Regex:
      return Constraint::regex(lhs, c->pattern());
    case ConstraintKind::NumLeq:
      return Constraint::num_leq(lhs, rhs);
    default:
      return Constraint::eq(lhs, rhs);
  }
}

}  // namespace

bool satisfies(const Constraint& c) { return evaluate(c, true); }

bool holds(const Constraint& c) { return evaluate(c, false); }

std::set<Var> free_vars(const Constraint& c) {
  std::set<Var> out;
  collect_vars(c, out);
  return out;
}

ConstraintPtr substitute(const ConstraintPtr& c, const Substitution& s) {
  if (s.empty()) return c;
  check_sorts(s);
  return map_slots(c, [&](const Slot& slot) { return apply(s, slot); });
}

ConstraintPtr rename(const ConstraintPtr& c, const Var& from, const Var& to) {
  return map_slots(c, [&](const Slot& slot) -> Slot {
    if (const Var* v = std::get_if<Var>(&slot); v && *v == from) return to;
    return slot;
  });
}

bool implies(const Constraint& p, const Constraint& q, const std::vector<Var>& vars,
             const std::vector<Term>& universe) {
  std::vector<Term> names, literals;
  for (const auto& t : universe) (t.is_name() ? names : literals).push_back(t);

  ConstraintPtr pp(std::shared_ptr<const Constraint>{}, &p);
  ConstraintPtr qq(std::shared_ptr<const Constraint>{}, &q);
  Substitution sigma;
  std::function<bool(std::size_t)> all = [&](std::size_t i) -> bool {
    if (i == vars.size()) {
      return !holds(*substitute(pp, sigma)) || holds(*substitute(qq, sigma));
    }
    const auto& pool = vars[i].sort == Sort::Name ? names : literals;
    for (const auto& t : pool) {
      sigma.insert_or_assign(vars[i], t);
      if (!all(i + 1)) return false;
    }
    sigma.erase(vars[i]);
    // An empty pool for this sort leaves the variable unassigned; there is
    // no assignment to refute the implication.
    return true;
  };
  return all(0);
}

std::string to_string(const Constraint& c) {
  switch (c.kind()) {
    case ConstraintKind::True:
      return "true";
    case ConstraintKind::False:
      return "false";
    case ConstraintKind::Or:
      return "(" + to_string(*c.left()) + " || " + to_string(*c.right()) + ")";
    case ConstraintKind::And:
      return "(" + to_string(*c.left()) + " && " + to_string(*c.right()) + ")";
    case ConstraintKind::Not:
      return "!(" + to_string(*c.left()) + ")";
    case ConstraintKind::LenLeq:
      return "len(" + to_string(c.lhs()) + ") <= " + std::to_string(c.bound());
    case ConstraintKind::Regex:
      return to_string(c.lhs()) + " ~ " + to_string(Literal(c.pattern()));
    case ConstraintKind::NumLeq:
      return to_string(c.lhs()) + " <= " + to_string(c.rhs());
    case ConstraintKind::Eq:
      return to_string(c.lhs()) + " == " + to_string(c.rhs());
  }
  return {};
}

bool operator==(const Constraint& a, const Constraint& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ConstraintKind::True:
    case ConstraintKind::False:
      return true;
    case ConstraintKind::Or:
    case ConstraintKind::And:
      return *a.left() == *b.left() && *a.right() == *b.right();
    case ConstraintKind::Not:
      return *a.left() == *b.left();
    case ConstraintKind::LenLeq:
      return a.lhs() == b.lhs() && a.bound() == b.bound();
    case ConstraintKind::Regex:
      return a.lhs() == b.lhs() && a.pattern() == b.pattern();
    case ConstraintKind::NumLeq:
    case ConstraintKind::Eq:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

}  // namespace ldc
