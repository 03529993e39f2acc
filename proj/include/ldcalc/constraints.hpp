#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ldcalc/regex.hpp"
#include "ldcalc/variable.hpp"

namespace ldc {

class Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;

enum class ConstraintKind { True, False, Or, And, Not, LenLeq, Regex, NumLeq, Eq };

// Filter constraints: a Boolean algebra over four atomic predicates.
// Operands of atoms are concrete terms or variables.
class Constraint {
 public:
  static ConstraintPtr truth();
  static ConstraintPtr falsity();
  static ConstraintPtr disj(ConstraintPtr a, ConstraintPtr b);
  static ConstraintPtr conj(ConstraintPtr a, ConstraintPtr b);
  static ConstraintPtr neg(ConstraintPtr a);
  // |x| <= bound, measured in codepoints.
  static ConstraintPtr len_leq(Slot operand, std::int64_t bound);
  // Anchored full match; throws ldc::Error for a malformed pattern.
  static ConstraintPtr regex(Slot operand, std::string pattern);
  static ConstraintPtr num_leq(Slot lhs, Slot rhs);
  static ConstraintPtr eq(Slot lhs, Slot rhs);

  ConstraintKind kind() const { return kind_; }
  const ConstraintPtr& left() const { return left_; }
  const ConstraintPtr& right() const { return right_; }
  const Slot& lhs() const { return lhs_; }
  const Slot& rhs() const { return rhs_; }
  std::int64_t bound() const { return bound_; }
  const std::string& pattern() const { return pattern_; }

  bool is_atom() const { return kind_ >= ConstraintKind::LenLeq; }

 private:
  Constraint(ConstraintKind kind, ConstraintPtr l, ConstraintPtr r, Slot lhs, Slot rhs,
             std::int64_t bound, std::string pattern);

  ConstraintKind kind_;
  ConstraintPtr left_, right_;
  Slot lhs_, rhs_;
  std::int64_t bound_ = 0;
  std::string pattern_;
  std::shared_ptr<const Regex> compiled_;

 public:
  const Regex* compiled() const { return compiled_.get(); }
};

// Evaluates a ground constraint. Throws NonGroundConstraint if a variable
// remains and TypeMismatch on an ill-typed atom.
bool satisfies(const Constraint& c);

// Total evaluation used by the operational semantics: ill-typed atoms are
// false. Still throws NonGroundConstraint.
bool holds(const Constraint& c);

std::set<Var> free_vars(const Constraint& c);
ConstraintPtr substitute(const ConstraintPtr& c, const Substitution& s);
// Renames free occurrences of `from` to `to`.
ConstraintPtr rename(const ConstraintPtr& c, const Var& from, const Var& to);

// Finite-universe classical implication: every well-sorted assignment of
// `universe` terms to `vars` makes p -> q true. Name variables receive the
// names of the universe, literal variables its literals.
bool implies(const Constraint& p, const Constraint& q, const std::vector<Var>& vars,
             const std::vector<Term>& universe);

std::string to_string(const Constraint& c);

bool operator==(const Constraint& a, const Constraint& b);

}  // namespace ldc
