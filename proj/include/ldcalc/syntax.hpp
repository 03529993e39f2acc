#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ldcalc/constraints.hpp"
#include "ldcalc/rdf_model.hpp"
#include "ldcalc/variable.hpp"

namespace ldc {

// A triple whose positions may hold variables. Literal variables and
// literals are only legal in object position.
struct Pattern {
  Slot subject;
  Slot predicate;
  Slot object;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

Pattern pattern_of(const Triple& t);
bool is_ground(const Pattern& p);
// Precondition: is_ground(p).
Triple ground_triple(const Pattern& p);
std::string to_string(const Pattern& p);

class Query;
class Process;
using QueryPtr = std::shared_ptr<const Query>;
using ProcessPtr = std::shared_ptr<const Process>;

enum class QueryKind { Ask, Filter, Choice, Tensor, SelectName, SelectLiteral, Bang, Then };

class Query {
 public:
  static QueryPtr ask(Pattern p);
  static QueryPtr filter(ConstraintPtr c);
  static QueryPtr choice(QueryPtr a, QueryPtr b);
  static QueryPtr tensor(QueryPtr a, QueryPtr b);
  // The variable's sort picks SelectName or SelectLiteral.
  static QueryPtr select(Var v, QueryPtr body);
  static QueryPtr bang(QueryPtr body);
  static QueryPtr then(QueryPtr guard, ProcessPtr continuation);

  // filter(true) and filter(false).
  static QueryPtr one();
  static QueryPtr zero();

  QueryKind kind() const { return kind_; }
  const Pattern& pattern() const { return pattern_; }
  const ConstraintPtr& constraint() const { return constraint_; }
  // Left operand of choice/tensor, body of select/bang, guard of then.
  const QueryPtr& left() const { return left_; }
  const QueryPtr& right() const { return right_; }
  const QueryPtr& body() const { return left_; }
  const Var& var() const { return var_; }
  const ProcessPtr& continuation() const { return continuation_; }

  bool is_one() const;
  bool is_zero() const;

 private:
  Query(QueryKind kind) : kind_(kind) {}  // NOLINT

  QueryKind kind_;
  Pattern pattern_{Term(Name()), Term(Name()), Term(Name())};
  ConstraintPtr constraint_;
  QueryPtr left_, right_;
  Var var_;
  ProcessPtr continuation_;
};

enum class ProcessKind { Nothing, Par, Scope, Query, Stored };

class Process {
 public:
  static ProcessPtr nothing();
  static ProcessPtr par(ProcessPtr a, ProcessPtr b);
  static ProcessPtr scope(Name bound, ProcessPtr body);
  static ProcessPtr query(QueryPtr q);
  static ProcessPtr stored(Pattern p);
  static ProcessPtr stored(const Triple& t) { return stored(pattern_of(t)); }

  // Right-nested parallel composition; nothing() for an empty list.
  static ProcessPtr par_all(const std::vector<ProcessPtr>& parts);

  ProcessKind kind() const { return kind_; }
  const ProcessPtr& left() const { return left_; }
  const ProcessPtr& right() const { return right_; }
  const ProcessPtr& body() const { return left_; }
  const Name& bound() const { return bound_; }
  const QueryPtr& as_query() const { return query_; }
  const Pattern& triple() const { return triple_; }

 private:
  Process(ProcessKind kind) : kind_(kind) {}  // NOLINT

  ProcessKind kind_;
  ProcessPtr left_, right_;
  Name bound_;
  QueryPtr query_;
  Pattern triple_{Term(Name()), Term(Name()), Term(Name())};
};

// Concrete syntax, fully parenthesised so that parsing the output yields
// the same tree.
std::string to_string(const Query& q);
std::string to_string(const Process& p);

bool operator==(const Query& a, const Query& b);
bool operator==(const Process& a, const Process& b);

// Capture-avoiding simultaneous substitution. Throws SortError.
QueryPtr substitute(const QueryPtr& q, const Substitution& s);
ProcessPtr substitute(const ProcessPtr& p, const Substitution& s);

// Renames the free occurrences of a variable.
QueryPtr rename_var(const QueryPtr& q, const Var& from, const Var& to);
ProcessPtr rename_var(const ProcessPtr& p, const Var& from, const Var& to);

// Replaces free occurrences of a name (capture-avoiding under scopes).
ProcessPtr rename_name(const ProcessPtr& p, const Name& from, const Name& to);
QueryPtr rename_name(const QueryPtr& q, const Name& from, const Name& to);

std::set<Name> free_names(const Process& p);
std::set<Name> free_names(const Query& q);
std::set<Var> free_vars(const Query& q);
std::set<Var> free_vars(const Process& p);
// Every literal occurring anywhere.
std::set<Literal> literals_of(const Process& p);
// Every name occurring anywhere, bound or free.
std::set<Name> all_names(const Process& p);

std::size_t size(const Query& q);
std::size_t size(const Process& p);
// Nesting depth; an ask or filter has depth 1.
std::size_t depth(const Query& q);

// Prefix reserved for canonical bound names produced by normalisation.
inline constexpr const char* kBoundPrefix = "_:b";

// Canonical representative of the structural-congruence class: parallel
// composition flattened and sorted, nothing and unused scopes removed,
// scopes floated outward and renamed to a canonical sequence. Select
// variables inside queries are renamed canonically as well.
ProcessPtr congruence_normal_form(const ProcessPtr& p);
bool congruent(const ProcessPtr& p, const ProcessPtr& q);

// A process in normal form viewed as scope list plus flat components.
struct FlatProcess {
  std::vector<Name> bound;
  std::vector<Triple> stores;
  std::vector<QueryPtr> queries;
};

// Floats scopes out of a closed-or-open process with fresh bound names.
// Throws OpenProcess if a stored triple is not ground.
FlatProcess flatten(const ProcessPtr& p);
ProcessPtr compose(const FlatProcess& f);

// U^0 = 1, U^1 = U, U^(n+1) = U (x) U^n.
QueryPtr expand_exponent(const QueryPtr& u, unsigned n);
// Sum_{n=0}^{k} U^n with left-nested choices.
QueryPtr expand_limit(const QueryPtr& u, unsigned k);
// U (+) 1.
QueryPtr optional(const QueryPtr& u);

}  // namespace ldc
