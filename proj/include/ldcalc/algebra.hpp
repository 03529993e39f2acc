#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ldcalc/config.hpp"
#include "ldcalc/generators.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

enum class Orientation {
  Equation,     // lhs ~ rhs
  Inequation,   // lhs <= rhs
  Biconditional // a side condition holds iff lhs <= rhs
};

// One randomized instance, already lifted to processes. For inequations
// lhs = query(U + V) and rhs = query(V); lower/upper keep U and V.
struct LawInstance {
  ProcessPtr lhs, rhs;
  EvalConfig cfg_lhs, cfg_rhs;
  QueryPtr lower, upper;
  // Whether lhs ~ rhs should be reported.
  bool expected = true;
};

struct Law {
  std::string name;
  std::string family;
  std::string lhs, rhs;
  Orientation orientation = Orientation::Equation;
  std::vector<std::string> side_conditions;
  // Present for laws the rewrite engine may apply at a query position.
  std::function<std::optional<QueryPtr>(const QueryPtr&)> rewrite;
  // Returns nullopt when a draw fails a side condition; callers retry.
  std::function<std::optional<LawInstance>(Generator&)> instantiate;
};

const std::vector<Law>& law_catalog();
const Law& find_law(const std::string& name);

using Path = std::vector<std::size_t>;
std::string to_string(const Path& p);

struct RewriteStep {
  std::string law;
  Path path;
};

struct RewriteReport {
  QueryPtr input;
  QueryPtr output;
  std::vector<RewriteStep> applied;
  bool certified = false;
  // Verdict text of the certifying check, when one ran.
  std::string certificate;
};

std::string to_string(const RewriteReport& r);

// Subterm at a path; children are the operands of choice and tensor, the
// body of select and bang, and the guard of then.
QueryPtr subterm(const QueryPtr& q, const Path& p);
QueryPtr replace(const QueryPtr& q, const Path& p, const QueryPtr& with);

// Applies the recorded steps to the input. Throws Error if a step does not
// match.
QueryPtr replay(const RewriteReport& r);

// Sum-of-tensors normal form. Throws OpenQuery.
RewriteReport normalize(const QueryPtr& q);
// Sets certified from a bisimulation check of input against output.
void certify(RewriteReport& r, const EvalConfig& cfg, unsigned depth);

// Drops choice branches dominated by a sibling under query_leq.
RewriteReport prune_dominated(const QueryPtr& q, const EvalConfig& cfg, unsigned depth);

// !select a (A + B) to !select a A (x) !select a B, kept only if certified.
RewriteReport factor_for_distribution(const QueryPtr& q, const EvalConfig& cfg, unsigned depth);

QueryPtr boolean_embed(const ConstraintPtr& c);
// implies(p, q) agrees with embed p <= embed q under every assignment.
bool embed_reflects(const ConstraintPtr& p, const ConstraintPtr& q, const std::vector<Var>& vars,
                    const std::vector<Term>& universe);

}  // namespace ldc
