#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ldcalc/config.hpp"
#include "ldcalc/label.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

// P | U => Q, with P and U kept apart for query-level steps. `query` is
// null for steps whose source is an arbitrary process.
struct Commit {
  ProcessPtr source;
  ProcessPtr target;
  ProcessPtr context;
  QueryPtr query;
};

// U --E--> P for queries; an empty E is the unit label.
struct QueryStep {
  QueryPtr query;
  std::vector<Triple> input;
  ProcessPtr target;
};

// P --l--> Q for processes.
struct Step {
  ProcessPtr source;
  Label label;
  ProcessPtr target;
};

using Judgment = std::variant<Commit, QueryStep, Step>;

enum class Rule {
  // commitments
  Ask,
  Filter,
  ChooseLeft,
  ChooseRight,
  Tensor,
  Weakening,
  Dereliction,
  Contraction,
  SelectName,
  SelectLiteral,
  Guard,
  Context,
  BlankNode,
  // query transitions
  InputTriple,
  TriggerGuard,
  InTensor,
  InChooseLeft,
  InChooseRight,
  InFilter,
  InSelectName,
  InSelectLiteral,
  InWeakening,
  InDereliction,
  InContraction,
  // process transitions
  QueryInput,
  OutputTriple,
  Open,
  BlankNodeContext,
  ParContext,
  ParallelOutputs,
  Close,
  Alpha,
  // any judgment, up to structural congruence
  Congruence,
};

const char* rule_name(Rule r);

class Derivation;
using DerivationPtr = std::shared_ptr<const Derivation>;

// A proof tree. Nodes are built only through the constructors in namespace
// `derive`, each of which checks its side conditions and computes the
// conclusion, throwing InvalidDerivation when a rule does not apply.
class Derivation {
 public:
  Rule rule() const { return rule_; }
  const Judgment& conclusion() const { return conclusion_; }
  const std::vector<DerivationPtr>& premises() const { return premises_; }

  const Commit& commit() const { return std::get<Commit>(conclusion_); }
  const QueryStep& query_step() const { return std::get<QueryStep>(conclusion_); }
  const Step& step() const { return std::get<Step>(conclusion_); }

  // Rule parameters, as passed to the constructor.
  const std::vector<Triple>& triples() const { return triples_; }
  const std::vector<QueryPtr>& queries() const { return queries_; }
  const std::vector<ProcessPtr>& processes() const { return processes_; }
  const std::vector<Name>& names() const { return names_; }
  const std::optional<Var>& var() const { return var_; }
  const std::optional<Term>& witness() const { return witness_; }
  bool flag() const { return flag_; }

  std::size_t size() const;
  bool uses(Rule r) const;

 private:
  friend struct DerivationBuilder;
  Derivation() = default;

  Rule rule_ = Rule::Congruence;
  Judgment conclusion_;
  std::vector<DerivationPtr> premises_;
  std::vector<Triple> triples_;
  std::vector<QueryPtr> queries_;
  std::vector<ProcessPtr> processes_;
  std::vector<Name> names_;
  std::optional<Var> var_;
  std::optional<Term> witness_;
  bool flag_ = false;
};

std::string to_string(const Judgment& j);
// Indented tree, one rule per line, premises below their conclusion.
std::string to_string(const Derivation& d);

namespace derive {

// Commitment rules. Query-level sources are `P | U` with P possibly nil.
DerivationPtr ask(const AliasTable& alias, const Triple& stored, const Pattern& asked);
DerivationPtr filter(const ConstraintPtr& c);
DerivationPtr choose_left(const DerivationPtr& d, const QueryPtr& other);
DerivationPtr choose_right(const QueryPtr& other, const DerivationPtr& d);
DerivationPtr tensor(const DerivationPtr& left, const DerivationPtr& right);
DerivationPtr weakening(const QueryPtr& body);
DerivationPtr dereliction(const DerivationPtr& d);
// The premise's query must be !U (x) !U.
DerivationPtr contraction(const DerivationPtr& d);
// The premise's query must be body{witness/var}.
DerivationPtr select(const Var& var, const QueryPtr& body, const Term& witness,
                     const DerivationPtr& d);
DerivationPtr guard(const DerivationPtr& d, const ProcessPtr& continuation);
DerivationPtr context(const DerivationPtr& d, const ProcessPtr& idle);
// P | new a.Q => P' | new a.Q' from P | Q => P' | Q'. With P and P' nil the
// premise is Q => Q'; otherwise its source and target must be literally
// P | Q and P' | Q'.
DerivationPtr blank_node(const AliasTable& alias, const DerivationPtr& d, const Name& a,
                         const ProcessPtr& p = nullptr, const ProcessPtr& p_after = nullptr);

// Query transitions.
DerivationPtr input_triple(const AliasTable& alias, const Triple& label, const Pattern& asked);
DerivationPtr trigger_guard(const DerivationPtr& d, const ProcessPtr& continuation);
DerivationPtr in_tensor(const DerivationPtr& left, const DerivationPtr& right);
DerivationPtr in_choose_left(const DerivationPtr& d, const QueryPtr& other);
DerivationPtr in_choose_right(const QueryPtr& other, const DerivationPtr& d);
DerivationPtr in_filter(const ConstraintPtr& c);
DerivationPtr in_select(const Var& var, const QueryPtr& body, const Term& witness,
                        const DerivationPtr& d);
DerivationPtr in_weakening(const QueryPtr& body);
DerivationPtr in_dereliction(const DerivationPtr& d);
DerivationPtr in_contraction(const DerivationPtr& d);

// Process transitions.
DerivationPtr query_input(const DerivationPtr& d);
DerivationPtr output_triple(const AliasTable& alias, const Triple& stored, const Triple& label);
DerivationPtr open(const AliasTable& alias, const DerivationPtr& d, const Name& a);
DerivationPtr blank_node_context(const DerivationPtr& d, const Name& a);
// P | Q --l--> P' | Q; with `idle_left` the idle process is on the left.
DerivationPtr par_context(const DerivationPtr& d, const ProcessPtr& idle, bool idle_left = false);
DerivationPtr parallel_outputs(const DerivationPtr& left, const DerivationPtr& right);
// P | Q --E--> new alpha.(P' | Q') from P --E(x)F--> P' and Q --alpha|F--> Q'.
// With `output_left` the outputting process is on the left.
DerivationPtr close(const DerivationPtr& input, const DerivationPtr& output,
                    bool output_left = false);
// Renames an extruded name on the label and in the target.
DerivationPtr alpha(const DerivationPtr& d, const Name& from, const Name& to);

DerivationPtr congruence(const DerivationPtr& d, const ProcessPtr& source,
                         const ProcessPtr& target);

}  // namespace derive

// Rebuilds the tree from its leaves through the rule constructors and
// checks every stored conclusion. Throws InvalidDerivation.
void replay(const Derivation& d, const AliasTable& alias);

}  // namespace ldc
