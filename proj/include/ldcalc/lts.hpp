#pragma once

#include <vector>

#include "ldcalc/config.hpp"
#include "ldcalc/derivation.hpp"
#include "ldcalc/label.hpp"
#include "ldcalc/syntax.hpp"

namespace ldc {

struct QueryTransition {
  Label label;  // input or unit
  ProcessPtr target;
  DerivationPtr trace;  // set when cfg.trace
};

struct LTransition {
  ProcessPtr source;  // normal form
  Label label;
  ProcessPtr target;  // normal form
  DerivationPtr trace;  // set when cfg.trace
};

// Input transitions of a closed query. Selects range over the pool of
// query(u); asks accept every triple below them.
std::vector<QueryTransition> query_transitions(const QueryPtr& u, const EvalConfig& cfg);

// All transitions of a closed process, one per (label, target class),
// sorted. Extruded names are renamed to cfg.fresh_prefix + index, the
// smallest indices not occurring in the source.
std::vector<LTransition> process_transitions(const ProcessPtr& p, const EvalConfig& cfg);

// Targets of the unit-labelled transitions, sorted and deduplicated.
std::vector<ProcessPtr> unit_successors(const ProcessPtr& p, const EvalConfig& cfg);

// Rewrites a process-transition derivation into one with the same source
// and label, a congruent target, and no use of the open rule. Throws
// ExtrudedConclusion if the conclusion itself extrudes names, and
// InvalidDerivation if the derivation does not replay.
DerivationPtr eliminate_extrusion(const DerivationPtr& d, const EvalConfig& cfg);

}  // namespace ldc
