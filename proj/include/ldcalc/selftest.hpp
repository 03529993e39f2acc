#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ldcalc/frontend.hpp"
#include "ldcalc/generators.hpp"

namespace ldc {

// A fixture with the successor or transition it must produce.
struct WorkedExample {
  enum class Mode { Reduction, Lts };
  std::string name;
  Mode mode = Mode::Reduction;
  std::string process;
  std::string alias;
  std::string pool;  // comma-separated extras
  std::string expected_target;
  std::string expected_label;  // Lts only
  // The expected successor is the only one.
  bool unique = false;
};

const std::vector<WorkedExample>& worked_examples();
Workspace workspace_for(const WorkedExample& e);
// Report text as printed by `eval` or `lts`.
std::string example_report(const WorkedExample& e);
// Empty if the example produces what it should; otherwise the reason.
std::string check_example(const WorkedExample& e);

struct CriterionResult {
  unsigned id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

std::string to_string(const CriterionResult& r);

struct SelftestOptions {
  bool small = false;
  std::uint64_t seed = 1;
  DeskParams params;
};

std::string relativization_statement(const DeskParams& params);

CriterionResult check_label_elimination(const SelftestOptions& o);
CriterionResult check_worked_examples(const SelftestOptions& o);
CriterionResult check_law_suite(const SelftestOptions& o);
CriterionResult check_strictness(const SelftestOptions& o);
CriterionResult check_distribution(const SelftestOptions& o);
CriterionResult check_contextual(const SelftestOptions& o);
CriterionResult check_relativization(const SelftestOptions& o, const std::string& statement);

// The optional-nesting instance used for strictness.
struct OptionalNesting {
  QueryPtr stronger, weaker;
  std::vector<Triple> distinguishing_store;
};
OptionalNesting optional_nesting_instance();
// The distribution example and the form it should factor into.
QueryPtr distribution_example();
QueryPtr distribution_expected();
EvalConfig distribution_config();

// Runs every criterion, writing one line per result to out. Returns the
// number of failures.
int run_selftest(const SelftestOptions& o, std::ostream& out);

}  // namespace ldc
