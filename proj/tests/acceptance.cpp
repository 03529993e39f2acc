// One PASS/FAIL line per acceptance criterion, at full desk scale.
#include <fstream>
#include <iostream>
#include <sstream>

#include "ldcalc/selftest.hpp"

using namespace ldc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  SelftestOptions o;
  int failures = 0;
  auto report = [&](CriterionResult r) {
    std::cout << to_string(r) << std::endl;
    failures += !r.pass;
  };

  report(check_label_elimination(o));

  // Fixtures must also reproduce their goldens byte for byte.
  CriterionResult c2 = check_worked_examples(o);
  std::string stale;
  for (const auto& e : worked_examples()) {
    if (example_report(e) != slurp(std::string(LDCALC_GOLDEN_DIR) + "/" + e.name + ".golden")) {
      stale += " " + e.name;
    }
  }
  if (!stale.empty()) {
    c2.pass = false;
    c2.detail += "; golden mismatch:" + stale;
  } else {
    c2.detail += ", goldens byte-identical";
  }
  report(c2);

  report(check_law_suite(o));
  report(check_strictness(o));
  report(check_distribution(o));
  report(check_contextual(o));

  CriterionResult c7 = check_relativization(o, relativization_statement(o.params));
  std::string readme = slurp(LDCALC_README);
  const std::string phrase = "all verdicts are relative to (pool, iter_bound, depth)";
  if (readme.find(phrase) == std::string::npos) {
    c7.pass = false;
    c7.detail += "; README lacks the statement";
  } else {
    c7.detail += "; README states it";
  }
  report(c7);

  std::cout << "summary: " << 7 - failures << "/7 criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
