#pragma once

#include <string>
#include <vector>

namespace banditlab {

struct CriterionResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::string work_dir = "acceptance_out";
  int workers = 0;  // 0 = hardware concurrency
};

// Runs the requested suite ("all", a criterion id like "C3", or a criterion
// name like "dims") and returns one result per criterion. Criteria are
// self-contained: each builds its configs, runs the simulations or oracle
// sweeps, and evaluates its gates. Exceptions become failing results.
std::vector<CriterionResult> run_acceptance(const std::string& suite,
                                            const AcceptanceOptions& options);

// One PASS/FAIL line per criterion on stdout; returns the failure count.
int report_acceptance(const std::vector<CriterionResult>& results);

}  // namespace banditlab
