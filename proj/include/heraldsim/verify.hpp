#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heraldsim {
namespace verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// End-to-end guarantees of the library, each recomputed from scratch with its
// tolerances pinned in the implementation.  A check that throws is reported
// as failed rather than aborting the run.
std::vector<CheckResult> run_all_checks();

// one "PASS/FAIL <name> - <detail>" line per result; returns the failure count
int report(const std::vector<CheckResult>& results, std::ostream& out);

} // namespace verify
} // namespace heraldsim
