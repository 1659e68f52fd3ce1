#ifndef FINSLER_ACCEPTANCE_HPP
#define FINSLER_ACCEPTANCE_HPP

#include <string>
#include <vector>

namespace finsler {

// One verification check of the release gate.  The same suite backs the
// `verify` CLI command and the acceptance test binary.
struct AcceptanceResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<AcceptanceResult> run_acceptance();
bool all_passed(const std::vector<AcceptanceResult>& results);

}  // namespace finsler

#endif
