#include <cstdio>

#include "finsler/acceptance.hpp"

int main() {
  const auto results = finsler::run_acceptance();
  for (const auto& r : results) {
    std::printf("[%s] %2d %s%s%s\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.pass ? "" : ": ",
                r.pass ? "" : r.detail.c_str());
    std::fflush(stdout);
  }
  return finsler::all_passed(results) ? 0 : 1;
}
