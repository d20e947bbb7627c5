// Acceptance gate. With no argument every criterion runs; with ids only
// those. Exit status is non-zero when any selected criterion fails.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "fairrank/core.hpp"
#include "fairrank/repro.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int a = 1; a < argc; ++a) ids.push_back(std::atoi(argv[a]));
  if (ids.empty()) {
    for (int id = 1; id <= 10; ++id) ids.push_back(id);
  }

  std::vector<fairrank::repro::CriterionResult> results;
  try {
    for (int id : ids) results.push_back(fairrank::repro::run_criterion(id));
  } catch (const fairrank::Error& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  fairrank::repro::print_results(std::cout, results);
  for (const auto& r : results) {
    if (!r.passed) return 1;
  }
  return 0;
}
