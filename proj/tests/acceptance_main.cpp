// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1 for ctest).

#include <cstdlib>
#include <iostream>
#include <string>

#include "arena/acceptance.hpp"

int main(int argc, char** argv) {
  arena::AcceptanceOptions options;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--seed" && k + 1 < argc) {
      options.seed = std::strtoull(argv[++k], nullptr, 10);
    } else if (arg == "--out" && k + 1 < argc) {
      options.out_dir = argv[++k];
    } else if (arg == "--only" && k + 1 < argc) {
      options.only.push_back(std::atoi(argv[++k]));
    } else {
      std::cerr << "usage: acceptance [--seed N] [--out DIR] [--only ID]...\n";
      return 2;
    }
  }
  const auto results = arena::run_acceptance(options, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
