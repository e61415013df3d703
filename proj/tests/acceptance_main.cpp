// Acceptance suite runner: one pass/fail line per criterion.

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "wt/acceptance.hpp"

int main(int argc, char** argv) {
  int workers = 0;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
      workers = std::atoi(argv[++i]);
    else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
  }
  bool all = true;
  const int first = only > 0 ? only : 1;
  const int last = only > 0 ? only : 11;
  for (int id = first; id <= last; ++id) {
    const wt::CriterionResult r = wt::run_criterion(id, workers);
    std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n",
                r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    all = all && r.pass;
  }
  std::printf("%s\n", all ? "acceptance: ALL PASS" : "acceptance: FAILURES");
  return all ? 0 : 1;
}
