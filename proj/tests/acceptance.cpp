// One line per acceptance criterion; exit status 1 if any fails.
// Optional arguments restrict the run to the listed criterion numbers.

#include <algorithm>
#include <cstdio>
#include <cstdlib>

#include "riesz/acceptance.hpp"

int main(int argc, char** argv) {
  riesz::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (int id = 1; id <= riesz::acceptance_criterion_count(); ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    const riesz::CriterionResult r = riesz::run_criterion(id, opts);
    std::printf("criterion %2d %s  %-48s %6.1fs  %s\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  return failed ? 1 : 0;
}
