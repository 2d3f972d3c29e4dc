// Approximates a 200 x 200 uniform matrix at rank 10 with both projection
// methods and prints errors, iteration counts and loop times.

#include <cstdio>

#include "nlrm/nlrm.hpp"

int main() {
  const nlrm::DenseMatrix a = nlrm::gen_uniform(200, 200, 7);

  nlrm::SolverConfig cfg;
  cfg.rank = 10;

  const auto tap = nlrm::tap_solve(a, cfg);
  const auto ap = nlrm::ap_solve(a, cfg);

  std::printf("tap: rel_error=%.6f iters=%zu seconds=%.4f\n", tap.rel_error_x, tap.iterations(),
              tap.seconds());
  std::printf("ap:  rel_error=%.6f iters=%zu seconds=%.4f\n", ap.rel_error_x, ap.iterations(),
              ap.seconds());
  return 0;
}
