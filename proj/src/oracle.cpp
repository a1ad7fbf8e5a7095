#include "eaqga/oracle.hpp"

#include <bit>
#include <string>

#include "eaqga/errors.hpp"

namespace eaqga {

OracleResult brute_force(const QuboProblem& problem, int n_limit) {
  validate_problem(problem);
  if (problem.n > n_limit)
    throw UsageError("brute_force: n=" + std::to_string(problem.n) + " exceeds limit " +
                     std::to_string(n_limit) + "; raise the limit explicitly to proceed");

  const int n = problem.n;
  const std::uint64_t total = 1ULL << n;
  Bitstring x(static_cast<std::size_t>(n), 0);
  double fitness = 0.0;  // all-zeros evaluates to 0 exactly

  Bitstring best_x = x;
  double best_fitness = 0.0;

  // Gray-code walk: step k flips bit ctz(k). The incremental update is
  // d * (mu_b - q * (sigma_bb + 2 * sum_{j != b} sigma_bj x_j)); every
  // candidate improvement is re-evaluated in full before comparison, so
  // the reported maximum carries no incremental drift.
  for (std::uint64_t k = 1; k < total; ++k) {
    const int b = std::countr_zero(k);
    const double d = x[static_cast<std::size_t>(b)] ? -1.0 : 1.0;
    const double* row = &problem.sigma[static_cast<std::size_t>(b) * static_cast<std::size_t>(n)];
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      if (x[static_cast<std::size_t>(j)]) s += row[j];
    s -= row[b] * (x[static_cast<std::size_t>(b)] ? 1.0 : 0.0);
    fitness += d * (problem.mu[static_cast<std::size_t>(b)] - problem.q * (row[b] + 2.0 * s));
    x[static_cast<std::size_t>(b)] ^= 1;

    if ((k & 0xFFFFULL) == 0) fitness = evaluate_fitness(problem, x);

    if (fitness >= best_fitness - 1e-9) {
      const double exact = evaluate_fitness(problem, x);
      if (exact > best_fitness || (exact == best_fitness && x < best_x)) {
        best_fitness = exact;
        best_x = x;
      }
    }
  }

  return {std::move(best_x), best_fitness, total};
}

}  // namespace eaqga
