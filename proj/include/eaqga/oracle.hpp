#pragma once

#include <cstdint>

#include "eaqga/bitstring.hpp"
#include "eaqga/problem.hpp"

namespace eaqga {

struct OracleResult {
  Bitstring best_x;
  double best_fitness = 0.0;
  std::uint64_t evaluated_count = 0;  ///< always 2^n
};

/// Exhaustive maximum over all 2^n bitstrings, visited in Gray-code
/// order with O(n) incremental fitness updates (re-anchored by a full
/// evaluation every 2^16 steps). Ties go to the lexicographically
/// smaller bitstring. Refuses n > n_limit.
OracleResult brute_force(const QuboProblem& problem, int n_limit = 26);

}  // namespace eaqga
