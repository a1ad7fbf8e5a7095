#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eaqga/bitstring.hpp"

namespace eaqga {

/// Seeded trace of one algorithm run. best_per_iteration holds the
/// best-so-far fitness after each iteration (non-decreasing); the last
/// entry equals final_fitness and evaluate_fitness(final_x).
struct RunRecord {
  std::string algorithm;  ///< "EAQGA", "GA" or "AQGA"
  std::uint64_t seed = 0;
  std::string problem_id;
  int population = 0;
  int iterations = 0;
  std::vector<double> best_per_iteration;
  Bitstring final_x;
  double final_fitness = 0.0;
  double wall_time = 0.0;  ///< seconds; kept out of the serialized record
};

/// Deterministic JSON document, floats at 17 significant digits.
/// wall_time is excluded so identical (config, seed) reproduce identical
/// bytes; timings are reported separately by the harness.
std::string run_record_to_json(const RunRecord& r);
RunRecord run_record_from_json(const std::string& text);

}  // namespace eaqga
