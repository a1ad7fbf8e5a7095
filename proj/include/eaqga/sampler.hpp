#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "json.hpp"

#include "eaqga/bitstring.hpp"
#include "eaqga/rng.hpp"

namespace eaqga {

enum class Parity : std::uint8_t {
  Positive,  ///< target measures the same value as the control
  Negative,  ///< target measures the complement of the control
};

struct ChainTarget {
  int qubit = 0;
  Parity parity = Parity::Positive;
};

/// One parity chain: a biased control qubit fanning out to targets whose
/// measured values are deterministic functions of the control outcome.
/// control_p1 is the probability that the control measures 1.
struct Chain {
  int control = 0;
  double control_p1 = 0.5;
  std::vector<ChainTarget> targets;
};

/// Exact measurement statistics of one generation circuit. Every qubit in
/// [0, n) appears exactly once, either as an independent biased qubit or
/// inside one chain. Only statistics are stored; the prepared states have
/// no phase observable in the computational basis, so this is lossless.
struct SamplingPlan {
  int n = 0;
  std::map<int, double> independents;  ///< qubit -> P(measure 1)
  std::vector<Chain> chains;           ///< sorted by control index
};

/// All qubits independent with p1 = 0.5 (the uniform-superposition layer).
SamplingPlan uniform_plan(int n);

/// Throws std::logic_error when coverage/disjointness is violated,
/// UsageError when probabilities leave [0, 1].
void validate_plan(const SamplingPlan& plan);

/// RY angle that measures desired_bit with probability p_a:
/// 2*acos(sqrt(p_a)) for bit 0, 2*acos(sqrt(1 - p_a)) for bit 1.
double bias_angle(double p_a, int desired_bit);

/// P(measure 1) = sin^2(theta/2) for a qubit rotated by theta from |0>.
double p1_from_angle(double theta);

/// One shot. Consumes one uniform draw per independent qubit in ascending
/// qubit order, then one draw per chain in ascending control order;
/// targets are set by parity without consuming randomness. O(n).
Bitstring sample(const SamplingPlan& plan, Rng& rng);

/// Exact joint distribution over all 2^n outcomes, indexed by
/// sum_i x_i * 2^i. Requires n <= 20 (throws UsageError above that).
std::vector<double> plan_distribution(const SamplingPlan& plan);

Bitstring index_to_bitstring(std::uint32_t index, int n);
std::uint32_t bitstring_to_index(const Bitstring& x);

/// Debug dump:
/// {"n":..., "independents":{"idx":p1,...},
///  "chains":[{"control":..., "p1":..., "targets":[[idx,"POS"|"NEG"],...]}]}
nlohmann::ordered_json plan_to_json(const SamplingPlan& plan);

}  // namespace eaqga
