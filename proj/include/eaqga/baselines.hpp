#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eaqga/bitstring.hpp"
#include "eaqga/problem.hpp"
#include "eaqga/rng.hpp"
#include "eaqga/run_record.hpp"

namespace eaqga {

struct GaConfig {
  int population = 10;
  int max_iterations = 20;
  double crossover_prob = 0.85;
  double mutation_rate = 0.03;
  int elite_count = 2;
  bool per_bit_mutation = false;  ///< alternative reading: flip each bit with mutation_rate
  std::uint64_t seed = 0;
};

struct AqgaConfig {
  int population = 10;
  int max_iterations = 20;
  double theta_max = 0.25;
  double theta_min = 0.15;
  double mutation_ratio = 0.05;
  int disaster_stale_iters = 6;
  double disaster_fraction = 0.2;
  std::uint64_t seed = 0;
};

/// One amplitude pair; alpha^2 + beta^2 == 1 within 1e-9.
struct AmplitudeGene {
  double alpha = 0.0;
  double beta = 0.0;
};

using AmplitudeChromosome = std::vector<AmplitudeGene>;

/// All genes at (1/sqrt2, 1/sqrt2).
AmplitudeChromosome equal_superposition(int n);

/// Offspring halves swapped at `cut` (first cut bits from a, rest from b
/// and vice versa); cut in [1, n-1].
std::pair<Bitstring, Bitstring> single_point_crossover(const Bitstring& a, const Bitstring& b, int cut);

/// One GA generation: elites copied unchanged (fitness ties resolved
/// toward the lexicographically smaller bitstring), remaining slots
/// filled by roulette-selected parents with weights f - min(f) + eps,
/// single-point crossover with crossover_prob, then mutation (default:
/// per offspring, with mutation_rate, flip one uniformly chosen bit).
std::vector<Bitstring> ga_step(const std::vector<Bitstring>& population,
                               const std::vector<double>& fitnesses, const GaConfig& cfg,
                               Rng& rng);

/// Independent Bernoulli(beta^2) per gene, one draw per gene.
Bitstring aqga_measure(const AmplitudeChromosome& chromosome, Rng& rng);

/// Adaptive rotation magnitude theta_max - (theta_max - theta_min) * iter / t_max.
double aqga_theta(double theta_max, double theta_min, int iter, int t_max);

/// Rotates every gene toward the best solution's bit. Direction is
/// -sgn(D) with D = alpha_best * beta - beta_best * alpha (uniform +-1
/// when D == 0, one draw); magnitude from aqga_theta with 0-based iter.
void aqga_rotation(AmplitudeChromosome& chromosome, const Bitstring& x_best, int iter,
                   const AqgaConfig& cfg, Rng& rng);

/// With probability rate, swaps (alpha, beta) of one uniformly chosen gene.
void aqga_mutate(AmplitudeChromosome& chromosome, double rate, Rng& rng);

/// Stagnation reset. Returns the updated stale counter: 0 after an
/// improvement or a reset, incremented otherwise. When the counter
/// reaches cfg.disaster_stale_iters, the floor(disaster_fraction * N)
/// chromosomes with the lowest current fitness are reinitialized to
/// equal superposition.
int aqga_disaster(std::vector<AmplitudeChromosome>& chromosomes,
                  const std::vector<double>& fitnesses, int stale_counter,
                  bool best_improved, const AqgaConfig& cfg);

RunRecord run_ga(const QuboProblem& problem, const GaConfig& cfg,
                 const std::string& problem_id = {});
RunRecord run_aqga(const QuboProblem& problem, const AqgaConfig& cfg,
                   const std::string& problem_id = {});

}  // namespace eaqga
