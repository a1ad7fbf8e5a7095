#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eaqga/bitstring.hpp"
#include "eaqga/problem.hpp"
#include "eaqga/rng.hpp"
#include "eaqga/run_record.hpp"
#include "eaqga/sampler.hpp"

namespace eaqga {

struct EaqgaConfig {
  int population = 10;
  int max_iterations = 20;
  double p_a = 0.95;  ///< probability of reproducing each bit of the best solution
  double p_s = 0.6;   ///< base pair-selection probability
  std::uint64_t seed = 0;
};

struct ScoredBitstring {
  Bitstring x;
  double fitness = 0.0;
};

/// The two best distinct solutions found so far, best1 first. Fitness
/// ties are broken toward the lexicographically smaller bitstring.
struct ElitismPool {
  ScoredBitstring best1;
  ScoredBitstring best2;
};

enum class PairKind : std::uint8_t { Positive, Negative };

/// Index pairs (i < j), in ascending lexicographic order, whose bits
/// match within both parents (positive) or differ within both parents
/// (negative). Mixed pairs are excluded.
struct CandidatePairs {
  std::vector<std::pair<int, int>> positive;
  std::vector<std::pair<int, int>> negative;
};

CandidatePairs detect_candidate_pairs(const Bitstring& b1, const Bitstring& b2);

/// df(t) = 0.5 + t / (2 * t_max); reaches exactly 1 at t = t_max.
double decay_factor(int t, int t_max);

/// Coupling-aware selection probability for one candidate pair:
///   positive pair, coupling > 0   -> p_s * df(t) * |coupling|
///   positive pair, coupling <= 0  -> p_s * |coupling|
///   negative pair, coupling < 0   -> p_s * |coupling|
///   negative pair, coupling >= 0  -> p_s * df(t) * |coupling|
/// where coupling is the normalized covariance entry for the pair.
double pair_probability(PairKind kind, double coupling, double p_s, int t, int t_max);
double pair_probability(int i, int j, PairKind kind, const NormalizedCoupling& sigma_n,
                        double p_s, int t, int t_max);

struct SelectedPair {
  int i = 0;
  int j = 0;
  PairKind kind = PairKind::Positive;
};

/// Independent Bernoulli keep/drop per candidate, walked in ascending
/// (i, j) order with exactly one uniform draw each.
std::vector<SelectedPair> select_pairs(const CandidatePairs& candidates,
                                       const NormalizedCoupling& sigma_n, double p_s,
                                       int t, int t_max, Rng& rng);

/// Chain layout before probabilities are attached.
struct ChainSkeleton {
  int control = 0;
  std::vector<ChainTarget> targets;
};

/// Connects selected pairs into chains. Edges are processed in ascending
/// lexicographic order and cycle-closing edges dropped (spanning forest,
/// so at most n - 1 pairs survive). Within each tree the control is the
/// vertex of maximum kept degree (ties to the lowest index); target
/// parity is Positive iff the parent bits match at control and target.
std::vector<ChainSkeleton> assemble_chains(const std::vector<SelectedPair>& selected,
                                           const Bitstring& b1);

/// Attaches probabilities: a chain control measures 1 with probability
/// p_a when the best solution has 1 there (else 1 - p_a); every qubit
/// outside all chains becomes an independent with the same bias rule.
SamplingPlan build_plan(const Bitstring& b1, const std::vector<ChainSkeleton>& chains,
                        double p_a);

/// Merges a generation into the pool: keeps the two highest-fitness
/// distinct bitstrings, ties to the lexicographically smaller one. With
/// a single distinct bitstring, best2 == best1.
ElitismPool update_pool(const std::optional<ElitismPool>& pool,
                        const std::vector<ScoredBitstring>& generation);

/// Called for every plan built at iterations t >= 2, before sampling.
using PlanObserver =
    std::function<void(int iteration, int member, const SamplingPlan& plan, const Bitstring& best)>;

/// Full loop: iteration 1 samples population-many uniform plans; each
/// later iteration t rebuilds plans from the elitism pool via
/// detect -> select(t) -> assemble -> build, samples each plan once and
/// updates the pool. Deterministic in cfg.seed.
RunRecord run_eaqga(const QuboProblem& problem, const EaqgaConfig& cfg,
                    const std::string& problem_id = {}, const PlanObserver& observer = {});

}  // namespace eaqga
