#include "eaqga/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>

#include "eaqga/errors.hpp"

namespace eaqga {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Best-so-far with fitness ties resolved toward the lexicographically
/// smaller bitstring. offer() returns true only on a strict improvement.
struct BestTracker {
  std::optional<Bitstring> x;
  double fitness = 0.0;

  bool offer(const Bitstring& candidate, double f) {
    if (!x) {
      x = candidate;
      fitness = f;
      return true;
    }
    if (f > fitness) {
      x = candidate;
      fitness = f;
      return true;
    }
    if (f == fitness && candidate < *x) x = candidate;
    return false;
  }
};

std::vector<int> rank_by_fitness(const std::vector<Bitstring>& population,
                                 const std::vector<double>& fitnesses) {
  std::vector<int> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    if (fitnesses[ia] != fitnesses[ib]) return fitnesses[ia] > fitnesses[ib];
    return population[ia] < population[ib];
  });
  return order;
}

void flip_one_bit(Bitstring& x, Rng& rng) {
  const auto pos = static_cast<std::size_t>(rng.uniform_int(x.size()));
  x[pos] ^= 1;
}

}  // namespace

AmplitudeChromosome equal_superposition(int n) {
  return AmplitudeChromosome(static_cast<std::size_t>(n), AmplitudeGene{kInvSqrt2, kInvSqrt2});
}

std::pair<Bitstring, Bitstring> single_point_crossover(const Bitstring& a, const Bitstring& b,
                                                       int cut) {
  if (a.size() != b.size()) throw UsageError("crossover: parents have different lengths");
  if (cut < 1 || cut >= static_cast<int>(a.size()))
    throw UsageError("crossover: cut outside [1, n-1]");
  Bitstring c1 = a;
  Bitstring c2 = b;
  for (std::size_t i = static_cast<std::size_t>(cut); i < a.size(); ++i) {
    c1[i] = b[i];
    c2[i] = a[i];
  }
  return {std::move(c1), std::move(c2)};
}

std::vector<Bitstring> ga_step(const std::vector<Bitstring>& population,
                               const std::vector<double>& fitnesses, const GaConfig& cfg,
                               Rng& rng) {
  if (population.empty() || population.size() != fitnesses.size())
    throw UsageError("ga_step: empty population or mismatched fitness vector");
  const int n = static_cast<int>(population.front().size());
  const int pop_size = static_cast<int>(population.size());

  const auto order = rank_by_fitness(population, fitnesses);
  std::vector<Bitstring> next;
  next.reserve(population.size());
  const int elites = std::min(cfg.elite_count, pop_size);
  for (int e = 0; e < elites; ++e) next.push_back(population[static_cast<std::size_t>(order[static_cast<std::size_t>(e)])]);

  const auto [lo_it, hi_it] = std::minmax_element(fitnesses.begin(), fitnesses.end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  const double eps = 1e-12 * std::max(1.0, span);
  std::vector<double> cumulative(population.size());
  double total = 0.0;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    total += fitnesses[i] - lo + eps;
    cumulative[i] = total;
  }
  auto roulette = [&]() -> const Bitstring& {
    const double u = rng.uniform01() * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t i = static_cast<std::size_t>(it - cumulative.begin());
    if (i >= population.size()) i = population.size() - 1;
    return population[i];
  };

  while (static_cast<int>(next.size()) < pop_size) {
    Bitstring c1 = roulette();
    Bitstring c2 = roulette();
    if (n >= 2 && rng.bernoulli(cfg.crossover_prob)) {
      const int cut = 1 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n - 1)));
      std::tie(c1, c2) = single_point_crossover(c1, c2, cut);
    }
    auto mutate = [&](Bitstring& x) {
      if (cfg.per_bit_mutation) {
        for (auto& bit : x)
          if (rng.bernoulli(cfg.mutation_rate)) bit ^= 1;
      } else if (rng.bernoulli(cfg.mutation_rate)) {
        flip_one_bit(x, rng);
      }
    };
    mutate(c1);
    mutate(c2);
    next.push_back(std::move(c1));
    if (static_cast<int>(next.size()) < pop_size) next.push_back(std::move(c2));
  }
  return next;
}

Bitstring aqga_measure(const AmplitudeChromosome& chromosome, Rng& rng) {
  Bitstring x(chromosome.size(), 0);
  for (std::size_t i = 0; i < chromosome.size(); ++i)
    x[i] = rng.bernoulli(chromosome[i].beta * chromosome[i].beta) ? 1 : 0;
  return x;
}

double aqga_theta(double theta_max, double theta_min, int iter, int t_max) {
  return theta_max - (theta_max - theta_min) * static_cast<double>(iter) / static_cast<double>(t_max);
}

void aqga_rotation(AmplitudeChromosome& chromosome, const Bitstring& x_best, int iter,
                   const AqgaConfig& cfg, Rng& rng) {
  if (chromosome.size() != x_best.size())
    throw UsageError("aqga_rotation: chromosome and best solution differ in length");
  const double theta = aqga_theta(cfg.theta_max, cfg.theta_min, iter, cfg.max_iterations);
  for (std::size_t j = 0; j < chromosome.size(); ++j) {
    // Best bits embed as (alpha, beta) = (1, 0) for 0 and (0, 1) for 1.
    const double alpha_b = x_best[j] ? 0.0 : 1.0;
    const double beta_b = x_best[j] ? 1.0 : 0.0;
    auto& g = chromosome[j];
    const double det = alpha_b * g.beta - beta_b * g.alpha;
    double direction;
    if (det > 0.0)
      direction = -1.0;
    else if (det < 0.0)
      direction = 1.0;
    else
      direction = rng.bernoulli(0.5) ? 1.0 : -1.0;
    const double delta = direction * theta;
    const double c = std::cos(delta);
    const double s = std::sin(delta);
    const double alpha = c * g.alpha - s * g.beta;
    const double beta = s * g.alpha + c * g.beta;
    g.alpha = alpha;
    g.beta = beta;
  }
}

void aqga_mutate(AmplitudeChromosome& chromosome, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw UsageError("aqga_mutate: rate outside [0, 1]");
  if (chromosome.empty() || !rng.bernoulli(rate)) return;
  auto& g = chromosome[static_cast<std::size_t>(rng.uniform_int(chromosome.size()))];
  std::swap(g.alpha, g.beta);
}

int aqga_disaster(std::vector<AmplitudeChromosome>& chromosomes,
                  const std::vector<double>& fitnesses, int stale_counter,
                  bool best_improved, const AqgaConfig& cfg) {
  if (chromosomes.size() != fitnesses.size())
    throw UsageError("aqga_disaster: mismatched fitness vector");
  int counter = best_improved ? 0 : stale_counter + 1;
  if (counter < cfg.disaster_stale_iters) return counter;

  const int n_reset = static_cast<int>(cfg.disaster_fraction * static_cast<double>(chromosomes.size()));
  std::vector<int> order(chromosomes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto ia = static_cast<std::size_t>(a);
    const auto ib = static_cast<std::size_t>(b);
    if (fitnesses[ia] != fitnesses[ib]) return fitnesses[ia] < fitnesses[ib];
    return a < b;
  });
  for (int k = 0; k < n_reset; ++k) {
    auto& chromo = chromosomes[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    chromo = equal_superposition(static_cast<int>(chromo.size()));
  }
  return 0;
}

RunRecord run_ga(const QuboProblem& problem, const GaConfig& cfg, const std::string& problem_id) {
  validate_problem(problem);
  if (cfg.population < 2) throw UsageError("ga needs population >= 2");
  if (cfg.max_iterations < 1) throw UsageError("ga needs max_iterations >= 1");
  if (!(cfg.crossover_prob >= 0.0 && cfg.crossover_prob <= 1.0) ||
      !(cfg.mutation_rate >= 0.0 && cfg.mutation_rate <= 1.0))
    throw UsageError("ga: probabilities outside [0, 1]");
  if (cfg.elite_count < 0) throw UsageError("ga: elite_count must be >= 0");

  const auto started = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);

  std::vector<Bitstring> population(static_cast<std::size_t>(cfg.population));
  for (auto& x : population) {
    x.resize(static_cast<std::size_t>(problem.n));
    for (auto& bit : x) bit = rng.bernoulli(0.5) ? 1 : 0;
  }

  RunRecord rec;
  rec.algorithm = "GA";
  rec.seed = cfg.seed;
  rec.problem_id = problem_id;
  rec.population = cfg.population;
  rec.iterations = cfg.max_iterations;

  BestTracker best;
  std::vector<double> fitnesses(population.size());
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    if (t > 1) population = ga_step(population, fitnesses, cfg, rng);
    for (std::size_t i = 0; i < population.size(); ++i) {
      fitnesses[i] = evaluate_fitness(problem, population[i]);
      best.offer(population[i], fitnesses[i]);
    }
    rec.best_per_iteration.push_back(best.fitness);
  }

  rec.final_x = *best.x;
  rec.final_fitness = best.fitness;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

RunRecord run_aqga(const QuboProblem& problem, const AqgaConfig& cfg,
                   const std::string& problem_id) {
  validate_problem(problem);
  if (cfg.population < 2) throw UsageError("aqga needs population >= 2");
  if (cfg.max_iterations < 1) throw UsageError("aqga needs max_iterations >= 1");
  if (!(cfg.theta_max >= cfg.theta_min) || cfg.theta_min < 0.0)
    throw UsageError("aqga needs theta_max >= theta_min >= 0");
  if (!(cfg.mutation_ratio >= 0.0 && cfg.mutation_ratio <= 1.0) ||
      !(cfg.disaster_fraction >= 0.0 && cfg.disaster_fraction <= 1.0))
    throw UsageError("aqga: probabilities outside [0, 1]");

  const auto started = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);

  std::vector<AmplitudeChromosome> chromosomes(static_cast<std::size_t>(cfg.population),
                                               equal_superposition(problem.n));
  RunRecord rec;
  rec.algorithm = "AQGA";
  rec.seed = cfg.seed;
  rec.problem_id = problem_id;
  rec.population = cfg.population;
  rec.iterations = cfg.max_iterations;

  BestTracker best;
  int stale = 0;
  std::vector<double> fitnesses(chromosomes.size());
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    bool improved = false;
    for (std::size_t i = 0; i < chromosomes.size(); ++i) {
      const Bitstring x = aqga_measure(chromosomes[i], rng);
      fitnesses[i] = evaluate_fitness(problem, x);
      improved = best.offer(x, fitnesses[i]) || improved;
    }
    rec.best_per_iteration.push_back(best.fitness);
    for (auto& chromo : chromosomes) aqga_rotation(chromo, *best.x, t - 1, cfg, rng);
    for (auto& chromo : chromosomes) aqga_mutate(chromo, cfg.mutation_ratio, rng);
    stale = aqga_disaster(chromosomes, fitnesses, stale, improved, cfg);
  }

  rec.final_x = *best.x;
  rec.final_fitness = best.fitness;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

}  // namespace eaqga
