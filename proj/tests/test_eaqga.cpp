#include "doctest.h"

#include <cmath>
#include <set>

#include "eaqga/eaqga.hpp"
#include "eaqga/errors.hpp"
#include "eaqga/oracle.hpp"

using namespace eaqga;

namespace {

const Bitstring kParent1 = {0, 0, 1, 1, 0};
const Bitstring kParent2 = {0, 1, 0, 1, 1};

NormalizedCoupling coupling_from(std::vector<std::pair<std::pair<int, int>, double>> entries,
                                 int n) {
  NormalizedCoupling nc;
  nc.n = n;
  nc.sigma_n.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& [ij, v] : entries) {
    nc.sigma_n[static_cast<std::size_t>(ij.first) * n + ij.second] = v;
    nc.sigma_n[static_cast<std::size_t>(ij.second) * n + ij.first] = v;
  }
  return nc;
}

QuboProblem two_asset_problem() {
  QuboProblem p;
  p.n = 2;
  p.mu = {0.1, 0.2};
  p.sigma = {0.04, 0.01, 0.01, 0.09};
  p.q = 0.5;
  return p;
}

}  // namespace

TEST_CASE("detect_candidate_pairs on the worked five-bit example") {
  const auto c = detect_candidate_pairs(kParent1, kParent2);
  CHECK(c.positive == std::vector<std::pair<int, int>>{{1, 4}});
  CHECK(c.negative == std::vector<std::pair<int, int>>{{0, 3}, {1, 2}, {2, 4}});
}

TEST_CASE("detect_candidate_pairs degenerate and error cases") {
  const auto c = detect_candidate_pairs({0, 1}, {0, 1});
  CHECK(c.positive.empty());
  CHECK(c.negative == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK_THROWS_AS(detect_candidate_pairs({0, 1}, {0, 1, 0}), UsageError);
}

TEST_CASE("decay_factor endpoints") {
  CHECK(decay_factor(20, 20) == 1.0);
  CHECK(decay_factor(1, 20) == doctest::Approx(0.525).epsilon(1e-15));
  CHECK(decay_factor(10, 20) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("pair_probability implements the four coupling cases") {
  // zero coupling: never selected
  CHECK(pair_probability(PairKind::Positive, 0.0, 0.6, 5, 20) == 0.0);
  CHECK(pair_probability(PairKind::Negative, 0.0, 0.6, 5, 20) == 0.0);

  // positive pair, positive coupling: damped early
  CHECK(pair_probability(PairKind::Positive, 1.0, 0.6, 20, 20) ==
        doctest::Approx(0.6).epsilon(1e-15));
  CHECK(pair_probability(PairKind::Positive, 1.0, 0.6, 10, 20) ==
        doctest::Approx(0.45).epsilon(1e-15));
  // positive pair, non-positive coupling: plain magnitude
  CHECK(pair_probability(PairKind::Positive, -0.5, 0.6, 1, 20) ==
        doctest::Approx(0.3).epsilon(1e-15));
  // negative pair, negative coupling: plain magnitude
  CHECK(pair_probability(PairKind::Negative, -0.7, 0.6, 1, 20) ==
        doctest::Approx(0.42).epsilon(1e-15));
  // negative pair, non-negative coupling: damped early
  CHECK(pair_probability(PairKind::Negative, 0.5, 0.6, 10, 20) ==
        doctest::Approx(0.225).epsilon(1e-15));
}

TEST_CASE("select_pairs extremes") {
  const auto cands = detect_candidate_pairs(kParent1, kParent2);
  auto nc = coupling_from({{{1, 4}, 1.0}, {{0, 3}, -1.0}, {{1, 2}, -1.0}, {{2, 4}, -1.0}}, 5);
  Rng rng(5);
  CHECK(select_pairs(cands, nc, 0.0, 10, 20, rng).empty());

  // all probabilities exactly 1: p_s = 1, |coupling| = 1, undamped cases
  const auto all = select_pairs(cands, nc, 1.0, 20, 20, rng);
  CHECK(all.size() == 4);
}

TEST_CASE("select_pairs frequencies follow the piecewise formula") {
  CandidatePairs cands;
  cands.positive = {{0, 1}, {2, 3}};
  cands.negative = {{1, 2}, {4, 5}};
  const auto nc = coupling_from(
      {{{0, 1}, 0.8}, {{2, 3}, -0.5}, {{1, 2}, -0.7}, {{4, 5}, 0.5}}, 6);
  const double p_s = 0.6;
  const int t = 10, t_max = 20;  // df = 0.75
  const double expected[4] = {0.6 * 0.75 * 0.8, 0.6 * 0.7, 0.6 * 0.5, 0.6 * 0.75 * 0.5};
  // order walked: (0,1)P, (1,2)N, (2,3)P, (4,5)N

  int counts[4] = {0, 0, 0, 0};
  const int trials = 100000;
  Rng rng(777);
  for (int it = 0; it < trials; ++it) {
    for (const auto& s : select_pairs(cands, nc, p_s, t, t_max, rng)) {
      if (s.i == 0 && s.j == 1) ++counts[0];
      if (s.i == 1 && s.j == 2) ++counts[1];
      if (s.i == 2 && s.j == 3) ++counts[2];
      if (s.i == 4 && s.j == 5) ++counts[3];
    }
  }
  for (int k = 0; k < 4; ++k) {
    const double freq = static_cast<double>(counts[k]) / trials;
    CHECK(std::fabs(freq - expected[k]) <= 0.01);
  }
}

TEST_CASE("assemble_chains on the worked example") {
  const auto chains = assemble_chains({{1, 2, PairKind::Negative}, {1, 4, PairKind::Positive}},
                                      kParent1);
  REQUIRE(chains.size() == 1);
  CHECK(chains[0].control == 1);
  REQUIRE(chains[0].targets.size() == 2);
  CHECK(chains[0].targets[0].qubit == 2);
  CHECK(chains[0].targets[0].parity == Parity::Negative);
  CHECK(chains[0].targets[1].qubit == 4);
  CHECK(chains[0].targets[1].parity == Parity::Positive);
}

TEST_CASE("assemble_chains drops cycle-closing edges") {
  const auto chains = assemble_chains(
      {{1, 2, PairKind::Negative}, {1, 4, PairKind::Positive}, {2, 4, PairKind::Negative}},
      kParent1);
  REQUIRE(chains.size() == 1);
  CHECK(chains[0].control == 1);
  CHECK(chains[0].targets.size() == 2);  // 3 members, 2 kept edges
}

TEST_CASE("assemble_chains with nothing selected") {
  CHECK(assemble_chains({}, kParent1).empty());
}

TEST_CASE("build_plan bias rule") {
  const auto plan = build_plan({1, 0}, {}, 0.95);
  CHECK(plan.chains.empty());
  CHECK(plan.independents.at(0) == 0.95);
  CHECK(plan.independents.at(1) == doctest::Approx(0.05).epsilon(1e-15));

  const auto uniform = build_plan({1, 0, 1}, {}, 0.5);
  for (const auto& [q, p1] : uniform.independents) CHECK(p1 == 0.5);
}

TEST_CASE("build_plan on the worked example") {
  ChainSkeleton sk;
  sk.control = 1;
  sk.targets = {{2, Parity::Negative}, {4, Parity::Positive}};
  const auto plan = build_plan(kParent1, {sk}, 0.95);
  REQUIRE(plan.chains.size() == 1);
  CHECK(plan.chains[0].control == 1);
  CHECK(plan.chains[0].control_p1 == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(plan.independents.size() == 2);
  CHECK(plan.independents.at(0) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(plan.independents.at(3) == 0.95);
  validate_plan(plan);
}

TEST_CASE("build_plan rejects overlapping chains") {
  ChainSkeleton a{0, {{1, Parity::Positive}}};
  ChainSkeleton b{1, {{2, Parity::Positive}}};
  CHECK_THROWS_AS(build_plan({0, 0, 0}, {a, b}, 0.9), std::logic_error);
}

TEST_CASE("update_pool keeps the two best distinct solutions") {
  ElitismPool pool;
  pool.best1 = {{1, 1}, 5.0};
  pool.best2 = {{1, 0}, 4.0};

  // strictly worse population leaves the pool unchanged
  auto next = update_pool(pool, {{{0, 1}, 3.0}, {{0, 0}, 1.0}});
  CHECK(next.best1.x == Bitstring{1, 1});
  CHECK(next.best2.x == Bitstring{1, 0});

  // fitness tie resolved toward the lexicographically smaller bitstring
  auto boot = update_pool(std::nullopt,
                          {{{1, 1}, 1.0}, {{0, 1}, 2.0}, {{1, 0}, 2.0}});
  CHECK(boot.best1.x == Bitstring{0, 1});
  CHECK(boot.best2.x == Bitstring{1, 0});

  // duplicates of best1 do not displace best2
  auto dup = update_pool(pool, {{{1, 1}, 5.0}});
  CHECK(dup.best1.x == Bitstring{1, 1});
  CHECK(dup.best2.x == Bitstring{1, 0});

  // single distinct bitstring: best2 mirrors best1
  auto single = update_pool(std::nullopt, {{{1, 0}, 1.0}, {{1, 0}, 1.0}});
  CHECK(single.best1.x == single.best2.x);
}

TEST_CASE("run_eaqga with one iteration is pure random search") {
  const auto problem = synth_problem(10, 3);
  EaqgaConfig cfg;
  cfg.population = 8;
  cfg.max_iterations = 1;
  cfg.seed = 42;
  const auto rec = run_eaqga(problem, cfg, "p");

  Rng rng(42);
  const auto plan = uniform_plan(problem.n);
  double best = -1e300;
  for (int m = 0; m < cfg.population; ++m)
    best = std::max(best, evaluate_fitness(problem, sample(plan, rng)));
  REQUIRE(rec.best_per_iteration.size() == 1);
  CHECK(rec.final_fitness == best);
}

TEST_CASE("run_eaqga finds the toy optimum on nearly every seed") {
  const auto problem = two_asset_problem();
  EaqgaConfig cfg;
  cfg.population = 10;
  cfg.max_iterations = 20;
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const auto rec = run_eaqga(problem, cfg);
    if (std::fabs(rec.final_fitness - 0.225) < 1e-12) ++hits;
  }
  CHECK(hits >= 99);
}

TEST_CASE("run_eaqga is deterministic in the seed") {
  const auto problem = synth_problem(12, 9);
  EaqgaConfig cfg;
  cfg.population = 6;
  cfg.max_iterations = 10;
  cfg.seed = 123;
  const auto a = run_eaqga(problem, cfg, "p");
  const auto b = run_eaqga(problem, cfg, "p");
  CHECK(a.best_per_iteration == b.best_per_iteration);
  CHECK(a.final_x == b.final_x);
  CHECK(a.final_fitness == b.final_fitness);
}

TEST_CASE("run_eaqga plan invariants via the observer") {
  const auto problem = synth_problem(12, 5);
  EaqgaConfig cfg;
  cfg.population = 6;
  cfg.max_iterations = 12;
  cfg.seed = 31337;

  int plans_seen = 0;
  auto rec = run_eaqga(problem, cfg, "p",
                       [&](int t, int member, const SamplingPlan& plan, const Bitstring& best) {
                         CHECK(t >= 2);
                         CHECK(member >= 0);
                         ++plans_seen;
                         validate_plan(plan);
                         // bias contract, exact: P(bit == best bit) = p_a
                         for (const auto& [q, p1] : plan.independents)
                           CHECK((best[static_cast<std::size_t>(q)] ? p1 : 1.0 - p1) == cfg.p_a);
                         std::size_t kept_pairs = 0;
                         for (const auto& chain : plan.chains) {
                           CHECK((best[static_cast<std::size_t>(chain.control)]
                                      ? chain.control_p1
                                      : 1.0 - chain.control_p1) == cfg.p_a);
                           kept_pairs += chain.targets.size();
                           for (const auto& tgt : chain.targets) {
                             const bool match = best[static_cast<std::size_t>(chain.control)] ==
                                                best[static_cast<std::size_t>(tgt.qubit)];
                             CHECK((tgt.parity == Parity::Positive) == match);
                           }
                         }
                         CHECK(kept_pairs <= static_cast<std::size_t>(problem.n - 1));
                       });
  CHECK(plans_seen == cfg.population * (cfg.max_iterations - 1));

  // best-so-far series never decreases
  for (std::size_t i = 1; i < rec.best_per_iteration.size(); ++i)
    CHECK(rec.best_per_iteration[i] >= rec.best_per_iteration[i - 1]);
  CHECK(rec.final_fitness == rec.best_per_iteration.back());
  CHECK(evaluate_fitness(problem, rec.final_x) == rec.final_fitness);
}

TEST_CASE("run_eaqga with an all-zero coupling matrix never builds chains") {
  QuboProblem p;
  p.n = 6;
  p.mu = {0.1, -0.2, 0.3, 0.0, 0.05, -0.1};
  p.sigma.assign(36, 0.0);
  p.q = 0.5;
  EaqgaConfig cfg;
  cfg.population = 4;
  cfg.max_iterations = 6;
  cfg.seed = 8;
  run_eaqga(p, cfg, "zero",
            [&](int, int, const SamplingPlan& plan, const Bitstring&) {
              CHECK(plan.chains.empty());
            });
}

TEST_CASE("run_eaqga handles a single-variable problem") {
  QuboProblem p;
  p.n = 1;
  p.mu = {0.2};
  p.sigma = {0.1};
  p.q = 0.5;
  EaqgaConfig cfg;
  cfg.population = 4;
  cfg.max_iterations = 5;
  cfg.seed = 3;
  const auto rec = run_eaqga(p, cfg);
  CHECK(rec.final_fitness == doctest::Approx(0.15).epsilon(1e-12));  // 0.2 - 0.5*0.1
  CHECK(rec.final_x == Bitstring{1});
}

TEST_CASE("run_eaqga with p_s = 0 never builds chains") {
  const auto problem = synth_problem(10, 6);
  EaqgaConfig cfg;
  cfg.population = 5;
  cfg.max_iterations = 8;
  cfg.p_s = 0.0;
  cfg.seed = 2;
  run_eaqga(problem, cfg, "p",
            [&](int, int, const SamplingPlan& plan, const Bitstring&) {
              CHECK(plan.chains.empty());
            });
}
