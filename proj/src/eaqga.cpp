#include "eaqga/eaqga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "eaqga/errors.hpp"

namespace eaqga {

CandidatePairs detect_candidate_pairs(const Bitstring& b1, const Bitstring& b2) {
  if (b1.size() != b2.size())
    throw UsageError("detect_candidate_pairs: parents have different lengths");
  CandidatePairs out;
  const int n = static_cast<int>(b1.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool same1 = b1[i] == b1[j];
      const bool same2 = b2[i] == b2[j];
      if (same1 && same2)
        out.positive.emplace_back(i, j);
      else if (!same1 && !same2)
        out.negative.emplace_back(i, j);
    }
  return out;
}

double decay_factor(int t, int t_max) {
  return 0.5 + static_cast<double>(t) / (2.0 * static_cast<double>(t_max));
}

double pair_probability(PairKind kind, double coupling, double p_s, int t, int t_max) {
  const double mag = std::fabs(coupling);
  const bool damped =
      kind == PairKind::Positive ? coupling > 0.0 : coupling >= 0.0;
  return damped ? p_s * decay_factor(t, t_max) * mag : p_s * mag;
}

double pair_probability(int i, int j, PairKind kind, const NormalizedCoupling& sigma_n,
                        double p_s, int t, int t_max) {
  return pair_probability(kind, sigma_n.at(i, j), p_s, t, t_max);
}

std::vector<SelectedPair> select_pairs(const CandidatePairs& candidates,
                                       const NormalizedCoupling& sigma_n, double p_s,
                                       int t, int t_max, Rng& rng) {
  std::vector<SelectedPair> out;
  auto pi = candidates.positive.begin();
  auto ni = candidates.negative.begin();
  auto consider = [&](const std::pair<int, int>& ij, PairKind kind) {
    const double prob = pair_probability(ij.first, ij.second, kind, sigma_n, p_s, t, t_max);
    if (rng.uniform01() < prob) out.push_back({ij.first, ij.second, kind});
  };
  // One draw per candidate, ascending (i, j) over the merged sets.
  while (pi != candidates.positive.end() || ni != candidates.negative.end()) {
    const bool take_pos = ni == candidates.negative.end() ||
                          (pi != candidates.positive.end() && *pi < *ni);
    if (take_pos)
      consider(*pi++, PairKind::Positive);
    else
      consider(*ni++, PairKind::Negative);
  }
  return out;
}

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    return true;
  }
};

}  // namespace

std::vector<ChainSkeleton> assemble_chains(const std::vector<SelectedPair>& selected,
                                           const Bitstring& b1) {
  const int n = static_cast<int>(b1.size());
  std::vector<std::pair<int, int>> edges;
  edges.reserve(selected.size());
  for (const auto& s : selected) {
    if (s.i < 0 || s.j < 0 || s.i >= n || s.j >= n || s.i == s.j)
      throw UsageError("assemble_chains: pair index out of range");
    edges.emplace_back(std::min(s.i, s.j), std::max(s.i, s.j));
  }
  std::sort(edges.begin(), edges.end());

  DisjointSet dsu(n);
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, int>> kept;
  for (const auto& [i, j] : edges) {
    if (!dsu.unite(i, j)) continue;  // cycle-closing edge dropped
    kept.emplace_back(i, j);
    ++degree[static_cast<std::size_t>(i)];
    ++degree[static_cast<std::size_t>(j)];
  }

  // Group the touched vertices by component, ascending.
  std::map<int, std::vector<int>> components;
  std::vector<char> touched(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : kept) touched[static_cast<std::size_t>(i)] = touched[static_cast<std::size_t>(j)] = 1;
  for (int v = 0; v < n; ++v)
    if (touched[static_cast<std::size_t>(v)]) components[dsu.find(v)].push_back(v);

  std::vector<ChainSkeleton> chains;
  chains.reserve(components.size());
  for (auto& [root, members] : components) {
    int control = members.front();
    for (int v : members)
      if (degree[static_cast<std::size_t>(v)] > degree[static_cast<std::size_t>(control)]) control = v;
    ChainSkeleton sk;
    sk.control = control;
    for (int v : members) {
      if (v == control) continue;
      sk.targets.push_back({v, b1[static_cast<std::size_t>(control)] == b1[static_cast<std::size_t>(v)]
                                   ? Parity::Positive
                                   : Parity::Negative});
    }
    chains.push_back(std::move(sk));
  }
  std::sort(chains.begin(), chains.end(),
            [](const ChainSkeleton& a, const ChainSkeleton& b) { return a.control < b.control; });
  return chains;
}

SamplingPlan build_plan(const Bitstring& b1, const std::vector<ChainSkeleton>& chains,
                        double p_a) {
  if (!(p_a >= 0.0 && p_a <= 1.0)) throw UsageError("build_plan: p_a outside [0, 1]");
  const int n = static_cast<int>(b1.size());
  SamplingPlan plan;
  plan.n = n;
  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  auto cover = [&](int q) {
    if (q < 0 || q >= n) throw std::logic_error("build_plan: chain qubit out of range");
    if (covered[static_cast<std::size_t>(q)]) throw std::logic_error("build_plan: chains overlap");
    covered[static_cast<std::size_t>(q)] = 1;
  };
  auto bias_toward = [&](int q) {
    return b1[static_cast<std::size_t>(q)] ? p_a : 1.0 - p_a;
  };
  for (const auto& sk : chains) {
    cover(sk.control);
    Chain c;
    c.control = sk.control;
    c.control_p1 = bias_toward(sk.control);
    c.targets = sk.targets;
    for (const auto& t : c.targets) cover(t.qubit);
    plan.chains.push_back(std::move(c));
  }
  std::sort(plan.chains.begin(), plan.chains.end(),
            [](const Chain& a, const Chain& b) { return a.control < b.control; });
  for (int q = 0; q < n; ++q)
    if (!covered[static_cast<std::size_t>(q)]) plan.independents[q] = bias_toward(q);
  return plan;
}

ElitismPool update_pool(const std::optional<ElitismPool>& pool,
                        const std::vector<ScoredBitstring>& generation) {
  if (generation.empty() && !pool) throw UsageError("update_pool: empty population and no pool");
  std::vector<ScoredBitstring> all;
  all.reserve(generation.size() + 2);
  if (pool) {
    all.push_back(pool->best1);
    all.push_back(pool->best2);
  }
  all.insert(all.end(), generation.begin(), generation.end());
  std::sort(all.begin(), all.end(), [](const ScoredBitstring& a, const ScoredBitstring& b) {
    if (a.fitness != b.fitness) return a.fitness > b.fitness;
    return a.x < b.x;
  });
  ElitismPool out;
  out.best1 = all.front();
  out.best2 = out.best1;
  for (const auto& s : all)
    if (s.x != out.best1.x) {
      out.best2 = s;
      break;
    }
  return out;
}

RunRecord run_eaqga(const QuboProblem& problem, const EaqgaConfig& cfg,
                    const std::string& problem_id, const PlanObserver& observer) {
  validate_problem(problem);
  if (cfg.population < 2) throw UsageError("eaqga needs population >= 2");
  if (cfg.max_iterations < 1) throw UsageError("eaqga needs max_iterations >= 1");
  if (!(cfg.p_a >= 0.0 && cfg.p_a <= 1.0)) throw UsageError("eaqga: p_a outside [0, 1]");
  if (!(cfg.p_s >= 0.0 && cfg.p_s <= 1.0)) throw UsageError("eaqga: p_s outside [0, 1]");

  const auto started = std::chrono::steady_clock::now();
  Rng rng(cfg.seed);
  const NormalizedCoupling sigma_n = normalize_coupling(problem);
  const SamplingPlan init_plan = uniform_plan(problem.n);

  std::optional<ElitismPool> pool;
  RunRecord rec;
  rec.algorithm = "EAQGA";
  rec.seed = cfg.seed;
  rec.problem_id = problem_id;
  rec.population = cfg.population;
  rec.iterations = cfg.max_iterations;
  rec.best_per_iteration.reserve(static_cast<std::size_t>(cfg.max_iterations));

  std::vector<ScoredBitstring> generation(static_cast<std::size_t>(cfg.population));
  for (int t = 1; t <= cfg.max_iterations; ++t) {
    if (t == 1) {
      for (int m = 0; m < cfg.population; ++m) {
        Bitstring x = sample(init_plan, rng);
        double f = evaluate_fitness(problem, x);
        generation[static_cast<std::size_t>(m)] = {std::move(x), f};
      }
    } else {
      const CandidatePairs candidates = detect_candidate_pairs(pool->best1.x, pool->best2.x);
      for (int m = 0; m < cfg.population; ++m) {
        const auto selected =
            select_pairs(candidates, sigma_n, cfg.p_s, t, cfg.max_iterations, rng);
        const auto chains = assemble_chains(selected, pool->best1.x);
        const SamplingPlan plan = build_plan(pool->best1.x, chains, cfg.p_a);
        if (observer) observer(t, m, plan, pool->best1.x);
        Bitstring x = sample(plan, rng);
        double f = evaluate_fitness(problem, x);
        generation[static_cast<std::size_t>(m)] = {std::move(x), f};
      }
    }
    pool = update_pool(pool, generation);
    rec.best_per_iteration.push_back(pool->best1.fitness);
  }

  rec.final_x = pool->best1.x;
  rec.final_fitness = pool->best1.fitness;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return rec;
}

}  // namespace eaqga
