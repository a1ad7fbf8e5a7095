#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "eaqga/rng.hpp"
#include "eaqga/sampler.hpp"

namespace eaqga::testing {

/// Random valid plan: a shuffled qubit order split into independents and
/// chains of 2..5 qubits with random biases and parities.
inline SamplingPlan random_plan(Rng& rng, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[j]);
  }
  SamplingPlan plan;
  plan.n = n;
  int pos = 0;
  while (pos < n) {
    const int remaining = n - pos;
    if (remaining < 2 || rng.bernoulli(0.5)) {
      plan.independents[perm[static_cast<std::size_t>(pos)]] = rng.uniform01();
      pos += 1;
      continue;
    }
    const int max_len = std::min(remaining, 5);
    const int len = 2 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(max_len - 1)));
    Chain c;
    c.control = perm[static_cast<std::size_t>(pos)];
    c.control_p1 = rng.uniform01();
    for (int k = 1; k < len; ++k)
      c.targets.push_back({perm[static_cast<std::size_t>(pos + k)],
                           rng.bernoulli(0.5) ? Parity::Positive : Parity::Negative});
    plan.chains.push_back(std::move(c));
    pos += len;
  }
  std::sort(plan.chains.begin(), plan.chains.end(),
            [](const Chain& a, const Chain& b) { return a.control < b.control; });
  return plan;
}

}  // namespace eaqga::testing
