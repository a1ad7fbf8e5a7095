#include "eaqga/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eaqga/errors.hpp"

namespace eaqga {

SamplingPlan uniform_plan(int n) {
  if (n < 1) throw UsageError("uniform_plan needs n >= 1");
  SamplingPlan plan;
  plan.n = n;
  for (int q = 0; q < n; ++q) plan.independents[q] = 0.5;
  return plan;
}

void validate_plan(const SamplingPlan& plan) {
  if (plan.n < 1) throw std::logic_error("plan has no qubits");
  std::vector<char> seen(static_cast<std::size_t>(plan.n), 0);
  auto mark = [&](int q) {
    if (q < 0 || q >= plan.n) throw std::logic_error("plan qubit index out of range");
    if (seen[static_cast<std::size_t>(q)]) throw std::logic_error("plan covers a qubit twice");
    seen[static_cast<std::size_t>(q)] = 1;
  };
  auto check_p = [](double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw UsageError("plan probability outside [0, 1]");
  };
  for (const auto& [q, p1] : plan.independents) {
    mark(q);
    check_p(p1);
  }
  for (const auto& chain : plan.chains) {
    mark(chain.control);
    check_p(chain.control_p1);
    if (chain.targets.empty()) throw std::logic_error("chain without targets");
    for (const auto& t : chain.targets) mark(t.qubit);
  }
  for (char c : seen)
    if (!c) throw std::logic_error("plan leaves a qubit uncovered");
}

double bias_angle(double p_a, int desired_bit) {
  if (!(p_a >= 0.0 && p_a <= 1.0)) throw UsageError("bias_angle: p_a outside [0, 1]");
  if (desired_bit != 0 && desired_bit != 1) throw UsageError("bias_angle: bit must be 0 or 1");
  const double amp = desired_bit == 0 ? std::sqrt(p_a) : std::sqrt(1.0 - p_a);
  return 2.0 * std::acos(amp);
}

double p1_from_angle(double theta) {
  const double s = std::sin(theta / 2.0);
  return s * s;
}

Bitstring sample(const SamplingPlan& plan, Rng& rng) {
  Bitstring x(static_cast<std::size_t>(plan.n), 0);
  for (const auto& [q, p1] : plan.independents)
    x[static_cast<std::size_t>(q)] = rng.bernoulli(p1) ? 1 : 0;
  for (const auto& chain : plan.chains) {
    const std::uint8_t c = rng.bernoulli(chain.control_p1) ? 1 : 0;
    x[static_cast<std::size_t>(chain.control)] = c;
    for (const auto& t : chain.targets)
      x[static_cast<std::size_t>(t.qubit)] = t.parity == Parity::Positive ? c : (1 - c);
  }
  return x;
}

std::vector<double> plan_distribution(const SamplingPlan& plan) {
  if (plan.n > 20)
    throw UsageError("plan_distribution enumerates 2^n outcomes; n=" + std::to_string(plan.n) +
                     " exceeds the limit of 20");
  validate_plan(plan);
  const std::uint32_t total = 1u << plan.n;
  std::vector<double> probs(total, 0.0);
  for (std::uint32_t m = 0; m < total; ++m) {
    double p = 1.0;
    for (const auto& [q, p1] : plan.independents) {
      const bool one = (m >> q) & 1u;
      p *= one ? p1 : 1.0 - p1;
    }
    for (const auto& chain : plan.chains) {
      const bool c = (m >> chain.control) & 1u;
      bool consistent = true;
      for (const auto& t : chain.targets) {
        const bool bit = (m >> t.qubit) & 1u;
        const bool want = t.parity == Parity::Positive ? c : !c;
        if (bit != want) {
          consistent = false;
          break;
        }
      }
      if (!consistent) {
        p = 0.0;
        break;
      }
      p *= c ? chain.control_p1 : 1.0 - chain.control_p1;
    }
    probs[m] = p;
  }
  return probs;
}

Bitstring index_to_bitstring(std::uint32_t index, int n) {
  Bitstring x(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (index >> i) & 1u;
  return x;
}

std::uint32_t bitstring_to_index(const Bitstring& x) {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) m |= 1u << i;
  return m;
}

nlohmann::ordered_json plan_to_json(const SamplingPlan& plan) {
  nlohmann::ordered_json j;
  j["n"] = plan.n;
  auto indep = nlohmann::ordered_json::object();
  for (const auto& [q, p1] : plan.independents) indep[std::to_string(q)] = p1;
  j["independents"] = std::move(indep);
  auto chains = nlohmann::ordered_json::array();
  for (const auto& chain : plan.chains) {
    nlohmann::ordered_json c;
    c["control"] = chain.control;
    c["p1"] = chain.control_p1;
    auto targets = nlohmann::ordered_json::array();
    for (const auto& t : chain.targets)
      targets.push_back({t.qubit, t.parity == Parity::Positive ? "POS" : "NEG"});
    c["targets"] = std::move(targets);
    chains.push_back(std::move(c));
  }
  j["chains"] = std::move(chains);
  return j;
}

}  // namespace eaqga
