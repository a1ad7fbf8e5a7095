#pragma once

// Small statistics helpers for the test suites: chi-square p-values via
// the regularized incomplete gamma function, and a goodness-of-fit
// wrapper that pools low-expectation cells.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace eaqga::testing {

inline double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int k = 1; k < 1000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

/// Regularized upper incomplete gamma Q(a, x).
inline double gammq(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

inline double chi_square_pvalue(double statistic, double dof) {
  return gammq(dof / 2.0, statistic / 2.0);
}

/// Pearson goodness-of-fit p-value of observed counts against a discrete
/// distribution. Cells with expected count below min_expected are pooled
/// into one; zero-probability cells must be empty (else p = 0).
inline double chi_square_gof(const std::vector<std::uint64_t>& observed,
                             const std::vector<double>& probs, double total,
                             double min_expected = 5.0) {
  if (observed.size() != probs.size()) throw std::invalid_argument("chi_square_gof shapes");
  double stat = 0.0;
  int cells = 0;
  double pooled_obs = 0.0;
  double pooled_exp = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == 0.0) {
      if (observed[i] != 0) return 0.0;
      continue;
    }
    const double expected = probs[i] * total;
    if (expected < min_expected) {
      pooled_obs += static_cast<double>(observed[i]);
      pooled_exp += expected;
      continue;
    }
    const double diff = static_cast<double>(observed[i]) - expected;
    stat += diff * diff / expected;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    const double diff = pooled_obs - pooled_exp;
    stat += diff * diff / pooled_exp;
    ++cells;
  }
  if (cells < 2) return 1.0;  // nothing to test against
  return chi_square_pvalue(stat, static_cast<double>(cells - 1));
}

}  // namespace eaqga::testing
