#include "eaqga/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "eaqga/errors.hpp"
#include "eaqga/rng.hpp"

namespace eaqga {

namespace {

std::size_t idx(int n, int i, int j) {
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
}

// Deterministic standard normal (Box-Muller over the explicit uniform stream).
double normal01(Rng& rng) {
  double u1 = rng.uniform01();
  double u2 = rng.uniform01();
  while (u1 <= 0.0) u1 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

void validate_problem(const QuboProblem& p) {
  if (p.n < 1) throw UsageError("problem needs n >= 1, got n=" + std::to_string(p.n));
  const auto n = static_cast<std::size_t>(p.n);
  if (p.mu.size() != n) throw UsageError("mu has wrong length");
  if (p.sigma.size() != n * n) throw UsageError("sigma has wrong shape");
  if (!p.names.empty() && p.names.size() != n) throw UsageError("names has wrong length");
  if (!std::isfinite(p.q) || p.q < 0.0) throw UsageError("q must be finite and >= 0");
  for (double v : p.mu)
    if (!std::isfinite(v)) throw UsageError("mu contains a non-finite entry");
  for (int i = 0; i < p.n; ++i)
    for (int j = 0; j < p.n; ++j) {
      double v = p.sigma[idx(p.n, i, j)];
      if (!std::isfinite(v)) throw UsageError("sigma contains a non-finite entry");
      if (v != p.sigma[idx(p.n, j, i)]) throw UsageError("sigma is not symmetric");
    }
}

double evaluate_fitness(const QuboProblem& p, const Bitstring& x) {
  if (static_cast<int>(x.size()) != p.n)
    throw UsageError("bitstring length " + std::to_string(x.size()) + " does not match n=" +
                     std::to_string(p.n));
  double ret = 0.0;
  double quad = 0.0;
  for (int i = 0; i < p.n; ++i) {
    if (!x[i]) continue;
    ret += p.mu[i];
    const double* row = &p.sigma[idx(p.n, i, 0)];
    quad += row[i];
    for (int j = i + 1; j < p.n; ++j)
      if (x[j]) quad += 2.0 * row[j];
  }
  return ret - p.q * quad;
}

NormalizedCoupling normalize_coupling(const QuboProblem& p) {
  NormalizedCoupling out;
  out.n = p.n;
  out.sigma_n = p.sigma;
  double max_abs = 0.0;
  for (double v : p.sigma) max_abs = std::max(max_abs, std::fabs(v));
  if (max_abs > 0.0)
    for (double& v : out.sigma_n) v /= max_abs;
  return out;
}

void validate_prices(const PriceSeries& s) {
  const std::size_t n = s.tickers.size();
  if (n < 1) throw DataError("price series has no assets");
  if (s.prices.size() < 2) throw DataError("price series needs at least two rows");
  if (s.dates.size() != s.prices.size()) throw DataError("date column does not match price rows");
  for (std::size_t t = 0; t < s.prices.size(); ++t) {
    if (s.prices[t].size() != n) throw DataError("ragged price row at index " + std::to_string(t));
    for (double v : s.prices[t])
      if (!std::isfinite(v) || v <= 0.0)
        throw DataError("nonpositive or non-finite price at row " + std::to_string(t));
  }
  for (std::size_t t = 1; t < s.dates.size(); ++t)
    if (!(s.dates[t - 1] < s.dates[t]))
      throw DataError("dates not strictly increasing at row " + std::to_string(t));
}

QuboProblem build_portfolio(const PriceSeries& s, double q) {
  validate_prices(s);
  const int n = static_cast<int>(s.tickers.size());
  const int t_len = static_cast<int>(s.prices.size()) - 1;

  std::vector<std::vector<double>> returns(static_cast<std::size_t>(t_len),
                                           std::vector<double>(static_cast<std::size_t>(n)));
  for (int t = 0; t < t_len; ++t)
    for (int i = 0; i < n; ++i)
      returns[t][i] = s.prices[t + 1][i] / s.prices[t][i] - 1.0;

  QuboProblem p;
  p.n = n;
  p.q = q;
  p.names = s.tickers;
  p.mu.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int t = 0; t < t_len; ++t) acc += returns[t][i];
    p.mu[i] = acc / t_len;
  }

  p.sigma.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  if (t_len >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double acc = 0.0;
        for (int t = 0; t < t_len; ++t)
          acc += (returns[t][i] - p.mu[i]) * (returns[t][j] - p.mu[j]);
        double cov = acc / (t_len - 1);
        p.sigma[idx(n, i, j)] = cov;
        p.sigma[idx(n, j, i)] = cov;
      }
  }
  validate_problem(p);
  return p;
}

QuboProblem synth_problem(int n, std::uint64_t seed, const SynthSpec& spec) {
  if (n < 1) throw UsageError("synth_problem needs n >= 1");
  if (!(spec.mu_lo <= spec.mu_hi) || !std::isfinite(spec.mu_lo) || !std::isfinite(spec.mu_hi))
    throw UsageError("synth_problem: invalid mu interval");
  if (!(spec.sigma_scale >= 0.0) || !std::isfinite(spec.sigma_scale))
    throw UsageError("synth_problem: invalid sigma_scale");
  if (spec.factors < 0) throw UsageError("synth_problem: invalid factor count");
  if (!(spec.vol_sigma >= 0.0) || !std::isfinite(spec.vol_sigma))
    throw UsageError("synth_problem: invalid vol_sigma");
  if (!std::isfinite(spec.q) || spec.q < 0.0) throw UsageError("synth_problem: invalid q");

  const int k = spec.factors > 0 ? spec.factors : std::max(1, n / 5);
  Rng rng(splitmix64(seed));

  QuboProblem p;
  p.n = n;
  p.q = spec.q;
  p.mu.resize(static_cast<std::size_t>(n));
  for (double& m : p.mu) m = spec.mu_lo + (spec.mu_hi - spec.mu_lo) * rng.uniform01();

  // Row i of the factor matrix: vol_i * [market beta, noise loadings,
  // idiosyncratic unit at column k + i]. The implied sigma = A A^T.
  const int cols = k + n;
  std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(cols), 0.0);
  for (int i = 0; i < n; ++i) {
    const double vol = std::exp(spec.vol_sigma * normal01(rng));
    double* row = &a[static_cast<std::size_t>(i) * cols];
    row[0] = vol * (0.2 + 0.8 * rng.uniform01());  // market exposure, positive
    for (int f = 1; f < k; ++f) row[f] = vol * 0.5 * normal01(rng);
    row[k + i] = vol;
  }

  p.sigma.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  double max_abs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double dot = 0.0;
      for (int f = 0; f < cols; ++f)
        dot += a[static_cast<std::size_t>(i) * cols + f] * a[static_cast<std::size_t>(j) * cols + f];
      p.sigma[idx(n, i, j)] = dot;
      p.sigma[idx(n, j, i)] = dot;
      max_abs = std::max(max_abs, std::fabs(dot));
    }
  if (max_abs > 0.0 && spec.sigma_scale > 0.0) {
    const double scale = spec.sigma_scale / max_abs;
    for (double& v : p.sigma) v *= scale;
  } else if (spec.sigma_scale == 0.0) {
    std::fill(p.sigma.begin(), p.sigma.end(), 0.0);
  }
  validate_problem(p);
  return p;
}

}  // namespace eaqga
