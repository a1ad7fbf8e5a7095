#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eaqga/bitstring.hpp"

namespace eaqga {

/// Binary mean-variance portfolio instance in QUBO form.
///
/// The objective, maximized over x in {0,1}^n, is
///   f(x) = mu . x - q * x^T sigma x
struct QuboProblem {
  int n = 0;
  std::vector<double> mu;          ///< expected returns, length n
  std::vector<double> sigma;       ///< covariance, row-major n*n, symmetric
  double q = 0.5;                  ///< risk aversion coefficient, >= 0
  std::vector<std::string> names;  ///< optional asset labels (empty or length n)

  double sigma_at(int i, int j) const {
    return sigma[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  }
};

/// Throws UsageError when the type invariants do not hold (n >= 1, exact
/// symmetry, finite entries, q >= 0).
void validate_problem(const QuboProblem& p);

/// mu.x - q * x^T sigma x, in double precision. Pure.
double evaluate_fitness(const QuboProblem& p, const Bitstring& x);

/// Covariance scaled so the largest-magnitude entry becomes 1.
/// An all-zero covariance stays all-zero.
struct NormalizedCoupling {
  int n = 0;
  std::vector<double> sigma_n;  ///< row-major n*n, entries in [-1, 1]
  double at(int i, int j) const {
    return sigma_n[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
  }
};

NormalizedCoupling normalize_coupling(const QuboProblem& p);

/// Price history: prices[t][i] is the price of asset i at dates[t].
/// Invariants: dates strictly increasing, all prices positive, at least
/// two rows (T >= 1 return observations).
struct PriceSeries {
  std::vector<std::string> dates;
  std::vector<std::string> tickers;
  std::vector<std::vector<double>> prices;
};

/// Throws DataError when the series invariants do not hold.
void validate_prices(const PriceSeries& series);

/// Estimates mu and sigma from per-period relative returns
/// R[i][t] = P[i][t] / P[i][t-1] - 1: mu is the sample mean over T
/// periods, sigma the sample covariance with 1/(T-1) normalization
/// (all zeros when T == 1).
QuboProblem build_portfolio(const PriceSeries& series, double q);

/// Distribution parameters for synthetic instances. Defaults approximate
/// daily equity returns: small expected returns and a factor covariance
/// with one dominant positive (market) factor, heterogeneous per-asset
/// volatilities and an idiosyncratic component.
struct SynthSpec {
  double mu_lo = -0.001;
  double mu_hi = 0.003;
  double sigma_scale = 1e-3;  ///< target max_ij |sigma_ij|
  int factors = 0;            ///< factor count; 0 means max(1, n/5)
  double vol_sigma = 0.5;     ///< lognormal spread of per-asset volatility
  double q = 0.5;
};

/// Deterministic synthetic instance: mu i.i.d. uniform in [mu_lo, mu_hi],
/// sigma = A A^T rescaled to sigma_scale (symmetric PSD by construction).
/// Row i of A is vol_i * [market beta, noise factors, idiosyncratic unit],
/// so normalized couplings are mostly positive and heavy-tailed like
/// equity return covariances.
QuboProblem synth_problem(int n, std::uint64_t seed, const SynthSpec& spec = {});

}  // namespace eaqga
