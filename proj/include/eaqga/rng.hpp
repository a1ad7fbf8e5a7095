#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace eaqga {

/// Deterministic random stream. Wraps std::mt19937_64 and converts to
/// doubles explicitly, so identical seeds give identical sequences on
/// every platform and at every parallelism degree.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t uniform_int(std::uint64_t bound) { return gen_() % bound; }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

/// Stable per-run seed from (master seed, problem id, algorithm, repeat).
/// Adding repeats never reshuffles seeds of existing repeats.
std::uint64_t derive_run_seed(std::uint64_t master, std::string_view problem_id,
                              std::string_view algorithm, std::uint64_t repeat);

}  // namespace eaqga
