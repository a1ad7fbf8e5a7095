#include "eaqga/rng.hpp"

namespace eaqga {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t derive_run_seed(std::uint64_t master, std::string_view problem_id,
                              std::string_view algorithm, std::uint64_t repeat) {
  std::uint64_t h = splitmix64(master ^ fnv1a64(problem_id));
  h = splitmix64(h ^ fnv1a64(algorithm));
  return splitmix64(h ^ repeat);
}

}  // namespace eaqga
