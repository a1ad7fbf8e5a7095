#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eaqga/errors.hpp"

namespace eaqga {

/// A candidate solution: one 0/1 entry per decision variable.
using Bitstring = std::vector<std::uint8_t>;

inline std::string to_string(const Bitstring& x) {
  std::string s;
  s.reserve(x.size());
  for (auto b : x) s.push_back(b ? '1' : '0');
  return s;
}

inline Bitstring bitstring_from_string(const std::string& s) {
  Bitstring x;
  x.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw DataError("bitstring contains non-binary character: " + s);
    x.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return x;
}

}  // namespace eaqga
