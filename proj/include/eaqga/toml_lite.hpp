#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace eaqga::toml {

/// Minimal TOML reader covering the configuration surface of this
/// project: [table] headers, [[array-of-tables]] headers, bare keys,
/// basic strings, integers, floats, booleans, single-line arrays and
/// '#' comments. Unsupported syntax raises DataError.
struct Value;
using Table = std::map<std::string, Value>;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::int64_t, double, bool, std::string, Array, Table> v;

  bool is_table() const { return std::holds_alternative<Table>(v); }
  bool is_array() const { return std::holds_alternative<Array>(v); }

  std::int64_t as_int(const std::string& what) const;
  double as_double(const std::string& what) const;  // accepts integers too
  bool as_bool(const std::string& what) const;
  const std::string& as_string(const std::string& what) const;
  const Array& as_array(const std::string& what) const;
  const Table& as_table(const std::string& what) const;
};

Table parse(const std::string& text);
Table parse_file(const std::string& path);

/// Looks up a dotted path ("run.seed"); nullptr when absent.
const Value* find(const Table& root, const std::string& dotted_path);

}  // namespace eaqga::toml
