#include "eaqga/problem_io.hpp"

#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "eaqga/errors.hpp"

namespace eaqga {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

QuboProblem problem_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("problem file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("problem file must hold a JSON object");
  for (const char* key : {"n", "q", "mu", "sigma"})
    if (!j.contains(key)) throw DataError(std::string("problem file missing key \"") + key + "\"");

  QuboProblem p;
  try {
    p.n = j.at("n").get<int>();
    p.q = j.at("q").get<double>();
    p.mu = j.at("mu").get<std::vector<double>>();
    const auto& rows = j.at("sigma");
    if (!rows.is_array() || static_cast<int>(rows.size()) != p.n)
      throw DataError("sigma must be an n x n array");
    p.sigma.reserve(static_cast<std::size_t>(p.n) * static_cast<std::size_t>(p.n));
    for (const auto& row : rows) {
      auto r = row.get<std::vector<double>>();
      if (static_cast<int>(r.size()) != p.n) throw DataError("sigma must be an n x n array");
      p.sigma.insert(p.sigma.end(), r.begin(), r.end());
    }
    if (j.contains("names") && !j.at("names").is_null())
      p.names = j.at("names").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("problem file has a malformed field: ") + e.what());
  }

  if (p.n < 1) throw DataError("problem file needs n >= 1");
  if (static_cast<int>(p.mu.size()) != p.n) throw DataError("mu length does not match n");
  if (!p.names.empty() && static_cast<int>(p.names.size()) != p.n)
    throw DataError("names length does not match n");

  // Accept asymmetry up to 1e-12, then symmetrize exactly.
  for (int i = 0; i < p.n; ++i)
    for (int j2 = i + 1; j2 < p.n; ++j2) {
      double a = p.sigma[static_cast<std::size_t>(i) * p.n + j2];
      double b = p.sigma[static_cast<std::size_t>(j2) * p.n + i];
      if (std::fabs(a - b) > 1e-12)
        throw DataError("sigma asymmetric beyond 1e-12 at (" + std::to_string(i) + "," +
                        std::to_string(j2) + ")");
      double v = 0.5 * (a + b);
      p.sigma[static_cast<std::size_t>(i) * p.n + j2] = v;
      p.sigma[static_cast<std::size_t>(j2) * p.n + i] = v;
    }

  try {
    validate_problem(p);
  } catch (const UsageError& e) {
    throw DataError(std::string("problem file invalid: ") + e.what());
  }
  return p;
}

QuboProblem load_problem_json(const std::string& path) {
  return problem_from_json_text(read_file(path));
}

std::string problem_to_json_text(const QuboProblem& p, const std::string& meta_json_text) {
  validate_problem(p);
  ordered_json j;
  j["n"] = p.n;
  j["q"] = p.q;
  j["mu"] = p.mu;
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < p.n; ++i) {
    ordered_json row = ordered_json::array();
    for (int k = 0; k < p.n; ++k) row.push_back(p.sigma_at(i, k));
    rows.push_back(std::move(row));
  }
  j["sigma"] = std::move(rows);
  if (!p.names.empty()) j["names"] = p.names;
  if (!meta_json_text.empty()) j["meta"] = ordered_json::parse(meta_json_text);
  return j.dump() + "\n";
}

void save_problem_json(const QuboProblem& p, const std::string& path,
                       const std::string& meta_json_text) {
  write_file(path, problem_to_json_text(p, meta_json_text));
}

PriceSeries prices_from_csv_text(const std::string& text) {
  PriceSeries s;
  std::istringstream in(text);
  std::string line;
  bool header_done = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    const std::string sline(view);
    for (std::size_t i = 0; i <= sline.size(); ++i) {
      if (i == sline.size() || sline[i] == ',') {
        cells.push_back(trim(std::string_view(sline).substr(start, i - start)));
        start = i + 1;
      }
    }
    if (!header_done) {
      if (cells.empty()) throw DataError("price CSV has an empty header");
      std::string first(cells[0]);
      if (!first.empty() && static_cast<unsigned char>(first[0]) == 0xEF && first.size() >= 3)
        first = first.substr(3);  // UTF-8 BOM
      std::string lowered;
      for (char c : first) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      if (lowered != "date")
        throw DataError("price CSV must start with a `date` column, got \"" + first + "\"");
      if (cells.size() < 2) throw DataError("price CSV has no ticker columns");
      for (std::size_t i = 1; i < cells.size(); ++i) s.tickers.emplace_back(cells[i]);
      header_done = true;
      continue;
    }
    if (cells.size() != s.tickers.size() + 1)
      throw DataError("price CSV row " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(s.tickers.size() + 1));
    s.dates.emplace_back(cells[0]);
    std::vector<double> row;
    row.reserve(s.tickers.size());
    for (std::size_t i = 1; i < cells.size(); ++i) {
      double v = 0.0;
      auto cell = cells[i];
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw DataError("price CSV row " + std::to_string(line_no) + ": cannot parse \"" +
                        std::string(cell) + "\" as a number");
      row.push_back(v);
    }
    s.prices.push_back(std::move(row));
  }
  if (!header_done) throw DataError("price CSV is empty");
  validate_prices(s);
  return s;
}

PriceSeries load_prices_csv(const std::string& path) {
  return prices_from_csv_text(read_file(path));
}

}  // namespace eaqga
