#include "eaqga/run_record.hpp"

#include <cstdio>

#include "json.hpp"

#include "eaqga/errors.hpp"

namespace eaqga {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

std::string run_record_to_json(const RunRecord& r) {
  std::string out = "{";
  out += "\"algorithm\":\"" + json_escape(r.algorithm) + "\",";
  out += "\"seed\":" + std::to_string(r.seed) + ",";
  out += "\"problem_id\":\"" + json_escape(r.problem_id) + "\",";
  out += "\"population\":" + std::to_string(r.population) + ",";
  out += "\"iterations\":" + std::to_string(r.iterations) + ",";
  out += "\"best_per_iteration\":[";
  for (std::size_t i = 0; i < r.best_per_iteration.size(); ++i) {
    if (i) out += ",";
    out += fmt17(r.best_per_iteration[i]);
  }
  out += "],";
  out += "\"final_x\":\"" + to_string(r.final_x) + "\",";
  out += "\"final_fitness\":" + fmt17(r.final_fitness);
  out += "}\n";
  return out;
}

RunRecord run_record_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("run record is not valid JSON: ") + e.what());
  }
  RunRecord r;
  try {
    r.algorithm = j.at("algorithm").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.problem_id = j.at("problem_id").get<std::string>();
    r.population = j.at("population").get<int>();
    r.iterations = j.at("iterations").get<int>();
    r.best_per_iteration = j.at("best_per_iteration").get<std::vector<double>>();
    r.final_x = bitstring_from_string(j.at("final_x").get<std::string>());
    r.final_fitness = j.at("final_fitness").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("run record has a malformed field: ") + e.what());
  }
  return r;
}

}  // namespace eaqga
