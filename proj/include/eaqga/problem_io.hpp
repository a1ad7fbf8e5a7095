#pragma once

#include <string>

#include "eaqga/problem.hpp"

namespace eaqga {

/// Reads a problem file: JSON object with keys "n", "q", "mu", "sigma"
/// and optional "names" / "meta". sigma must be symmetric to 1e-12; it is
/// symmetrized exactly on load. Throws DataError on malformed input.
QuboProblem load_problem_json(const std::string& path);
QuboProblem problem_from_json_text(const std::string& text);

/// Writes the problem JSON (optionally with a "meta" object serialized
/// from the given JSON text). Deterministic byte output.
void save_problem_json(const QuboProblem& p, const std::string& path,
                       const std::string& meta_json_text = {});
std::string problem_to_json_text(const QuboProblem& p, const std::string& meta_json_text = {});

/// Reads a price CSV: header "date,TICKER1,TICKER2,...", one row per
/// date in increasing order, adjusted close prices. Throws DataError on
/// ragged rows, nonpositive prices, or unordered dates.
PriceSeries load_prices_csv(const std::string& path);
PriceSeries prices_from_csv_text(const std::string& text);

}  // namespace eaqga
