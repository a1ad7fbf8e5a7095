#include "eaqga/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "eaqga/baselines.hpp"
#include "eaqga/eaqga.hpp"
#include "eaqga/errors.hpp"
#include "eaqga/harness.hpp"
#include "eaqga/oracle.hpp"
#include "eaqga/problem_io.hpp"
#include "eaqga/version.hpp"

namespace eaqga {

namespace {

std::string problem_id_from_path(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  out << text;
  if (!out) throw DataError("write failed: " + path);
}

void cmd_ingest(const std::string& prices_path, double q, const std::string& out_path) {
  const PriceSeries series = load_prices_csv(prices_path);
  const QuboProblem problem = build_portfolio(series, q);
  nlohmann::ordered_json meta;
  meta["source"] = std::filesystem::path(prices_path).filename().string();
  meta["observations"] = series.prices.size() - 1;
  save_problem_json(problem, out_path, meta.dump());
}

void cmd_synth(int n, std::uint64_t seed, const SynthSpec& spec, const std::string& out_path) {
  const QuboProblem problem = synth_problem(n, seed, spec);
  nlohmann::ordered_json meta;
  meta["generator"] = "synth";
  meta["seed"] = seed;
  meta["mu_lo"] = spec.mu_lo;
  meta["mu_hi"] = spec.mu_hi;
  meta["sigma_scale"] = spec.sigma_scale;
  meta["factors"] = spec.factors;
  meta["vol_sigma"] = spec.vol_sigma;
  save_problem_json(problem, out_path, meta.dump());
}

void cmd_solve(const std::string& algo, const std::string& problem_path, int pop, int iters,
               std::uint64_t seed, const std::string& out_path) {
  const QuboProblem problem = load_problem_json(problem_path);
  const std::string id = problem_id_from_path(problem_path);
  RunRecord rec;
  if (algo == "eaqga") {
    EaqgaConfig cfg;
    cfg.population = pop;
    cfg.max_iterations = iters;
    cfg.seed = seed;
    rec = run_eaqga(problem, cfg, id);
  } else if (algo == "ga") {
    GaConfig cfg;
    cfg.population = pop;
    cfg.max_iterations = iters;
    cfg.seed = seed;
    rec = run_ga(problem, cfg, id);
  } else if (algo == "aqga") {
    AqgaConfig cfg;
    cfg.population = pop;
    cfg.max_iterations = iters;
    cfg.seed = seed;
    rec = run_aqga(problem, cfg, id);
  } else {
    throw UsageError("unknown algorithm \"" + algo + "\" (expected eaqga, ga or aqga)");
  }
  write_text(out_path, run_record_to_json(rec));
}

void cmd_oracle(const std::string& problem_path, int limit, const std::string& out_path) {
  const QuboProblem problem = load_problem_json(problem_path);
  const OracleResult res = brute_force(problem, limit);
  nlohmann::ordered_json j;
  j["best_x"] = to_string(res.best_x);
  j["fitness"] = res.best_fitness;
  j["count"] = res.evaluated_count;
  const std::string text = j.dump() + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

void cmd_bench(const std::string& config_path, const std::string& out_dir) {
  ExperimentConfig cfg = parse_experiment_toml(config_path);
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (cfg.out_dir.empty())
    throw UsageError("no output directory: pass -o or set [output].dir in the config");
  const ExperimentResult result = run_experiment(cfg);
  write_experiment_outputs(cfg, result, cfg.out_dir);
  std::cout << "wrote " << result.records.size() << " runs to " << cfg.out_dir << "\n";
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"EAQGA portfolio QUBO toolkit: solvers, oracle and benchmark harness"};
  app.name("eaqga");
  app.require_subcommand(1);

  // ingest
  std::string ingest_prices, ingest_out;
  double ingest_q = 0.5;
  auto* ingest = app.add_subcommand("ingest", "Build a problem file from a price CSV");
  ingest->add_option("prices", ingest_prices, "price CSV (date,TICKER,... header)")->required();
  ingest->add_option("--q", ingest_q, "risk aversion coefficient");
  ingest->add_option("-o,--output", ingest_out, "problem JSON to write")->required();

  // synth
  int synth_n = 0;
  std::uint64_t synth_seed = 0;
  SynthSpec synth_spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic problem instance");
  synth->add_option("--n", synth_n, "number of binary variables")->required();
  synth->add_option("--seed", synth_seed, "generator seed")->required();
  synth->add_option("--q", synth_spec.q, "risk aversion coefficient");
  synth->add_option("--mu-lo", synth_spec.mu_lo, "lower bound of the mu interval");
  synth->add_option("--mu-hi", synth_spec.mu_hi, "upper bound of the mu interval");
  synth->add_option("--sigma-scale", synth_spec.sigma_scale, "target max |sigma_ij|");
  synth->add_option("--factors", synth_spec.factors, "factor count (0 = n/5)");
  synth->add_option("--vol-sigma", synth_spec.vol_sigma, "lognormal volatility spread");
  synth->add_option("-o,--output", synth_out, "problem JSON to write")->required();

  // solve
  std::string solve_algo, solve_problem, solve_out;
  int solve_pop = 10, solve_iters = 20;
  std::uint64_t solve_seed = 0;
  auto* solve = app.add_subcommand("solve", "Run one algorithm once and write the run record");
  solve->add_option("--algo", solve_algo, "eaqga, ga or aqga")
      ->required()
      ->check(CLI::IsMember({"eaqga", "ga", "aqga"}));
  solve->add_option("--problem", solve_problem, "problem JSON")->required();
  solve->add_option("--pop", solve_pop, "population size");
  solve->add_option("--iters", solve_iters, "iteration count");
  solve->add_option("--seed", solve_seed, "run seed");
  solve->add_option("-o,--output", solve_out, "run record JSON to write")->required();

  // oracle
  std::string oracle_problem, oracle_out;
  int oracle_limit = 26;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive optimum by Gray-code enumeration");
  oracle->add_option("--problem", oracle_problem, "problem JSON")->required();
  oracle->add_option("--limit", oracle_limit, "largest n the oracle will accept");
  oracle->add_option("-o,--output", oracle_out, "write the result here instead of stdout");

  // bench
  std::string bench_config, bench_out;
  auto* bench = app.add_subcommand("bench", "Run a benchmark matrix from a TOML config");
  bench->add_option("--config", bench_config, "experiment TOML")->required();
  bench->add_option("-o,--output", bench_out, "output directory (overrides [output].dir)");

  auto* version = app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, const_cast<char**>(argv));
    if (*ingest) cmd_ingest(ingest_prices, ingest_q, ingest_out);
    if (*synth) cmd_synth(synth_n, synth_seed, synth_spec, synth_out);
    if (*solve) cmd_solve(solve_algo, solve_problem, solve_pop, solve_iters, solve_seed, solve_out);
    if (*oracle) cmd_oracle(oracle_problem, oracle_limit, oracle_out);
    if (*bench) cmd_bench(bench_config, bench_out);
    if (*version) std::cout << "eaqga " << kVersion << "\n";
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace eaqga
