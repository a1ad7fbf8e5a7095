#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eaqga/baselines.hpp"
#include "eaqga/eaqga.hpp"
#include "eaqga/problem.hpp"
#include "eaqga/run_record.hpp"

namespace eaqga {

/// One problem to benchmark: either a JSON file or a synthetic spec.
struct ProblemSource {
  std::string id;
  std::string file;  ///< empty for synthetic sources
  bool is_synth = false;
  int synth_n = 0;
  std::uint64_t synth_seed = 0;
  SynthSpec synth_spec;
};

struct ExperimentConfig {
  std::vector<ProblemSource> problems;
  std::vector<std::string> algorithms = {"eaqga", "ga", "aqga"};  ///< canonical order
  std::vector<int> populations = {10};
  int iterations = 20;
  int repeats = 100;
  std::uint64_t master_seed = 0;
  int parallelism = 0;  ///< 0: EAQGA_THREADS env var, else hardware

  // Hyperparameters shared by every cell; population/iterations/seed are
  // filled in per cell.
  EaqgaConfig eaqga_base;
  GaConfig ga_base;
  AqgaConfig aqga_base;

  bool run_oracle = true;
  int oracle_limit = 26;
  double table_scale = 100.0;
  std::string out_dir;
};

/// Parses the TOML experiment file ([run], [problems], [algorithms.*],
/// [output]); relative problem paths resolve against the config file.
ExperimentConfig parse_experiment_toml(const std::string& path);

struct SummaryRow {
  std::string problem_id;
  std::optional<double> optimum;
  std::string algo;  ///< "EAQGA", "GA" or "AQGA"
  int population = 0;
  int iterations = 0;
  double avg = 0.0;
  double stddev = 0.0;  ///< population convention (divide by repeat count)
};

struct ExperimentResult {
  std::vector<RunRecord> records;  ///< deterministic order: problem, population, algorithm, repeat
  std::vector<SummaryRow> rows;
};

/// Runs the full (problem x population x algorithm x repeat) matrix on a
/// bounded worker pool. Per-run seeds come from derive_run_seed, so the
/// result is independent of the parallelism degree. Any failing cell
/// aborts the experiment with a DataError naming the cell.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// CSV "problem_id,optimum,algo,population,avg,std" with values scaled
/// and printed with four decimals (scale = 100 matches the conventional
/// "x100 for readability" presentation).
std::string emit_table(const std::vector<SummaryRow>& rows, double scale);

/// CSV "iteration,algo,mean_best,std_best" for records sharing one
/// iteration count; per-iteration mean/std of best-so-far fitness across
/// repeats, grouped by algorithm.
std::string emit_convergence(const std::vector<RunRecord>& records);

/// Writes problems/, runs/, table.csv, convergence/, summary.json and
/// the (non-deterministic) timings.csv sidecar under out_dir.
void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentResult& result,
                              const std::string& out_dir);

}  // namespace eaqga
