#include "eaqga/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "eaqga/errors.hpp"
#include "eaqga/oracle.hpp"
#include "eaqga/problem_io.hpp"
#include "eaqga/toml_lite.hpp"
#include "eaqga/version.hpp"

namespace eaqga {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kKnownAlgorithms = {"eaqga", "ga", "aqga"};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string sanitize_id(const std::string& id) {
  std::string out;
  for (char c : id)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'
                      ? c
                      : '_');
  return out.empty() ? std::string("problem") : out;
}

std::string upper(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void check_known_keys(const toml::Table& t, const std::set<std::string>& allowed,
                      const std::string& section) {
  for (const auto& [key, value] : t)
    if (!allowed.count(key))
      throw DataError("config: unknown key \"" + key + "\" in [" + section + "]");
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population convention
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  double acc = 0.0;
  for (double v : values) acc += v;
  out.mean = acc / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(sq / static_cast<double>(values.size()));
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_toml(const std::string& path) {
  const toml::Table root = toml::parse_file(path);
  check_known_keys(root, {"run", "problems", "algorithms", "output"}, "<root>");
  const fs::path base_dir = fs::path(path).parent_path();

  ExperimentConfig cfg;
  cfg.algorithms = kKnownAlgorithms;

  if (const auto* run = toml::find(root, "run")) {
    const auto& t = run->as_table("run");
    check_known_keys(
        t, {"repeats", "seed", "parallelism", "iterations", "populations", "algorithms"}, "run");
    if (auto it = t.find("repeats"); it != t.end())
      cfg.repeats = static_cast<int>(it->second.as_int("run.repeats"));
    if (auto it = t.find("seed"); it != t.end())
      cfg.master_seed = static_cast<std::uint64_t>(it->second.as_int("run.seed"));
    if (auto it = t.find("parallelism"); it != t.end())
      cfg.parallelism = static_cast<int>(it->second.as_int("run.parallelism"));
    if (auto it = t.find("iterations"); it != t.end())
      cfg.iterations = static_cast<int>(it->second.as_int("run.iterations"));
    if (auto it = t.find("populations"); it != t.end()) {
      cfg.populations.clear();
      for (const auto& v : it->second.as_array("run.populations"))
        cfg.populations.push_back(static_cast<int>(v.as_int("run.populations[]")));
    }
    if (auto it = t.find("algorithms"); it != t.end()) {
      cfg.algorithms.clear();
      for (const auto& v : it->second.as_array("run.algorithms"))
        cfg.algorithms.push_back(v.as_string("run.algorithms[]"));
    }
  }

  if (const auto* problems = toml::find(root, "problems")) {
    const auto& t = problems->as_table("problems");
    check_known_keys(t, {"files", "synth"}, "problems");
    if (auto it = t.find("files"); it != t.end()) {
      for (const auto& v : it->second.as_array("problems.files")) {
        ProblemSource src;
        fs::path file = v.as_string("problems.files[]");
        if (file.is_relative()) file = base_dir / file;
        src.file = file.string();
        src.id = sanitize_id(file.stem().string());
        cfg.problems.push_back(std::move(src));
      }
    }
    if (auto it = t.find("synth"); it != t.end()) {
      for (const auto& v : it->second.as_array("problems.synth")) {
        const auto& st = v.as_table("[[problems.synth]]");
        check_known_keys(
            st, {"n", "seed", "id", "q", "mu_lo", "mu_hi", "sigma_scale", "factors", "vol_sigma"},
            "problems.synth");
        ProblemSource src;
        src.is_synth = true;
        if (!st.count("n") || !st.count("seed"))
          throw DataError("config: [[problems.synth]] needs both n and seed");
        src.synth_n = static_cast<int>(st.at("n").as_int("synth.n"));
        src.synth_seed = static_cast<std::uint64_t>(st.at("seed").as_int("synth.seed"));
        if (auto f = st.find("q"); f != st.end()) src.synth_spec.q = f->second.as_double("synth.q");
        if (auto f = st.find("mu_lo"); f != st.end())
          src.synth_spec.mu_lo = f->second.as_double("synth.mu_lo");
        if (auto f = st.find("mu_hi"); f != st.end())
          src.synth_spec.mu_hi = f->second.as_double("synth.mu_hi");
        if (auto f = st.find("sigma_scale"); f != st.end())
          src.synth_spec.sigma_scale = f->second.as_double("synth.sigma_scale");
        if (auto f = st.find("factors"); f != st.end())
          src.synth_spec.factors = static_cast<int>(f->second.as_int("synth.factors"));
        if (auto f = st.find("vol_sigma"); f != st.end())
          src.synth_spec.vol_sigma = f->second.as_double("synth.vol_sigma");
        src.id = st.count("id") ? sanitize_id(st.at("id").as_string("synth.id"))
                                : "synth-n" + std::to_string(src.synth_n) + "-s" +
                                      std::to_string(src.synth_seed);
        cfg.problems.push_back(std::move(src));
      }
    }
  }

  if (const auto* algos = toml::find(root, "algorithms")) {
    const auto& t = algos->as_table("algorithms");
    check_known_keys(t, {"eaqga", "ga", "aqga"}, "algorithms");
    if (auto it = t.find("eaqga"); it != t.end()) {
      const auto& a = it->second.as_table("algorithms.eaqga");
      check_known_keys(a, {"p_a", "p_s"}, "algorithms.eaqga");
      if (auto f = a.find("p_a"); f != a.end()) cfg.eaqga_base.p_a = f->second.as_double("eaqga.p_a");
      if (auto f = a.find("p_s"); f != a.end()) cfg.eaqga_base.p_s = f->second.as_double("eaqga.p_s");
    }
    if (auto it = t.find("ga"); it != t.end()) {
      const auto& a = it->second.as_table("algorithms.ga");
      check_known_keys(a, {"crossover_prob", "mutation_rate", "elite_count", "per_bit_mutation"},
                       "algorithms.ga");
      if (auto f = a.find("crossover_prob"); f != a.end())
        cfg.ga_base.crossover_prob = f->second.as_double("ga.crossover_prob");
      if (auto f = a.find("mutation_rate"); f != a.end())
        cfg.ga_base.mutation_rate = f->second.as_double("ga.mutation_rate");
      if (auto f = a.find("elite_count"); f != a.end())
        cfg.ga_base.elite_count = static_cast<int>(f->second.as_int("ga.elite_count"));
      if (auto f = a.find("per_bit_mutation"); f != a.end())
        cfg.ga_base.per_bit_mutation = f->second.as_bool("ga.per_bit_mutation");
    }
    if (auto it = t.find("aqga"); it != t.end()) {
      const auto& a = it->second.as_table("algorithms.aqga");
      check_known_keys(a,
                       {"theta_max", "theta_min", "mutation_ratio", "disaster_stale_iters",
                        "disaster_fraction"},
                       "algorithms.aqga");
      if (auto f = a.find("theta_max"); f != a.end())
        cfg.aqga_base.theta_max = f->second.as_double("aqga.theta_max");
      if (auto f = a.find("theta_min"); f != a.end())
        cfg.aqga_base.theta_min = f->second.as_double("aqga.theta_min");
      if (auto f = a.find("mutation_ratio"); f != a.end())
        cfg.aqga_base.mutation_ratio = f->second.as_double("aqga.mutation_ratio");
      if (auto f = a.find("disaster_stale_iters"); f != a.end())
        cfg.aqga_base.disaster_stale_iters =
            static_cast<int>(f->second.as_int("aqga.disaster_stale_iters"));
      if (auto f = a.find("disaster_fraction"); f != a.end())
        cfg.aqga_base.disaster_fraction = f->second.as_double("aqga.disaster_fraction");
    }
  }

  if (const auto* output = toml::find(root, "output")) {
    const auto& t = output->as_table("output");
    check_known_keys(t, {"dir", "table_scale", "oracle", "oracle_limit"}, "output");
    if (auto it = t.find("dir"); it != t.end()) {
      fs::path dir = it->second.as_string("output.dir");
      if (dir.is_relative()) dir = base_dir / dir;
      cfg.out_dir = dir.string();
    }
    if (auto it = t.find("table_scale"); it != t.end())
      cfg.table_scale = it->second.as_double("output.table_scale");
    if (auto it = t.find("oracle"); it != t.end()) cfg.run_oracle = it->second.as_bool("output.oracle");
    if (auto it = t.find("oracle_limit"); it != t.end())
      cfg.oracle_limit = static_cast<int>(it->second.as_int("output.oracle_limit"));
  }

  return cfg;
}

namespace {

struct LoadedProblem {
  ProblemSource source;
  QuboProblem problem;
  std::optional<double> optimum;
};

std::vector<LoadedProblem> load_problems(const ExperimentConfig& cfg) {
  if (cfg.problems.empty()) throw DataError("experiment has no problems");
  std::vector<LoadedProblem> out;
  std::set<std::string> seen;
  for (const auto& src : cfg.problems) {
    if (!seen.insert(src.id).second) throw DataError("duplicate problem id: " + src.id);
    LoadedProblem lp;
    lp.source = src;
    lp.problem = src.is_synth ? synth_problem(src.synth_n, src.synth_seed, src.synth_spec)
                              : load_problem_json(src.file);
    out.push_back(std::move(lp));
  }
  return out;
}

void validate_experiment(const ExperimentConfig& cfg) {
  if (cfg.repeats < 1) throw UsageError("experiment needs repeats >= 1");
  if (cfg.iterations < 1) throw UsageError("experiment needs iterations >= 1");
  if (cfg.populations.empty()) throw UsageError("experiment needs at least one population size");
  if (cfg.algorithms.empty()) throw UsageError("experiment needs at least one algorithm");
  std::set<std::string> seen;
  for (const auto& a : cfg.algorithms) {
    if (std::find(kKnownAlgorithms.begin(), kKnownAlgorithms.end(), a) == kKnownAlgorithms.end())
      throw UsageError("unknown algorithm \"" + a + "\" (expected eaqga, ga or aqga)");
    if (!seen.insert(a).second) throw UsageError("algorithm \"" + a + "\" listed twice");
  }
}

int resolve_parallelism(const ExperimentConfig& cfg) {
  if (cfg.parallelism > 0) return cfg.parallelism;
  if (const char* env = std::getenv("EAQGA_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

RunRecord execute_run(const std::string& algo, const QuboProblem& problem,
                      const std::string& problem_id, int population, int iterations,
                      std::uint64_t seed, const ExperimentConfig& cfg) {
  if (algo == "eaqga") {
    EaqgaConfig c = cfg.eaqga_base;
    c.population = population;
    c.max_iterations = iterations;
    c.seed = seed;
    return run_eaqga(problem, c, problem_id);
  }
  if (algo == "ga") {
    GaConfig c = cfg.ga_base;
    c.population = population;
    c.max_iterations = iterations;
    c.seed = seed;
    return run_ga(problem, c, problem_id);
  }
  AqgaConfig c = cfg.aqga_base;
  c.population = population;
  c.max_iterations = iterations;
  c.seed = seed;
  return run_aqga(problem, c, problem_id);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_experiment(cfg);
  auto problems = load_problems(cfg);
  for (auto& lp : problems)
    if (cfg.run_oracle && lp.problem.n <= cfg.oracle_limit)
      lp.optimum = brute_force(lp.problem, cfg.oracle_limit).best_fitness;

  struct Task {
    std::size_t problem_idx;
    int population;
    std::size_t algo_idx;
    int repeat;
  };
  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < problems.size(); ++pi)
    for (int pop : cfg.populations)
      for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai)
        for (int r = 0; r < cfg.repeats; ++r) tasks.push_back({pi, pop, ai, r});

  std::vector<RunRecord> records(tasks.size());
  std::vector<std::string> failures(tasks.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      const auto& lp = problems[task.problem_idx];
      const std::string& algo = cfg.algorithms[task.algo_idx];
      try {
        const std::uint64_t seed = derive_run_seed(cfg.master_seed, lp.source.id, algo,
                                                   static_cast<std::uint64_t>(task.repeat));
        records[i] = execute_run(algo, lp.problem, lp.source.id, task.population, cfg.iterations,
                                 seed, cfg);
      } catch (const std::exception& e) {
        failures[i] = lp.source.id + "/" + algo + "/pop" + std::to_string(task.population) +
                      "/rep" + std::to_string(task.repeat) + ": " + e.what();
      }
    }
  };

  const int degree = std::max(1, std::min<int>(resolve_parallelism(cfg),
                                               static_cast<int>(tasks.size())));
  if (degree == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  for (const auto& f : failures)
    if (!f.empty()) throw DataError("experiment cell failed: " + f);

  ExperimentResult result;
  result.records = std::move(records);

  // One summary row per (problem, population, algorithm), in task order.
  std::size_t offset = 0;
  for (std::size_t pi = 0; pi < problems.size(); ++pi)
    for (int pop : cfg.populations)
      for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
        std::vector<double> finals;
        finals.reserve(static_cast<std::size_t>(cfg.repeats));
        for (int r = 0; r < cfg.repeats; ++r)
          finals.push_back(result.records[offset + static_cast<std::size_t>(r)].final_fitness);
        offset += static_cast<std::size_t>(cfg.repeats);
        const MeanStd ms = mean_std(finals);
        SummaryRow row;
        row.problem_id = problems[pi].source.id;
        row.optimum = problems[pi].optimum;
        row.algo = upper(cfg.algorithms[ai]);
        row.population = pop;
        row.iterations = cfg.iterations;
        row.avg = ms.mean;
        row.stddev = ms.stddev;
        result.rows.push_back(std::move(row));
      }
  return result;
}

std::string emit_table(const std::vector<SummaryRow>& rows, double scale) {
  if (rows.empty()) throw UsageError("emit_table: no rows");
  std::string out = "problem_id,optimum,algo,population,avg,std\n";
  for (const auto& r : rows) {
    out += r.problem_id + ",";
    out += r.optimum ? fmt("%.4f", *r.optimum * scale) : "";
    out += "," + r.algo + "," + std::to_string(r.population) + ",";
    out += fmt("%.4f", r.avg * scale) + "," + fmt("%.4f", r.stddev * scale) + "\n";
  }
  return out;
}

std::string emit_convergence(const std::vector<RunRecord>& records) {
  if (records.empty()) throw UsageError("emit_convergence: no records");
  const int iterations = records.front().iterations;
  for (const auto& r : records)
    if (r.iterations != iterations ||
        r.best_per_iteration.size() != static_cast<std::size_t>(iterations))
      throw UsageError("emit_convergence: records disagree on the iteration count");

  std::vector<std::string> algos;
  for (const auto& r : records)
    if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end())
      algos.push_back(r.algorithm);

  std::string out = "iteration,algo,mean_best,std_best\n";
  for (int t = 0; t < iterations; ++t)
    for (const auto& algo : algos) {
      std::vector<double> values;
      for (const auto& r : records)
        if (r.algorithm == algo) values.push_back(r.best_per_iteration[static_cast<std::size_t>(t)]);
      const MeanStd ms = mean_std(values);
      out += std::to_string(t + 1) + "," + algo + "," + fmt("%.17g", ms.mean) + "," +
             fmt("%.17g", ms.stddev) + "\n";
    }
  return out;
}

void write_experiment_outputs(const ExperimentConfig& cfg, const ExperimentResult& result,
                              const std::string& out_dir) {
  if (out_dir.empty()) throw UsageError("no output directory configured");
  const fs::path root(out_dir);
  fs::create_directories(root / "problems");
  fs::create_directories(root / "runs");
  fs::create_directories(root / "convergence");

  for (const auto& src : cfg.problems) {
    const fs::path dst = root / "problems" / (src.id + ".json");
    if (src.is_synth) {
      nlohmann::ordered_json meta;
      meta["generator"] = "synth";
      meta["seed"] = src.synth_seed;
      meta["mu_lo"] = src.synth_spec.mu_lo;
      meta["mu_hi"] = src.synth_spec.mu_hi;
      meta["sigma_scale"] = src.synth_spec.sigma_scale;
      meta["factors"] = src.synth_spec.factors;
      meta["vol_sigma"] = src.synth_spec.vol_sigma;
      save_problem_json(synth_problem(src.synth_n, src.synth_seed, src.synth_spec), dst.string(),
                        meta.dump());
    } else {
      std::error_code ec;
      fs::copy_file(src.file, dst, fs::copy_options::overwrite_existing, ec);
      if (ec) throw DataError("cannot copy problem file " + src.file + ": " + ec.message());
    }
  }

  std::string timings = "problem_id,algo,population,repeat,seed,wall_time\n";
  std::size_t idx = 0;
  for (const auto& src : cfg.problems) {
    fs::create_directories(root / "runs" / src.id);
    for (int pop : cfg.populations)
      for (const auto& algo : cfg.algorithms)
        for (int r = 0; r < cfg.repeats; ++r, ++idx) {
          const RunRecord& rec = result.records[idx];
          const fs::path file = root / "runs" / src.id /
                                (algo + "_pop" + std::to_string(pop) + "_rep" + std::to_string(r) +
                                 ".json");
          write_text_file(file, run_record_to_json(rec));
          timings += src.id + "," + rec.algorithm + "," + std::to_string(pop) + "," +
                     std::to_string(r) + "," + std::to_string(rec.seed) + "," +
                     fmt("%.6f", rec.wall_time) + "\n";
        }
  }

  write_text_file(root / "table.csv", emit_table(result.rows, cfg.table_scale));

  idx = 0;
  for (const auto& src : cfg.problems)
    for (int pop : cfg.populations) {
      const std::size_t cell = cfg.algorithms.size() * static_cast<std::size_t>(cfg.repeats);
      std::vector<RunRecord> slice(result.records.begin() + static_cast<std::ptrdiff_t>(idx),
                                   result.records.begin() + static_cast<std::ptrdiff_t>(idx + cell));
      idx += cell;
      write_text_file(root / "convergence" / (src.id + "_pop" + std::to_string(pop) + ".csv"),
                      emit_convergence(slice));
    }

  nlohmann::ordered_json summary;
  summary["meta"] = {{"version", kVersion},
                     {"master_seed", cfg.master_seed},
                     {"repeats", cfg.repeats},
                     {"iterations", cfg.iterations},
                     {"populations", cfg.populations},
                     {"algorithms", cfg.algorithms},
                     {"table_scale", cfg.table_scale},
                     {"std_convention", "population"},
                     {"convergence_statistic", "mean of best-so-far fitness per iteration"},
                     {"seed_derivation", "splitmix64 chain over (master_seed, problem_id, algorithm, repeat)"},
                     {"timing", "wall times live in timings.csv and are excluded from deterministic outputs"}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : result.rows) {
    nlohmann::ordered_json row;
    row["problem_id"] = r.problem_id;
    if (r.optimum)
      row["optimum"] = *r.optimum;
    else
      row["optimum"] = nullptr;
    row["algo"] = r.algo;
    row["population"] = r.population;
    row["iterations"] = r.iterations;
    row["avg"] = r.avg;
    row["std"] = r.stddev;
    rows.push_back(std::move(row));
  }
  summary["rows"] = std::move(rows);
  write_text_file(root / "summary.json", summary.dump(2) + "\n");

  write_text_file(root / "timings.csv", timings);
}

}  // namespace eaqga
