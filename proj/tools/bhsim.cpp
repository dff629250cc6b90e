// Batch front-end for the beam-hopping simulator.
#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bhsim/engine.hpp"
#include "bhsim/report.hpp"
#include "bhsim/scenario.hpp"
#include "bhsim/self_check.hpp"

namespace fs = std::filesystem;
using bh::engine::Algorithm;
using bh::engine::RunResult;
using bh::engine::SimConfig;

namespace {

constexpr const char* kOutDirEnv = "BHSIM_OUT_DIR";

struct CommonOptions {
  std::string config_path;
  std::string algorithm;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> slots;
  std::string out_dir;
  bool per_slot_log = false;
  bool force = false;
  unsigned workers = 0;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_algorithm, bool with_lambda) {
  cmd->add_option("--config", o.config_path, "Scenario file (INI); defaults are built in")
      ->check(CLI::ExistingFile);
  if (with_algorithm)
    cmd->add_option("--algorithm", o.algorithm, "One of: " + bh::engine::algorithm_names());
  if (with_lambda) cmd->add_option("--lambda", o.lambda, "Packet arrival rate per position (packets/s)");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--slots", o.slots, "Number of BH slots to simulate (overrides t_max)");
  cmd->add_option("--out-dir", o.out_dir,
                  std::string("Output directory (default: $") + kOutDirEnv + " or ./bhsim_out)");
  cmd->add_flag("--per-slot-log", o.per_slot_log, "Also write slots.csv");
  cmd->add_flag("--force", o.force, "Overwrite existing output files");
  cmd->add_option("--workers", o.workers, "Worker threads (0 = hardware concurrency)");
}

Algorithm algorithm_or_throw(const std::string& name) {
  const auto a = bh::engine::parse_algorithm(name);
  if (!a)
    throw UsageError("unknown algorithm '" + name + "'; valid names: " +
                     bh::engine::algorithm_names());
  return *a;
}

SimConfig base_config(const CommonOptions& o) {
  SimConfig cfg = o.config_path.empty() ? SimConfig{} : bh::scenario::load(o.config_path);
  if (!o.algorithm.empty()) cfg.algorithm = algorithm_or_throw(o.algorithm);
  if (o.lambda) cfg.arrivals.lambda = *o.lambda;
  if (o.seed) cfg.seed = *o.seed;
  if (o.slots) {
    if (*o.slots < 1) throw UsageError("--slots must be >= 1");
    cfg.t_max = static_cast<double>(*o.slots) * cfg.t_b;
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw bh::scenario::ConfigError(std::string("invalid scenario: ") + e.what());
  }
  return cfg;
}

fs::path resolve_out_dir(const CommonOptions& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "bhsim_out";
}

// Refuses to clobber anything unless --force was given.
void prepare_outputs(const fs::path& dir, const std::vector<fs::path>& files, bool force) {
  if (!force)
    for (const auto& f : files)
      if (fs::exists(dir / f))
        throw UsageError("refusing to overwrite " + (dir / f).string() + " (use --force)");
  fs::create_directories(dir);
  for (const auto& f : files) fs::create_directories((dir / f).parent_path());
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  writer(out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

int cmd_run(const CommonOptions& o) {
  const SimConfig cfg = base_config(o);
  const fs::path dir = resolve_out_dir(o);
  std::vector<fs::path> files = {"summary.csv", "comparison.csv"};
  if (o.per_slot_log) files.emplace_back("slots.csv");
  prepare_outputs(dir, files, o.force);

  const RunResult r = bh::engine::run(cfg, {.keep_slot_log = o.per_slot_log});
  write_file(dir / "summary.csv", [&](std::ostream& out) { bh::report::write_summary_csv(out, r); });
  write_file(dir / "comparison.csv", [&](std::ostream& out) {
    bh::report::write_comparison_csv(out, std::span(&r, 1));
  });
  if (o.per_slot_log)
    write_file(dir / "slots.csv", [&](std::ostream& out) { bh::report::write_slots_csv(out, r); });
  bh::report::print_comparison_table(std::cout, std::span(&r, 1));
  return 0;
}

std::vector<Algorithm> selected_algorithms(const std::vector<std::string>& names) {
  std::vector<Algorithm> out;
  if (names.empty()) {
    const auto all = bh::engine::all_algorithms();
    out.assign(all.begin(), all.end());
  }
  for (const auto& n : names) out.push_back(algorithm_or_throw(n));
  return out;
}

int cmd_compare(const CommonOptions& o, const std::vector<std::string>& algorithm_names) {
  const SimConfig base = base_config(o);
  const auto algorithms = selected_algorithms(algorithm_names);
  const fs::path dir = resolve_out_dir(o);
  std::vector<fs::path> files = {"comparison.csv"};
  for (Algorithm a : algorithms) {
    files.push_back(fs::path(std::string(bh::engine::to_string(a))) / "summary.csv");
    if (o.per_slot_log) files.push_back(fs::path(std::string(bh::engine::to_string(a))) / "slots.csv");
  }
  prepare_outputs(dir, files, o.force);

  std::vector<SimConfig> configs;
  for (Algorithm a : algorithms) {
    configs.push_back(base);
    configs.back().algorithm = a;
  }
  const auto results = bh::engine::compare(configs, {.keep_slot_log = o.per_slot_log}, o.workers);
  write_file(dir / "comparison.csv",
             [&](std::ostream& out) { bh::report::write_comparison_csv(out, results); });
  for (const auto& r : results) {
    const fs::path sub = dir / std::string(bh::engine::to_string(r.config.algorithm));
    write_file(sub / "summary.csv", [&](std::ostream& out) { bh::report::write_summary_csv(out, r); });
    if (o.per_slot_log)
      write_file(sub / "slots.csv", [&](std::ostream& out) { bh::report::write_slots_csv(out, r); });
  }
  bh::report::print_comparison_table(std::cout, results);
  return 0;
}

int cmd_sweep(const CommonOptions& o, const std::vector<std::string>& algorithm_names,
              const std::vector<double>& lambdas, int seeds) {
  const SimConfig base = base_config(o);
  const auto algorithms = selected_algorithms(algorithm_names);
  if (seeds < 1) throw UsageError("--seeds must be >= 1");
  const fs::path dir = resolve_out_dir(o);
  prepare_outputs(dir, {"comparison.csv"}, o.force);

  std::vector<SimConfig> configs;
  for (double lambda : lambdas)
    for (int s = 0; s < seeds; ++s)
      for (Algorithm a : algorithms) {
        SimConfig c = base;
        c.arrivals.lambda = lambda;
        c.seed = base.seed + static_cast<std::uint64_t>(s);
        c.algorithm = a;
        configs.push_back(c);
      }
  const auto results = bh::engine::run_all(configs, {}, o.workers);
  write_file(dir / "comparison.csv",
             [&](std::ostream& out) { bh::report::write_comparison_csv(out, results); });
  bh::report::print_comparison_table(std::cout, results);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beam-hopping LEO downlink simulator"};
  app.require_subcommand(1);

  CommonOptions run_opts, compare_opts, sweep_opts;
  std::vector<std::string> compare_algorithms, sweep_algorithms;
  std::vector<double> lambdas = {1000, 2000, 3000, 4000, 5000};
  int seeds = 1;

  auto* run = app.add_subcommand("run", "Run one simulation");
  add_common(run, run_opts, true, true);

  auto* compare = app.add_subcommand("compare", "Run several algorithms on one shared scenario");
  add_common(compare, compare_opts, false, true);
  compare->add_option("--algorithms", compare_algorithms, "Subset of algorithms (default: all)");

  auto* sweep = app.add_subcommand("sweep", "Arrival-rate grid across algorithms and seeds");
  add_common(sweep, sweep_opts, false, false);
  sweep->add_option("--algorithms", sweep_algorithms, "Subset of algorithms (default: all)");
  sweep->add_option("--lambdas", lambdas, "Arrival rates to sweep")->capture_default_str();
  sweep->add_option("--seeds", seeds, "Consecutive seeds per point, starting at --seed")
      ->capture_default_str();

  app.add_subcommand("validate", "Run the built-in property and oracle checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (compare->parsed()) return cmd_compare(compare_opts, compare_algorithms);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_algorithms, lambdas, seeds);
    const int failures = bh::self_check::run_all(std::cout);
    std::cout << (failures == 0 ? "all checks passed" : std::to_string(failures) + " check(s) failed")
              << '\n';
    return failures == 0 ? 0 : 1;
  } catch (const bh::scenario::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 1;
  }
}
