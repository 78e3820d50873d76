// Command-line front end: runs configured experiments and the sweep
// presets, validates configs and emits gnuplot scripts.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mphp/experiment.hpp"

namespace {

struct RunFlags {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> slots;
  int threads = 0;
};

void add_run_flags(CLI::App& cmd, RunFlags& flags, bool config_required) {
  auto* config = cmd.add_option("--config", flags.config_path, "Config file (key = value)");
  if (config_required) config->required();
  config->check(CLI::ExistingFile);
  cmd.add_option("--out", flags.out_path, "CSV destination (default: stdout)");
  cmd.add_option("--seed", flags.seed, "Override the master seed");
  cmd.add_option("--slots", flags.slots, "Override n_slots")->check(CLI::PositiveNumber);
  cmd.add_option("--threads", flags.threads, "Worker threads (default: MPHP_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
}

// Preset sweeps still honour keys from --config except the sweep itself.
mphp::SystemConfig resolve(const RunFlags& flags, std::optional<mphp::SystemConfig> preset) {
  mphp::SystemConfig config = flags.config_path.empty() ? mphp::SystemConfig{} : mphp::load_config(flags.config_path);
  if (preset) config.sweep = preset->sweep;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.slots) config.slots = *flags.slots;
  config.validate();
  return config;
}

void print_summary(const std::vector<mphp::ResultRow>& rows) {
  std::printf("%-10s %-18s %12s %10s %10s %8s %8s\n", "point", "scheme", "rate/user", "sum", "worst", "jain", "EE");
  for (const auto& r : rows) {
    char point[32] = "-";
    if (r.sweep_parameter != "none") std::snprintf(point, sizeof point, "%s=%g", r.sweep_parameter.c_str(), r.sweep_value);
    std::printf("%-10s %-18s %12.4f %10.4f %10.4f %8.4f %8.4f\n", point,
                std::string(mphp::scheme_name(r.scheme)).c_str(), r.avg_rate_per_user, r.sum_rate,
                r.worst_user_rate, r.jain_index, r.energy_efficiency);
  }
}

void execute(const RunFlags& flags, const mphp::SystemConfig& config) {
  const auto rows = mphp::run_experiment(config, flags.threads);
  if (flags.out_path.empty()) {
    mphp::write_csv(rows, std::cout);
  } else {
    mphp::write_csv(rows, std::filesystem::path(flags.out_path));
    print_summary(rows);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-timescale hybrid precoding simulator"};
  app.require_subcommand(1);

  RunFlags run_flags, m_flags, snr_flags, fair_flags;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  add_run_flags(*run, run_flags, true);
  auto* sweep_m = app.add_subcommand("sweep-m", "Average rate per user against M");
  add_run_flags(*sweep_m, m_flags, false);
  auto* sweep_snr = app.add_subcommand("sweep-snr", "Energy efficiency against SNR");
  add_run_flags(*sweep_snr, snr_flags, false);
  auto* fairness = app.add_subcommand("fairness", "Sum/worst-user throughput and Jain index");
  add_run_flags(*fairness, fair_flags, false);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse a config and print it with defaults filled in");
  validate->add_option("--config", validate_path, "Config file")->required()->check(CLI::ExistingFile);

  std::string csv_path, metric = "avg_rate_per_user", script_path;
  auto* plot = app.add_subcommand("plot", "Write a gnuplot script for a results CSV");
  plot->add_option("--csv", csv_path, "Results CSV")->required();
  plot->add_option("--metric", metric, "Column to plot");
  plot->add_option("--out", script_path, "Script destination (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      execute(run_flags, resolve(run_flags, std::nullopt));
    } else if (*sweep_m) {
      execute(m_flags, resolve(m_flags, mphp::antenna_sweep_preset()));
    } else if (*sweep_snr) {
      execute(snr_flags, resolve(snr_flags, mphp::snr_sweep_preset()));
    } else if (*fairness) {
      execute(fair_flags, resolve(fair_flags, mphp::fairness_preset()));
    } else if (*validate) {
      std::cout << mphp::serialize_config(mphp::load_config(validate_path));
    } else if (*plot) {
      const std::string script = mphp::gnuplot_script(csv_path, metric);
      if (script_path.empty()) {
        std::cout << script;
      } else {
        std::ofstream out(script_path);
        out << script;
        if (!out) throw mphp::Error(mphp::ErrorKind::kIo, "cannot write '" + script_path + "'");
      }
    }
  } catch (const mphp::Error& e) {
    std::cerr << "mphp: " << mphp::to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mphp: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
