#include "mphp/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "mphp/seed.hpp"

namespace mphp {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorKind::kInvalidInput, message);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    invalid("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

using Setter = void (*)(SystemConfig&, std::string_view key, std::string_view value);

template <auto Member>
void set_int(SystemConfig& c, std::string_view key, std::string_view value) {
  c.*Member = parse_number<int>(key, value);
}

const std::map<std::string_view, Setter>& setters() {
  static const std::map<std::string_view, Setter> table = {
      {"M", &set_int<&SystemConfig::antennas>},
      {"K", &set_int<&SystemConfig::users>},
      {"L", &set_int<&SystemConfig::chains>},
      {"G", &set_int<&SystemConfig::groups>},
      {"B", &set_int<&SystemConfig::bits>},
      {"P", [](SystemConfig& c, std::string_view k, std::string_view v) { c.total_power = parse_number<double>(k, v); }},
      {"n_slots", &set_int<&SystemConfig::slots>},
      {"seed", [](SystemConfig& c, std::string_view k, std::string_view v) { c.seed = parse_number<std::uint64_t>(k, v); }},
      {"T", &set_int<&SystemConfig::period_slots>},
      {"subspace_rank", &set_int<&SystemConfig::subspace_rank>},
      {"objective_exponent", [](SystemConfig& c, std::string_view k, std::string_view v) { c.relaxed.objective_exponent = parse_number<int>(k, v); }},
      {"schemes", [](SystemConfig& c, std::string_view, std::string_view v) {
         c.schemes.clear();
         for (const auto name : split_list(v)) {
           const auto s = parse_scheme(name);
           if (!s) invalid("config key 'schemes': unknown scheme '" + std::string(name) + "'");
           c.schemes.push_back(*s);
         }
       }},
      {"sweep", [](SystemConfig& c, std::string_view, std::string_view v) { c.sweep.parameter = std::string(v == "none" ? "" : v); }},
      {"sweep_values", [](SystemConfig& c, std::string_view k, std::string_view v) {
         c.sweep.values.clear();
         for (const auto item : split_list(v)) c.sweep.values.push_back(parse_number<double>(k, item));
       }},
      {"grouping.max_iters", &set_int<&SystemConfig::grouping_iterations>},
      {"bisection.tol", [](SystemConfig& c, std::string_view k, std::string_view v) { c.relaxed.tolerance = parse_number<double>(k, v); }},
      {"bisection.max_iters", [](SystemConfig& c, std::string_view k, std::string_view v) { c.relaxed.max_iterations = parse_number<int>(k, v); }},
      {"array.spacing", [](SystemConfig& c, std::string_view k, std::string_view v) { c.element_spacing = parse_number<double>(k, v); }},
      {"scenario.angular_spread", [](SystemConfig& c, std::string_view k, std::string_view v) { c.scenario.angular_spread = parse_number<double>(k, v); }},
      {"scenario.path_count", [](SystemConfig& c, std::string_view k, std::string_view v) { c.scenario.path_count = parse_number<int>(k, v); }},
      {"scenario.aod_jitter", [](SystemConfig& c, std::string_view k, std::string_view v) { c.scenario.aod_jitter = parse_number<double>(k, v); }},
      {"scenario.mean_power", [](SystemConfig& c, std::string_view k, std::string_view v) { c.scenario.mean_power = parse_number<double>(k, v); }},
      {"scenario.quadrature_points", [](SystemConfig& c, std::string_view k, std::string_view v) { c.scenario.quadrature_points = parse_number<int>(k, v); }},
      {"power.p_bb", [](SystemConfig& c, std::string_view k, std::string_view v) { c.power.baseband_w = parse_number<double>(k, v); }},
      {"power.p_rf", [](SystemConfig& c, std::string_view k, std::string_view v) { c.power.rf_chain_w = parse_number<double>(k, v); }},
      {"power.p_aps", [](SystemConfig& c, std::string_view k, std::string_view v) { c.power.phase_shifter_w = parse_number<double>(k, v); }},
  };
  return table;
}

double snr_db_to_power(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

bool is_sweep_parameter(std::string_view name) {
  return name == "M" || name == "K" || name == "G" || name == "B" || name == "P" ||
         name == "snr_db" || name == "T";
}

void SystemConfig::validate() const {
  if (antennas < 1) invalid("M must be >= 1");
  if (users < 1) invalid("K must be >= 1");
  if (chains != users) invalid("L must equal K (L = " + std::to_string(chains) + ", K = " + std::to_string(users) + ")");
  if (users > antennas) invalid("K must satisfy K <= M (K = " + std::to_string(users) + ", M = " + std::to_string(antennas) + ")");
  if (groups < 1 || groups > users) invalid("G must satisfy 1 <= G <= K (G = " + std::to_string(groups) + ")");
  if (bits < 1 || bits > 16) invalid("B must satisfy 1 <= B <= 16");
  if (!(total_power > 0.0)) invalid("P must be > 0");
  if (slots < 1) invalid("n_slots must be >= 1");
  if (period_slots < 1) invalid("T must be >= 1");
  if (subspace_rank < 0 || subspace_rank > antennas) invalid("subspace_rank must satisfy 0 <= r <= M");
  if (grouping_iterations < 1) invalid("grouping.max_iters must be >= 1");
  if (!(element_spacing > 0.0)) invalid("array.spacing must be > 0");
  if (!(scenario.angular_spread >= 0.0)) invalid("scenario.angular_spread must be >= 0");
  if (scenario.path_count < 1) invalid("scenario.path_count must be >= 1");
  if (!(scenario.aod_jitter >= 0.0)) invalid("scenario.aod_jitter must be >= 0");
  if (!(scenario.mean_power > 0.0)) invalid("scenario.mean_power must be > 0");
  if (scenario.quadrature_points < 32) invalid("scenario.quadrature_points must be >= 32");
  if (power.baseband_w < 0.0 || power.rf_chain_w < 0.0 || power.phase_shifter_w < 0.0) {
    invalid("power.* constants must be >= 0");
  }
  if (!(relaxed.tolerance > 0.0)) invalid("bisection.tol must be > 0");
  if (relaxed.max_iterations < 1) invalid("bisection.max_iters must be >= 1");
  if (relaxed.objective_exponent != 1 && relaxed.objective_exponent != 2) invalid("objective_exponent must be 1 or 2");
  if (schemes.empty()) invalid("schemes must name at least one scheme");
  if (!sweep.parameter.empty()) {
    if (!is_sweep_parameter(sweep.parameter)) invalid("sweep: unknown parameter '" + sweep.parameter + "'");
    if (sweep.values.empty()) invalid("sweep_values must be non-empty when sweep is set");
  }
}

Index SystemConfig::effective_subspace_rank() const {
  return subspace_rank > 0 ? subspace_rank : default_subspace_rank(antennas);
}

SystemConfig parse_config(std::string_view text) {
  SystemConfig config;
  bool chains_given = false;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      invalid("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      invalid("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    it->second(config, key, value);
    if (key == "L") chains_given = true;
  }
  if (!chains_given) config.chains = config.users;
  config.validate();
  return config;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const SystemConfig& c) {
  std::ostringstream os;
  os << "M = " << c.antennas << '\n'
     << "K = " << c.users << '\n'
     << "L = " << c.chains << '\n'
     << "G = " << c.groups << '\n'
     << "B = " << c.bits << '\n'
     << "P = " << format_double(c.total_power) << '\n'
     << "n_slots = " << c.slots << '\n'
     << "seed = " << c.seed << '\n'
     << "T = " << c.period_slots << '\n'
     << "subspace_rank = " << c.subspace_rank << '\n'
     << "objective_exponent = " << c.relaxed.objective_exponent << '\n';
  os << "schemes = ";
  for (std::size_t i = 0; i < c.schemes.size(); ++i) os << (i ? "," : "") << scheme_name(c.schemes[i]);
  os << '\n' << "sweep = " << (c.sweep.parameter.empty() ? "none" : c.sweep.parameter) << '\n';
  if (!c.sweep.values.empty()) {
    os << "sweep_values = ";
    for (std::size_t i = 0; i < c.sweep.values.size(); ++i) os << (i ? "," : "") << format_double(c.sweep.values[i]);
    os << '\n';
  }
  os << "grouping.max_iters = " << c.grouping_iterations << '\n'
     << "bisection.tol = " << format_double(c.relaxed.tolerance) << '\n'
     << "bisection.max_iters = " << c.relaxed.max_iterations << '\n'
     << "array.spacing = " << format_double(c.element_spacing) << '\n'
     << "scenario.angular_spread = " << format_double(c.scenario.angular_spread) << '\n'
     << "scenario.path_count = " << c.scenario.path_count << '\n'
     << "scenario.aod_jitter = " << format_double(c.scenario.aod_jitter) << '\n'
     << "scenario.mean_power = " << format_double(c.scenario.mean_power) << '\n'
     << "scenario.quadrature_points = " << c.scenario.quadrature_points << '\n'
     << "power.p_bb = " << format_double(c.power.baseband_w) << '\n'
     << "power.p_rf = " << format_double(c.power.rf_chain_w) << '\n'
     << "power.p_aps = " << format_double(c.power.phase_shifter_w) << '\n';
  return os.str();
}

SystemConfig with_parameter(SystemConfig config, std::string_view parameter, double value) {
  const auto as_int = [&](double v) {
    if (v != std::floor(v)) invalid("sweep value for '" + std::string(parameter) + "' must be an integer");
    return static_cast<int>(v);
  };
  if (parameter == "M") {
    config.antennas = as_int(value);
  } else if (parameter == "K") {
    config.users = config.chains = as_int(value);
  } else if (parameter == "G") {
    config.groups = as_int(value);
  } else if (parameter == "B") {
    config.bits = as_int(value);
  } else if (parameter == "P") {
    config.total_power = value;
  } else if (parameter == "snr_db") {
    config.total_power = snr_db_to_power(value);
  } else if (parameter == "T") {
    config.period_slots = as_int(value);
  } else {
    invalid("unknown sweep parameter '" + std::string(parameter) + "'");
  }
  return config;
}

Scenario prepare_scenario(const SystemConfig& config, std::uint64_t scenario_seed) {
  Scenario s;
  s.geometry = ArrayGeometry{config.antennas, config.element_spacing};
  s.users = clustered_users(config.users, config.groups, config.scenario, scenario_seed);
  s.correlations = correlations_from_params(s.users, s.geometry, config.scenario.quadrature_points);
  s.grouping = group_users(s.correlations, config.groups, config.effective_subspace_rank(),
                           config.grouping_iterations);
  return s;
}

DesignOptions design_options(const SystemConfig& config) {
  return DesignOptions{config.bits, config.total_power, config.relaxed};
}

SlotOutcome evaluate_slot(const LongTermDesign& design, const ComplexMatrix& channel,
                          const DesignOptions& options) {
  const SlotPrecoding slot = build_slot_precoding(design, channel, options);
  SlotOutcome out;
  out.sinr = sinr_per_user(channel, slot);
  out.intra_group_leakage = intra_group_leakage(channel, slot);
  for (const auto& g : slot.groups) {
    if (g.outage) out.outage_users += static_cast<int>(g.users.size());
  }
  return out;
}

RunMetrics simulate(const LongTermDesign& design, const DesignOptions& options, int slot_count,
                    const std::function<ComplexMatrix(int)>& channel_for_slot, int threads) {
  const int K = design.grouping.user_count();
  return monte_carlo(
      slot_count, K,
      [&](int slot) { return evaluate_slot(design, channel_for_slot(slot), options); }, threads);
}

RunMetrics monte_carlo_rates(SchemeId scheme, const SystemConfig& config, const Scenario& scenario,
                             int slot_count, std::uint64_t channel_seed, int threads) {
  const DesignOptions options = design_options(config);
  const LongTermDesign design = design_long_term(scheme, scenario.grouping, options);

  RunMetrics metrics = simulate(
      design, options, slot_count,
      [&](int slot) {
        return draw_channel(scenario.users, scenario.geometry, channel_seed,
                            static_cast<std::uint64_t>(slot)).H;
      },
      threads);

  metrics.energy_efficiency =
      energy_efficiency(metrics.sum_rate, config.total_power, config.chains, config.antennas,
                        config.power, scheme_connectivity(scheme));

  const Grouping& grouping = scenario.grouping;
  if (scheme_timescale(scheme) == CsiTimescale::kMixed) {
    // MPHP feeds back each group's S_g x S_g block; the fully-connected
    // statistical baseline needs the whole K x K effective channel.
    const std::vector<int> sizes =
        scheme == SchemeId::kMphp ? grouping.group_sizes() : std::vector<int>{config.users};
    const std::int64_t z = correlation_feedback(grouping.group_correlations);
    metrics.feedback = feedback_overhead(CsiTimescale::kMixed, config.antennas, config.users,
                                         config.period_slots, sizes, z);
  } else {
    metrics.feedback = feedback_overhead(CsiTimescale::kRealTime, config.antennas, config.users,
                                         config.period_slots, {}, 0);
  }
  return metrics;
}

std::vector<ResultRow> run_experiment(const SystemConfig& config, int threads) {
  config.validate();
  if (threads <= 0) threads = default_thread_count();

  const bool swept = !config.sweep.parameter.empty();
  const std::vector<double> points = swept ? config.sweep.values : std::vector<double>{0.0};

  std::vector<SchemeId> schemes = config.schemes;
  std::sort(schemes.begin(), schemes.end());
  schemes.erase(std::unique(schemes.begin(), schemes.end()), schemes.end());

  std::vector<ResultRow> rows;
  for (std::size_t si = 0; si < points.size(); ++si) {
    const SystemConfig point =
        swept ? with_parameter(config, config.sweep.parameter, points[si]) : config;
    const std::string where =
        swept ? config.sweep.parameter + " = " + format_double(points[si]) : std::string("default point");
    Scenario scenario;
    try {
      point.validate();
      scenario = prepare_scenario(point, derive_seed({config.seed, si}));
    } catch (const Error& e) {
      throw Error(e.kind(), "[" + where + "] " + e.what());
    }

    for (const SchemeId scheme : schemes) {
      const auto scheme_index = static_cast<std::uint64_t>(scheme);
      RunMetrics m;
      try {
        m = monte_carlo_rates(scheme, point, scenario, point.slots,
                              derive_seed({config.seed, si, scheme_index}), threads);
      } catch (const Error& e) {
        throw Error(e.kind(), "[" + std::string(scheme_name(scheme)) + ", " + where + "] " + e.what());
      }
      ResultRow row;
      row.sweep_parameter = swept ? config.sweep.parameter : "none";
      row.sweep_value = points[si];
      row.scheme = scheme;
      row.avg_rate_per_user = m.avg_rate_per_user;
      row.sum_rate = m.sum_rate;
      row.worst_user_rate = m.worst_user_rate;
      row.jain_index = m.jain_index;
      row.energy_efficiency = m.energy_efficiency;
      row.feedback_short_term = m.feedback.short_term;
      row.feedback_long_term = m.feedback.long_term;
      row.feedback_total = m.feedback.total;
      row.avg_rate_std_error = m.avg_rate_std_error;
      row.sum_rate_std_error = m.sum_rate_std_error;
      row.outage_fraction = m.outage_fraction;
      row.intra_group_leakage = m.max_intra_group_leakage;
      row.slots = m.slots;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string csv_header() {
  return "sweep_parameter,sweep_value,scheme,avg_rate_per_user,sum_rate,worst_user_rate,"
         "jain_index,energy_efficiency,feedback_short_term,feedback_long_term,feedback_total,"
         "avg_rate_std_error,sum_rate_std_error,outage_fraction,intra_group_leakage,slots";
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  if (rows.empty()) throw Error(ErrorKind::kInvalidInput, "write_csv: no rows");
  out << csv_header() << '\n';
  out << std::setprecision(6);
  for (const ResultRow& r : rows) {
    out << r.sweep_parameter << ',' << r.sweep_value << ',' << scheme_name(r.scheme) << ','
        << r.avg_rate_per_user << ',' << r.sum_rate << ',' << r.worst_user_rate << ','
        << r.jain_index << ',' << r.energy_efficiency << ',' << r.feedback_short_term << ','
        << r.feedback_long_term << ',' << r.feedback_total << ',' << r.avg_rate_std_error << ','
        << r.sum_rate_std_error << ',' << r.outage_fraction << ',' << r.intra_group_leakage << ','
        << r.slots << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "write_csv: stream write failed");
}

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "write_csv: cannot open '" + path.string() + "' for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write_csv: failed writing '" + path.string() + "'");
}

std::string gnuplot_script(const std::filesystem::path& csv_path, std::string_view metric) {
  std::istringstream header(csv_header());
  int column = 0;
  int index = 0;
  for (std::string name; std::getline(header, name, ',');) {
    ++index;
    if (name == metric) column = index;
  }
  if (column == 0 || column <= 3) {
    throw Error(ErrorKind::kInvalidInput, "gnuplot_script: unknown metric '" + std::string(metric) + "'");
  }
  std::ostringstream os;
  os << "# gnuplot script for " << csv_path.filename().string() << "\n"
     << "set datafile separator ','\n"
     << "set key outside right\n"
     << "set grid\n"
     << "set xlabel 'sweep value'\n"
     << "set ylabel '" << metric << "'\n"
     << "schemes = \"";
  for (std::size_t i = 0; i < kAllSchemes.size(); ++i) os << (i ? " " : "") << scheme_name(kAllSchemes[i]);
  os << "\"\n"
     << "plot for [s in schemes] '" << csv_path.string() << "' every ::1 using 2:(strcol(3) eq s ? column("
     << column << ") : 1/0) with linespoints title s\n";
  return os.str();
}

SystemConfig antenna_sweep_preset() {
  SystemConfig c;
  c.sweep = SweepSpec{"M", {16, 32, 64, 128}};
  return c;
}

SystemConfig snr_sweep_preset() {
  SystemConfig c;
  c.sweep = SweepSpec{"snr_db", {-10, -5, 0, 5, 10, 15, 20}};
  return c;
}

SystemConfig fairness_preset() { return SystemConfig{}; }

}  // namespace mphp
