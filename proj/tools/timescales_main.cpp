// Command line front end: simulation, exact-law queries, information curves,
// estimation, Monte Carlo studies, and the Gaussian-comparison distances.
//
// Exit codes: 0 success, 2 validation failure, 3 numerical failure,
// 4 I/O failure.  Errors land on stderr as one JSON record.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "timescales/estimators.hpp"
#include "timescales/fisher.hpp"
#include "timescales/gaussianization.hpp"
#include "timescales/increment_law.hpp"
#include "timescales/io.hpp"
#include "timescales/montecarlo.hpp"
#include "timescales/nonhomogeneous.hpp"

namespace ts = timescales;
using ts::io::format_g17;

namespace {

constexpr const char* kVersion = "0.1.0";

class CliError : public std::runtime_error {
 public:
  CliError(std::string message, int code)
      : std::runtime_error(std::move(message)), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

// Resolve --output against TIMESCALES_OUTPUT_DIR; "-" means stdout.
std::string resolve_output(const std::string& path) {
  if (path == "-" || path.empty()) return "-";
  if (path.front() == '/') return path;
  const char* dir = std::getenv("TIMESCALES_OUTPUT_DIR");
  if (dir && *dir) return std::string(dir) + "/" + path;
  return path;
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(resolve_output(path)) {
    if (path_ != "-") {
      file_.open(path_);
      if (!file_) throw CliError("cannot open output file: " + path_, 4);
    }
  }
  std::ostream& stream() { return path_ == "-" ? std::cout : file_; }
  void finish() {
    stream().flush();
    if (!stream()) throw CliError("write failure on " + path_, 4);
  }

 private:
  std::string path_;
  std::ofstream file_;
};

// "# command: ..." provenance echoes the semantic parameters only, so runs
// that differ in execution detail (threads, output path) stay byte-identical.
void provenance(std::ostream& out, const std::string& command,
                std::optional<std::uint64_t> seed = {}) {
  out << "# command: timescales " << command << '\n';
  if (seed) out << "# seed: " << *seed << '\n';
  out << "# version: " << kVersion << '\n';
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> values;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw CliError("empty numeric list: " + csv, 2);
  return values;
}

ts::estimators::Method parse_method(const std::string& name) {
  if (name == "qv") return ts::estimators::Method::QV;
  if (name == "onestep" || name == "one_step") return ts::estimators::Method::OneStep;
  if (name == "mle") return ts::estimators::Method::MLE;
  throw CliError("unknown method '" + name + "' (expected qv, onestep or mle)", 2);
}

ts::Regime parse_regime(const std::string& name) {
  if (name == "micro" || name == "microscopic") return ts::Regime::Microscopic;
  if (name == "intermediate") return ts::Regime::Intermediate;
  if (name == "macro" || name == "macroscopic") return ts::Regime::Macroscopic;
  throw CliError("unknown regime '" + name + "' (expected micro, intermediate or macro)",
                 2);
}

const char* regime_name(ts::Regime regime) {
  switch (regime) {
    case ts::Regime::Microscopic: return "micro";
    case ts::Regime::Intermediate: return "intermediate";
    case ts::Regime::Macroscopic: return "macro";
  }
  return "unknown";
}

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_g17(values[i]);
  }
  return out;
}

void run_simulate(double theta, double horizon, double delta, std::uint64_t seed,
                  const std::string& output) {
  const auto series = ts::sample_increments({theta}, {horizon, delta}, seed);
  Output out(output);
  provenance(out.stream(),
             "simulate --theta " + format_g17(theta) + " --T " + format_g17(horizon) +
                 " --delta " + format_g17(delta) + " --seed " + std::to_string(seed),
             seed);
  ts::write_increments_csv(out.stream(), series);
  out.finish();
}

void run_pmf(double x, int k_max, const std::string& output) {
  if (k_max < 0) k_max = static_cast<int>(std::ceil(x + 12.0 * std::sqrt(x) + 25.0));
  const auto logp = ts::log_pmf_table(x, k_max);
  Output out(output);
  provenance(out.stream(),
             "pmf --x " + format_g17(x) + " --k-max " + std::to_string(k_max));
  out.stream() << "k,pmf\n";
  for (int k = -k_max; k <= k_max; ++k)
    out.stream() << k << ',' << format_g17(std::exp(logp[static_cast<std::size_t>(std::abs(k))]))
                 << '\n';
  out.finish();
}

void run_fisher_curve(double theta, double horizon, double delta_min, double delta_max,
                      int points, bool linear, const std::string& output) {
  if (points < 2) throw CliError("need --points >= 2", 2);
  if (!(delta_min > 0.0) || !(delta_max > delta_min))
    throw CliError("need 0 < --delta-min < --delta-max", 2);
  Output out(output);
  provenance(out.stream(), "fisher-curve --theta " + format_g17(theta) + " --T " +
                               format_g17(horizon) + " --delta-min " +
                               format_g17(delta_min) + " --delta-max " +
                               format_g17(delta_max) + " --points " +
                               std::to_string(points));
  out.stream() << "delta,x,info,micro_limit,macro_limit\n";
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    const double delta = linear ? delta_min + t * (delta_max - delta_min)
                                : delta_min * std::pow(delta_max / delta_min, t);
    const ts::SamplingScheme scheme{horizon, delta};
    out.stream() << format_g17(delta) << ',' << format_g17(theta * delta) << ','
                 << format_g17(ts::fisher::total_information({theta}, scheme)) << ','
                 << format_g17(ts::fisher::limit_information(ts::Regime::Microscopic,
                                                             {theta}, scheme))
                 << ','
                 << format_g17(ts::fisher::limit_information(ts::Regime::Macroscopic,
                                                             {theta}, scheme))
                 << '\n';
  }
  out.finish();
}

void run_deficiency_curve(double x_min, double x_max, int points, bool linear,
                          const std::string& output) {
  const auto curve = ts::fisher::deficiency_curve(x_min, x_max, points, !linear);
  Output out(output);
  provenance(out.stream(), "deficiency-curve --x-min " + format_g17(x_min) +
                               " --x-max " + format_g17(x_max) + " --points " +
                               std::to_string(points));
  out.stream() << "x,psi,ratio\n";
  for (const auto& point : curve)
    out.stream() << format_g17(point.x) << ',' << format_g17(point.psi) << ','
                 << format_g17(point.ratio) << '\n';
  out.finish();
}

void run_estimate(const std::string& method, const std::string& input, double horizon,
                  double delta, const std::string& output) {
  std::ifstream in(input);
  if (!in) throw CliError("cannot open input file: " + input, 4);
  ts::IncrementSeries series;
  series.values = ts::read_increments_csv(in);
  series.scheme = {horizon, delta};
  ts::validate(series.scheme);
  if (series.values.empty()) throw CliError("input contains no increments", 2);

  std::vector<ts::estimators::EstimateResult> results;
  if (method == "all") {
    results.push_back(ts::estimators::qv_estimate(series));
    results.push_back(ts::estimators::one_step_estimate(series));
    results.push_back(ts::estimators::mle_estimate(series));
  } else {
    switch (parse_method(method)) {
      case ts::estimators::Method::QV:
        results.push_back(ts::estimators::qv_estimate(series));
        break;
      case ts::estimators::Method::OneStep:
        results.push_back(ts::estimators::one_step_estimate(series));
        break;
      case ts::estimators::Method::MLE:
        results.push_back(ts::estimators::mle_estimate(series));
        break;
    }
  }
  Output out(output);
  if (results.size() == 1) {
    out.stream() << ts::estimators::to_json(results[0]) << '\n';
  } else {
    out.stream() << '[';
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (i) out.stream() << ',';
      out.stream() << ts::estimators::to_json(results[i]);
    }
    out.stream() << "]\n";
  }
  out.finish();
}

void run_mc_study(double theta, const std::string& deltas, long long n, int replicas,
                  std::uint64_t seed, const std::string& methods, int threads,
                  const std::string& output) {
  ts::montecarlo::ExperimentConfig config;
  config.theta = theta;
  config.delta_grid = parse_doubles(deltas);
  config.n_per_scheme = n;
  config.replicas = replicas;
  config.seed = seed;
  config.threads = threads;
  config.methods.clear();
  std::stringstream stream(methods);
  std::string item;
  while (std::getline(stream, item, ','))
    if (!item.empty()) config.methods.push_back(parse_method(item));
  const auto rows = ts::montecarlo::run_variance_study(config);

  Output out(output);
  provenance(out.stream(),
             "mc-study --theta " + format_g17(theta) + " --deltas " +
                 join_doubles(config.delta_grid) + " --n " + std::to_string(n) +
                 " --replicas " + std::to_string(replicas) + " --seed " +
                 std::to_string(seed) + " --methods " + methods,
             seed);
  ts::montecarlo::write_study_csv(out.stream(), rows);
  for (const auto& row : rows)
    if (row.flagged)
      out.stream() << "# warning: " << row.failures << " estimator failures at delta="
                   << format_g17(row.delta) << " ("
                   << ts::estimators::method_name(row.estimator) << ")\n";
  out.finish();
}

void run_gauss_distance(double theta, const std::string& deltas,
                        const std::string& output) {
  const auto grid = parse_doubles(deltas);
  Output out(output);
  provenance(out.stream(), "gauss-distance --theta " + format_g17(theta) +
                               " --deltas " + join_doubles(grid));
  out.stream() << "delta,l2_direct,l2_spectral,delta_times_l2\n";
  for (double delta : grid) {
    const auto direct = ts::gaussianization::l2_distance_direct(theta, delta);
    const auto spectral = ts::gaussianization::l2_distance_spectral(theta, delta);
    out.stream() << format_g17(delta) << ',' << format_g17(direct.value) << ','
                 << format_g17(spectral.value) << ','
                 << format_g17(delta * direct.value) << '\n';
    if (direct.small_x)
      out.stream() << "# warning: theta*delta < 0.5 at delta=" << format_g17(delta)
                   << "; lattice law far from Gaussian\n";
  }
  out.finish();
}

void run_nonhomog_info(const std::string& model_name, const std::string& regime,
                       double theta, double horizon, double delta,
                       const std::string& output) {
  const auto model = ts::nonhomogeneous::builtin_intensity(model_name);
  const ts::SamplingScheme scheme{horizon, delta};
  const ts::Regime reg = parse_regime(regime);
  const double info = ts::nonhomogeneous::info_nonhomog(reg, model, theta, scheme);
  Output out(output);
  provenance(out.stream(), "nonhomog-info --model " + model_name + " --regime " +
                               regime + " --theta " + format_g17(theta) + " --T " +
                               format_g17(horizon) + " --delta " + format_g17(delta));
  out.stream() << "regime,model,theta,T,delta,info\n";
  out.stream() << regime_name(reg) << ',' << model_name << ',' << format_g17(theta)
               << ',' << format_g17(horizon) << ',' << format_g17(delta) << ','
               << format_g17(info) << '\n';
  out.finish();
}

int fail(const std::string& message, int code) {
  nlohmann::json record;
  record["error"] = message;
  record["code"] = code;
  std::cerr << record.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inference across sampling time scales for a compound Poisson "
               "process with symmetric unit jumps"};
  app.require_subcommand(1);

  // simulate
  double theta = 1.0, horizon = 100.0, delta = 1.0, x = 1.0;
  double x_min = 0.05, x_max = 10.0, delta_min = 0.01, delta_max = 100.0;
  std::uint64_t seed = 0;
  int points = 200, k_max = -1, replicas = 1000, threads = 0;
  long long n = 10000;
  bool linear = false;
  std::string output = "-", input, method = "qv", deltas = "0.01,0.6,50";
  std::string methods = "qv,onestep", model_name = "constant", regime = "intermediate";

  auto* simulate = app.add_subcommand("simulate", "draw an increment series as CSV");
  simulate->add_option("--theta", theta, "jump intensity")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--T", horizon, "observation horizon")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--delta", delta, "sampling step")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--output", output, "output path or - for stdout");

  auto* pmf_cmd = app.add_subcommand("pmf", "exact increment pmf as CSV");
  pmf_cmd->add_option("--x", x, "theta*delta")->required()->check(CLI::PositiveNumber);
  pmf_cmd->add_option("--k-max", k_max, "largest |k| (default: adaptive)");
  pmf_cmd->add_option("--output", output, "output path or - for stdout");

  auto* fisher_cmd = app.add_subcommand("fisher-curve",
                                        "total information across sampling steps");
  fisher_cmd->add_option("--theta", theta)->required()->check(CLI::PositiveNumber);
  fisher_cmd->add_option("--T", horizon)->required()->check(CLI::PositiveNumber);
  fisher_cmd->add_option("--delta-min", delta_min)->required()->check(CLI::PositiveNumber);
  fisher_cmd->add_option("--delta-max", delta_max)->required()->check(CLI::PositiveNumber);
  fisher_cmd->add_option("--points", points)->check(CLI::Range(2, 1000000));
  fisher_cmd->add_flag("--linear", linear, "linear grid instead of logarithmic");
  fisher_cmd->add_option("--output", output);

  auto* curve = app.add_subcommand("deficiency-curve",
                                   "psi and the QV deficiency ratio over x = theta*delta");
  curve->add_option("--x-min", x_min)->check(CLI::PositiveNumber);
  curve->add_option("--x-max", x_max)->check(CLI::PositiveNumber);
  curve->add_option("--points", points)->check(CLI::Range(2, 1000000));
  curve->add_flag("--linear", linear, "linear grid instead of logarithmic");
  curve->add_option("--output", output);

  auto* estimate = app.add_subcommand("estimate", "estimate theta from an increment CSV");
  estimate->add_option("--method", method, "qv, onestep, mle or all");
  estimate->add_option("--input", input, "increments CSV")->required();
  estimate->add_option("--T", horizon)->required()->check(CLI::PositiveNumber);
  estimate->add_option("--delta", delta)->required()->check(CLI::PositiveNumber);
  estimate->add_option("--output", output);

  auto* study = app.add_subcommand("mc-study", "replicated estimator variance study");
  study->add_option("--theta", theta)->required()->check(CLI::PositiveNumber);
  study->add_option("--deltas", deltas, "comma separated sampling steps")->required();
  study->add_option("--n", n, "increments per replica")->check(CLI::PositiveNumber);
  study->add_option("--replicas", replicas)->check(CLI::Range(2, 100000000));
  study->add_option("--seed", seed);
  study->add_option("--methods", methods, "comma separated estimator list");
  study->add_option("--threads", threads, "0 = hardware concurrency");
  study->add_option("--output", output);

  auto* gauss = app.add_subcommand("gauss-distance",
                                   "L2 distance of the jittered law from its Gaussian limit");
  gauss->add_option("--theta", theta)->required()->check(CLI::PositiveNumber);
  gauss->add_option("--deltas", deltas, "comma separated sampling steps")->required();
  gauss->add_option("--output", output);

  auto* nonhomog = app.add_subcommand("nonhomog-info",
                                      "regime information for a time-dependent intensity");
  nonhomog->add_option("--model", model_name, "constant, linear or sine");
  nonhomog->add_option("--regime", regime, "micro, intermediate or macro");
  nonhomog->add_option("--theta", theta)->required()->check(CLI::PositiveNumber);
  nonhomog->add_option("--T", horizon)->required()->check(CLI::PositiveNumber);
  nonhomog->add_option("--delta", delta)->required()->check(CLI::PositiveNumber);
  nonhomog->add_option("--output", output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(e.what(), 2);
  }

  try {
    if (simulate->parsed()) run_simulate(theta, horizon, delta, seed, output);
    else if (pmf_cmd->parsed()) run_pmf(x, k_max, output);
    else if (fisher_cmd->parsed())
      run_fisher_curve(theta, horizon, delta_min, delta_max, points, linear, output);
    else if (curve->parsed()) run_deficiency_curve(x_min, x_max, points, linear, output);
    else if (estimate->parsed()) run_estimate(method, input, horizon, delta, output);
    else if (study->parsed())
      run_mc_study(theta, deltas, n, replicas, seed, methods, threads, output);
    else if (gauss->parsed()) run_gauss_distance(theta, deltas, output);
    else if (nonhomog->parsed())
      run_nonhomog_info(model_name, regime, theta, horizon, delta, output);
  } catch (const CliError& e) {
    return fail(e.what(), e.code());
  } catch (const std::domain_error& e) {
    return fail(e.what(), 2);
  } catch (const std::invalid_argument& e) {
    return fail(e.what(), 2);
  } catch (const std::ios_base::failure& e) {
    return fail(e.what(), 4);
  } catch (const std::exception& e) {
    return fail(e.what(), 3);
  }
  return 0;
}
