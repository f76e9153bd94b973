#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "wlsapprox/complexity.hpp"
#include "wlsapprox/error_lab.hpp"
#include "wlsapprox/errors.hpp"
#include "wlsapprox/random.hpp"
#include "wlsapprox/sampler.hpp"
#include "wlsapprox/serialization.hpp"
#include "wlsapprox/tract_probe.hpp"
#include "wlsapprox/version.hpp"
#include "wlsapprox/wls.hpp"

namespace wlsapprox::cli {

namespace {

struct Options {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  unsigned threads = 1;
  std::optional<std::size_t> replications;
  std::optional<double> delta;
  double omega = 0.5;
  std::string criterion = "abs";
  std::vector<double> eps_grid;
  std::vector<int> d_grid;
  std::vector<std::size_t> n_grid;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::vector<double> thresholds;
  std::string function = "random";
  std::size_t max_retries = kDefaultMaxRetries;
  bool accept = false;
  bool strict_truncation = false;
  double wt_s = 1.0;
  double wt_t = 1.0;
};

// Everything an artifact needs to be traced back to its inputs.
struct Context {
  const Options& opt;
  ProblemConfig config;
  std::string hash;
  std::filesystem::path out_dir;
  std::ostream& out;

  std::string seed_field() const { return opt.seed ? std::to_string(*opt.seed) : "none"; }

  json envelope(json parameters, json result) const {
    return {{"tool", kToolName},
            {"version", kVersion},
            {"command", opt.command},
            {"seed", opt.seed ? json(*opt.seed) : json(nullptr)},
            {"config_hash", hash},
            {"config", to_json(config)},
            {"parameters", std::move(parameters)},
            {"result", std::move(result)}};
  }

  std::filesystem::path write(const std::string& suffix, const std::string& content) const {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / (opt.command + suffix);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot write '" + path.string() + "'");
    file << content;
    return path;
  }

  std::filesystem::path write_json(const json& doc) const { return write(".json", doc.dump(2) + "\n"); }
};

std::vector<std::string> with_provenance(std::vector<std::string> header) {
  header.insert(header.end(), {"seed", "config_hash", "version"});
  return header;
}

void end_row(CsvWriter& csv, const Context& ctx) {
  csv.add(ctx.seed_field()).add(ctx.hash).add(std::string(kVersion));
  csv.end_row();
}

std::uint64_t require_seed(const Options& opt) {
  if (!opt.seed) throw ConfigError("--seed is required for '" + opt.command + "'");
  return *opt.seed;
}

std::size_t require(const std::optional<std::size_t>& v, const char* flag) {
  if (!v) throw ConfigError(std::string(flag) + " is required");
  return *v;
}

CoefficientFunction make_function(const std::string& spec, const ProblemInstance& instance,
                                  std::size_t m, RandomStream stream) {
  if (spec == "random") return random_unit_function(instance, instance.truncation(), stream);
  if (spec == "vm") return random_unit_function(instance, m, stream);
  if (spec == "zero") return CoefficientFunction{};
  if (spec.rfind("mode:", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoull(spec.substr(5));
    } catch (const std::exception&) {
      throw ConfigError("bad --function '" + spec + "'");
    }
    if (k < 1 || k > instance.truncation())
      throw TruncationExceeded("mode index " + std::to_string(k) + " outside 1.." +
                               std::to_string(instance.truncation()));
    return CoefficientFunction::unit_mode(instance.spectral(), k);
  }
  throw ConfigError("unknown --function '" + spec + "' (random, vm, zero, mode:K)");
}

std::string paths(const std::filesystem::path& a, const std::filesystem::path& b) {
  return a.string() + ", " + b.string();
}

// ---------------------------------------------------------------------------
// subcommands

void cmd_sample(const Context& ctx) {
  const auto& opt = ctx.opt;
  const std::uint64_t seed = require_seed(opt);
  const std::size_t n = require(opt.n, "--n");
  const std::size_t m = require(opt.m, "--m");
  const ProblemInstance instance = ctx.config.instance();
  RandomStream stream(seed);

  SampleSet sample;
  std::size_t retries = 0;
  double deviation = 0.0;
  if (opt.accept) {
    AcceptedSample acc = draw_accepted(instance, m, n, stream, opt.max_retries);
    sample = std::move(acc.sample);
    retries = acc.retries;
    deviation = acc.deviation;
  } else {
    if (n < m) throw ParameterError("n must be at least m");
    sample = draw_nodes(SamplingDensity(instance, m), n, stream);
    deviation = spectral_deviation(instance, m, sample);
  }

  std::vector<std::string> header = {"i"};
  for (int j = 1; j <= sample.d; ++j) header.push_back("x" + std::to_string(j));
  header.push_back("h");
  CsvWriter csv(with_provenance(header));
  for (std::size_t i = 0; i < sample.n; ++i) {
    csv.add(i);
    for (double x : sample.node(i)) csv.add(x);
    csv.add(sample.h_values[i]);
    end_row(csv, ctx);
  }
  const auto csv_path = ctx.write(".csv", csv.str());
  json result = to_json(sample);
  result["deviation"] = deviation;
  result["retries"] = retries;
  const auto json_path =
      ctx.write_json(ctx.envelope({{"n", n}, {"m", m}, {"accept", opt.accept}}, result));
  ctx.out << "sample: n=" << n << " m=" << m << " deviation=" << format_double(deviation)
          << " retries=" << retries << " -> " << paths(csv_path, json_path) << "\n";
}

void cmd_approximate(const Context& ctx) {
  const auto& opt = ctx.opt;
  const std::uint64_t seed = require_seed(opt);
  const std::size_t n = require(opt.n, "--n");
  const double delta = opt.delta.value_or(0.5);
  const std::size_t m = opt.m ? *opt.m : m_of_n(n, delta);
  if (m == 0)
    throw ParameterError("m_of_n(" + std::to_string(n) + ", delta) = 0; increase n or delta");
  const ProblemInstance instance = ctx.config.instance();
  if (m > instance.truncation())
    throw TruncationExceeded("m = " + std::to_string(m) + " exceeds M");

  const RandomStream base(seed);
  const CoefficientFunction f = make_function(opt.function, instance, m, base.substream(0));
  RandomStream draws = base.substream(1);
  const WlsModel model = approximate(instance, f, m, n, draws, opt.max_retries);
  const double err = g_error(instance, model, f);
  const double norm = std::sqrt(f.g_norm_sq());
  const double rel = norm > 0.0 ? err / norm : err;

  CsvWriter csv(with_provenance({"n", "m", "delta", "k", "coeff_re", "coeff_im", "target_re",
                                 "target_im"}));
  for (std::size_t k = 1; k <= m; ++k) {
    const cdouble c = model.coeffs(static_cast<Eigen::Index>(k - 1));
    const cdouble a = f.coeff(k);
    csv.add(n).add(m).add(delta).add(k).add(c.real()).add(c.imag()).add(a.real()).add(a.imag());
    end_row(csv, ctx);
  }
  const auto csv_path = ctx.write(".csv", csv.str());
  json result = to_json(model);
  result["g_error"] = err;
  result["relative_error"] = rel;
  result["f_g_norm"] = norm;
  const auto json_path = ctx.write_json(ctx.envelope(
      {{"n", n}, {"m", m}, {"delta", delta}, {"function", opt.function}}, result));
  ctx.out << "approximate: n=" << n << " m=" << m << " error=" << format_double(err)
          << " relative=" << format_double(rel) << " retries=" << model.retries << " -> "
          << paths(csv_path, json_path) << "\n";
}

void cmd_error_curve(const Context& ctx) {
  const auto& opt = ctx.opt;
  const std::uint64_t seed = require_seed(opt);
  if (opt.n_grid.empty()) throw ConfigError("--n-grid is required");
  const double delta = opt.delta.value_or(0.5);
  const std::size_t R = opt.replications.value_or(kDefaultErrorReplications);
  const ProblemInstance instance = ctx.config.instance();
  const RandomStream base(seed);
  const ExperimentOptions eo{opt.threads, opt.max_retries};

  CsvWriter csv(with_provenance(
      {"n", "m", "delta", "mean_sq", "std_err", "bound_sq", "retries_mean", "function"}));
  json rows = json::array();
  std::size_t total = 0, within = 0;
  for (std::size_t g = 0; g < opt.n_grid.size(); ++g) {
    const std::size_t n = opt.n_grid[g];
    const std::size_t m = m_of_n(n, delta);
    if (m == 0)
      throw ParameterError("m_of_n(" + std::to_string(n) + ", delta) = 0; increase n or delta");
    if (m + 1 > instance.truncation())
      throw TruncationExceeded("m + 1 = " + std::to_string(m + 1) + " exceeds M");
    RandomStream battery_stream = base.substream(g).substream(0);
    const auto battery = test_battery(instance, m, battery_stream);
    const auto estimates =
        randomized_error_battery(instance, battery, n, delta, R, base.substream(g).substream(1), eo);
    for (const auto& e : estimates) {
      csv.add(e.n).add(e.m).add(e.delta).add(e.mean_sq).add(e.std_err).add(e.bound_sq)
          .add(e.retries_mean).add(e.label);
      end_row(csv, ctx);
      rows.push_back(to_json(e));
      ++total;
      within += e.within_bound() ? 1 : 0;
    }
  }
  const auto csv_path = ctx.write(".csv", csv.str());
  const auto json_path = ctx.write_json(ctx.envelope(
      {{"n_grid", opt.n_grid}, {"delta", delta}, {"R", R}, {"sigma_slack", kSigmaSlack}}, rows));
  ctx.out << "error-curve: " << within << "/" << total
          << " estimates within bound_sq + 3 std_err -> " << paths(csv_path, json_path) << "\n";
}

void cmd_concentration(const Context& ctx) {
  const auto& opt = ctx.opt;
  const std::uint64_t seed = require_seed(opt);
  const std::size_t n = require(opt.n, "--n");
  const std::size_t m = require(opt.m, "--m");
  const std::vector<double> ts = opt.thresholds.empty() ? std::vector<double>{0.5} : opt.thresholds;
  for (double t : ts)
    if (!(t > 0.0 && t < 1.0)) throw ParameterError("thresholds must lie in (0, 1)");
  const std::size_t R = opt.replications.value_or(kDefaultConcentrationReplications);
  const ProblemInstance instance = ctx.config.instance();
  const auto reports =
      concentration_experiment(instance, m, n, ts, R, RandomStream(seed), opt.threads);

  CsvWriter csv(with_provenance(
      {"m", "n", "t", "R", "exceed_count", "empirical_prob", "bound", "raw_bound", "holds"}));
  json rows = json::array();
  std::size_t held = 0;
  for (const auto& r : reports) {
    csv.add(r.m).add(r.n).add(r.t).add(r.R).add(r.exceed_count).add(r.empirical_prob)
        .add(r.bound).add(r.raw_bound).add(std::string(r.holds() ? "true" : "false"));
    end_row(csv, ctx);
    rows.push_back(to_json(r));
    held += r.holds() ? 1 : 0;
  }
  const auto csv_path = ctx.write(".csv", csv.str());
  const auto json_path =
      ctx.write_json(ctx.envelope({{"n", n}, {"m", m}, {"t", ts}, {"R", R}}, rows));
  ctx.out << "concentration: " << held << "/" << reports.size() << " thresholds within bound -> "
          << paths(csv_path, json_path) << "\n";
}

ComplexityTable build_table(const Context& ctx, Criterion criterion, double delta) {
  const auto& opt = ctx.opt;
  if (opt.eps_grid.empty()) throw ConfigError("--eps-grid is required");
  for (double e : opt.eps_grid)
    if (!(e > 0.0)) throw ParameterError("eps values must be positive");
  ComplexityTable table;
  if (opt.d_grid.empty()) {
    table = complexity_table(ctx.config.instance().spectral(), opt.eps_grid, criterion, delta,
                             opt.omega);
  } else {
    for (int d : opt.d_grid)
      if (d < 1) throw ParameterError("d values must be positive");
    table = probe_grid(ctx.config.family(), opt.d_grid, opt.eps_grid, criterion, delta, opt.omega);
  }
  if (opt.strict_truncation)
    for (const auto& row : table.rows)
      if (!row.n_wor.is_finite() || !row.n_wor_quarter.is_finite() || !row.n_wor_scaled.is_finite())
        throw TruncationExceeded("n_wor not resolved within the truncation at eps = " +
                                 format_double(row.eps) + ", d = " + std::to_string(row.d));
  return table;
}

void cmd_complexity(const Context& ctx) {
  const auto& opt = ctx.opt;
  const Criterion criterion = criterion_from_string(opt.criterion);
  const double delta = opt.delta.value_or(0.01);
  const ComplexityTable table = build_table(ctx, criterion, delta);

  CsvWriter csv(with_provenance({"eps", "d", "criterion", "delta", "omega", "n_wor",
                                 "n_wor_quarter", "n_wor_scaled", "mean_bound_log", "prob_bound_log",
                                 "mean_bound_pow", "prob_bound_pow"}));
  std::size_t unresolved = 0;
  for (const auto& r : table.rows) {
    csv.add(r.eps).add(static_cast<std::size_t>(r.d)).add(std::string(to_string(criterion)))
        .add(delta).add(opt.omega).add(r.n_wor).add(r.n_wor_quarter).add(r.n_wor_scaled)
        .add(r.mean_bound_log).add(r.prob_bound_log).add(r.mean_bound_pow).add(r.prob_bound_pow);
    end_row(csv, ctx);
    unresolved += r.n_wor.is_finite() ? 0 : 1;
  }
  const auto csv_path = ctx.write(".csv", csv.str());
  const auto json_path = ctx.write_json(ctx.envelope(
      {{"eps_grid", opt.eps_grid}, {"d_grid", opt.d_grid}, {"criterion", to_string(criterion)},
       {"delta", delta}, {"omega", opt.omega}},
      to_json(table)));
  ctx.out << "complexity: " << table.rows.size() << " rows, " << unresolved
          << " beyond truncation -> " << paths(csv_path, json_path) << "\n";
}

void cmd_tractability(const Context& ctx) {
  const auto& opt = ctx.opt;
  if (opt.d_grid.empty()) throw ConfigError("--d-grid is required");
  const Criterion criterion = criterion_from_string(opt.criterion);
  const double delta = opt.delta.value_or(0.01);
  const ComplexityTable table = build_table(ctx, criterion, delta);

  std::vector<TractabilityReport> reports;
  for (const Notion& notion : Notion::all(opt.wt_s, opt.wt_t)) reports.push_back(classify(table, notion));

  CsvWriter csv(with_provenance({"eps", "d", "n_wor", "mean_bound_log", "mean_bound_pow", "prob_bound_log",
                                 "prob_bound_pow", "ratio_mean_log", "ratio_mean_pow", "ratio_prob_log",
                                 "ratio_prob_pow"}));
  json transfer = json::array();
  for (const auto& r : transfer_report(table)) {
    csv.add(r.eps).add(static_cast<std::size_t>(r.d)).add(r.n_wor).add(r.mean_bound_log)
        .add(r.mean_bound_pow).add(r.prob_bound_log).add(r.prob_bound_pow).add(r.ratio_mean_log)
        .add(r.ratio_mean_pow).add(r.ratio_prob_log).add(r.ratio_prob_pow);
    end_row(csv, ctx);
    transfer.push_back(to_json(r));
  }
  json verdicts = json::array();
  for (const auto& r : reports) verdicts.push_back(to_json(r));
  const std::string summary = summarize(reports);
  const auto csv_path = ctx.write(".csv", csv.str());
  const auto json_path = ctx.write_json(ctx.envelope(
      {{"eps_grid", opt.eps_grid}, {"d_grid", opt.d_grid}, {"criterion", to_string(criterion)},
       {"delta", delta}, {"omega", opt.omega}, {"s", opt.wt_s}, {"t", opt.wt_t}},
      {{"table", to_json(table)}, {"notions", verdicts}, {"transfer", transfer},
       {"summary", summary}}));
  ctx.out << summary;
  ctx.out << "tractability: " << reports.size() << " notions -> " << paths(csv_path, json_path)
          << "\n";
}

void cmd_exp_decay(const Context& ctx) {
  const auto& opt = ctx.opt;
  const std::uint64_t seed = require_seed(opt);
  const std::vector<std::size_t> grid =
      opt.n_grid.empty() ? std::vector<std::size_t>{200, 400, 800, 1600} : opt.n_grid;
  const std::size_t R = opt.replications.value_or(kDefaultErrorReplications);
  const ProblemInstance instance = ctx.config.instance();
  const DecayReport report = exp_decay_check(instance, grid, R, RandomStream(seed),
                                             ExperimentOptions{opt.threads, opt.max_retries});

  CsvWriter csv(with_provenance({"n", "m", "delta", "mean_sq", "std_err", "bound_sq",
                                 "retries_mean", "function", "bound_wor", "bound_geometric"}));
  for (const auto& r : report.rows) {
    csv.add(r.n).add(r.m).add(decay_delta()).add(r.mean_sq).add(r.std_err)
        .add(r.bound_wor * r.bound_wor).add(r.retries_mean).add(r.worst_label)
        .add(r.bound_wor).add(r.bound_geometric);
    end_row(csv, ctx);
  }
  const auto csv_path = ctx.write(".csv", csv.str());
  const auto json_path =
      ctx.write_json(ctx.envelope({{"n_grid", grid}, {"R", R}}, to_json(report)));
  ctx.out << "exp-decay: " << (report.all_hold() ? "all rows hold" : "BOUND VIOLATED")
          << ", curves " << (report.curves_ordered() ? "ordered" : "NOT ordered") << " -> "
          << paths(csv_path, json_path) << "\n";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return kConfigError;
    case ErrorKind::parameter:
    case ErrorKind::domain: return kParameterError;
    case ErrorKind::acceptance_failure: return kAcceptanceFailure;
    case ErrorKind::truncation_exceeded: return kTruncationExceeded;
    default: return kInternal;
  }
}

int report_error(std::ostream& err, const std::string& kind, const std::string& message, int code,
                 json extra = json::object()) {
  json doc = {{"error", kind}, {"message", message}, {"exit_code", code}};
  doc.update(extra);
  err << doc.dump() << "\n";
  return code;
}

void add_common(CLI::App* sub, Options& opt, bool stochastic) {
  sub->add_option("--config", opt.config_path, "problem configuration (JSON)")->required();
  sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
  if (stochastic) {
    sub->add_option("--seed", opt.seed, "base seed (mandatory)");
    sub->add_option("--max-retries", opt.max_retries, "acceptance retries before failing")
        ->capture_default_str();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Weighted least squares approximation experiments", kToolName};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* sample = app.add_subcommand("sample", "draw nodes from the mixture density");
  add_common(sample, opt, true);
  sample->add_option("--n", opt.n, "number of nodes")->required();
  sample->add_option("--m", opt.m, "mixture size")->required();
  sample->add_flag("--accept", opt.accept, "resample until ||H - I|| <= 1/2");

  auto* approx = app.add_subcommand("approximate", "fit one function by weighted least squares");
  add_common(approx, opt, true);
  approx->add_option("--n", opt.n, "number of nodes")->required();
  approx->add_option("--m", opt.m, "basis size (default: from n and delta)");
  approx->add_option("--delta", opt.delta, "failure probability (default 0.5)");
  approx->add_option("--function", opt.function, "random | vm | zero | mode:K")
      ->capture_default_str();

  auto* curve = app.add_subcommand("error-curve", "Monte Carlo error against the expectation bound");
  add_common(curve, opt, true);
  curve->add_option("--n-grid", opt.n_grid, "sample sizes")->delimiter(',')->required();
  curve->add_option("--delta", opt.delta, "failure probability (default 0.5)");
  curve->add_option("--replications", opt.replications, "replications per n (default 200)");
  curve->add_option("--threads", opt.threads, "worker threads")->capture_default_str();

  auto* conc = app.add_subcommand("concentration", "tail of ||H - I|| against the matrix bound");
  add_common(conc, opt, true);
  conc->add_option("--n", opt.n, "number of nodes")->required();
  conc->add_option("--m", opt.m, "basis size")->required();
  conc->add_option("--t", opt.thresholds, "thresholds in (0,1) (default 0.5)")->delimiter(',');
  conc->add_option("--replications", opt.replications, "draws (default 2000)");
  conc->add_option("--threads", opt.threads, "worker threads")->capture_default_str();

  auto add_table_flags = [&opt](CLI::App* sub) {
    sub->add_option("--eps-grid", opt.eps_grid, "error thresholds")->delimiter(',')->required();
    sub->add_option("--criterion", opt.criterion, "abs | nor")
        ->check(CLI::IsMember({"abs", "nor"}))
        ->capture_default_str();
    sub->add_option("--delta", opt.delta, "failure probability for the transfer bounds (default 0.01)");
    sub->add_option("--omega", opt.omega, "exponent of the C_omega bounds")->capture_default_str();
    sub->add_flag("--strict-truncation", opt.strict_truncation,
                  "fail when a cell is not resolved within the truncation");
  };

  auto* cx = app.add_subcommand("complexity", "information complexity and transfer bounds");
  add_common(cx, opt, false);
  add_table_flags(cx);
  cx->add_option("--d-grid", opt.d_grid, "dimensions (uses the configured family)")->delimiter(',');

  auto* tract = app.add_subcommand("tractability", "finite-grid tractability diagnostics");
  add_common(tract, opt, false);
  add_table_flags(tract);
  tract->add_option("--d-grid", opt.d_grid, "dimensions")->delimiter(',')->required();
  tract->add_option("--wt-s", opt.wt_s, "s of (s,t)-WT")->capture_default_str();
  tract->add_option("--wt-t", opt.wt_t, "t of (s,t)-WT")->capture_default_str();

  auto* decay = app.add_subcommand("exp-decay", "randomized error under exponential weights");
  add_common(decay, opt, true);
  decay->add_option("--n-grid", opt.n_grid, "sample sizes (default 200,400,800,1600)")
      ->delimiter(',');
  decay->add_option("--replications", opt.replications, "replications per n (default 200)");
  decay->add_option("--threads", opt.threads, "worker threads")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error(err, "config", e.what(), kConfigError);
  }

  try {
    if (opt.threads == 0) throw ParameterError("--threads must be positive");
    const CLI::App* chosen = app.get_subcommands().front();
    opt.command = chosen->get_name();
    ProblemConfig config = load_config(opt.config_path);
    Context ctx{opt, config, config_hash(config), opt.out_dir, out};

    if (opt.command == "sample") cmd_sample(ctx);
    else if (opt.command == "approximate") cmd_approximate(ctx);
    else if (opt.command == "error-curve") cmd_error_curve(ctx);
    else if (opt.command == "concentration") cmd_concentration(ctx);
    else if (opt.command == "complexity") cmd_complexity(ctx);
    else if (opt.command == "tractability") cmd_tractability(ctx);
    else if (opt.command == "exp-decay") cmd_exp_decay(ctx);
    return kOk;
  } catch (const AcceptanceFailure& e) {
    return report_error(err, to_string(e.kind()), e.what(), kAcceptanceFailure,
                        {{"last_deviation", e.last_deviation()}});
  } catch (const Error& e) {
    return report_error(err, to_string(e.kind()), e.what(), exit_code(e.kind()));
  } catch (const std::exception& e) {
    return report_error(err, "internal", e.what(), kInternal);
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace wlsapprox::cli
