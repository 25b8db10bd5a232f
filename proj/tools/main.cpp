// Command-line front end: analytic coefficients, SDNR, conditional moments,
// interval sweeps and optimization, Monte Carlo estimation, and figure data,
// emitted as CSV or JSON.
//
// Exit codes: 0 success, 2 usage error, 3 numerical domain error,
// 4 quadrature non-convergence, 5 output I/O error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bussgang/decomposition.hpp"
#include "bussgang/monte_carlo.hpp"
#include "bussgang/serialize.hpp"
#include "bussgang/signal_model.hpp"
#include "bussgang/sweep.hpp"

namespace {

using bussgang::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kSeedEnvVar = "BUSSGANG_SEED";
constexpr std::uint64_t kDefaultSeed = 0x42u;

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnvVar)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string(kSeedEnvVar) + " is not an unsigned integer");
    }
  }
  return kDefaultSeed;
}

// "lo:hi:step" or "lo:hi"
bussgang::GridSpec parse_grid(const std::string& text, double default_step) {
  bussgang::GridSpec g;
  std::istringstream in(text);
  std::string part;
  std::vector<double> vals;
  while (std::getline(in, part, ':')) {
    try {
      vals.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw UsageError("bad grid component '" + part + "' in '" + text + "'");
    }
  }
  if (vals.size() != 2 && vals.size() != 3)
    throw UsageError("grid must be lo:hi or lo:hi:step, got '" + text + "'");
  g.lo = vals[0];
  g.hi = vals[1];
  g.step = vals.size() == 3 ? vals[2] : default_step;
  return g;
}

// Options shared by the analytic subcommands. Values can come from a JSON
// config file (--config); explicit flags win over the file.
struct CommonOptions {
  CLI::App* cmd = nullptr;

  int bits = 0;
  int levels = 0;
  double delta = 0.0;
  std::string signal_name = "binary";
  double amplitude = 1.0;
  double sigma_s = 1.0;
  double sigma_n = 0.0;
  double snr_db = 0.0;
  std::string pmf_path;
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t samples = 1'000'000;

  std::string format;  // "csv" or "json"; empty picks the subcommand default
  std::string output_path;

  void add_quantizer_flags(CLI::App& app, bool with_delta) {
    cmd = &app;
    app.add_option("--bits", bits, "quantizer bits m (levels M = 2^m)");
    app.add_option("--levels", levels, "quantizer level count M (power of two)");
    if (with_delta) app.add_option("--delta", delta, "quantization interval");
  }

  void add_signal_flags(CLI::App& app) {
    app.add_option("--signal", signal_name, "signal law: gaussian | binary | pam4 | discrete")
        ->check(CLI::IsMember({"gaussian", "binary", "pam4", "discrete"}));
    app.add_option("--amplitude", amplitude, "amplitude A for binary/pam4 signals");
    app.add_option("--sigma-s", sigma_s, "standard deviation of a gaussian signal");
    app.add_option("--pmf", pmf_path, "level,prob file for --signal discrete");
    app.add_option("--sigma-n", sigma_n, "noise standard deviation");
    app.add_option("--snr-db", snr_db, "derive sigma-n from the input SNR in dB");
  }

  void add_output_flags(CLI::App& app) {
    app.add_option("--format", format, "output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--output,-o", output_path, "output path (default: standard output)");
    app.add_option("--config", config_path, "JSON file with option defaults");
  }

  void add_seed_flags(CLI::App& app) {
    app.add_option("--seed", seed, "random seed (default: $" + std::string(kSeedEnvVar) + " or 66)");
    app.add_option("--samples", samples, "Monte Carlo sample count");
  }

  bool given(const std::string& flag) const {
    if (!cmd) return false;
    const CLI::Option* o = cmd->get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  }

  // apply config-file values underneath explicit flags
  void merge_config() {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw UsageError("cannot open config file: " + config_path);
    ordered_json j;
    try {
      j = ordered_json::parse(in);
    } catch (const std::exception& e) {
      throw UsageError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (j.contains("config")) j = j["config"];  // accept a whole previous output
    auto pull = [&](const char* key, const char* flag, auto& slot) {
      using T = std::decay_t<decltype(slot)>;
      if (j.contains(key) && !given(flag) && !j[key].is_null()) slot = j[key].get<T>();
    };
    pull("bits", "--bits", bits);
    pull("levels", "--levels", levels);
    pull("delta", "--delta", delta);
    pull("signal", "--signal", signal_name);
    pull("amplitude", "--amplitude", amplitude);
    pull("sigma_s", "--sigma-s", sigma_s);
    pull("sigma_n", "--sigma-n", sigma_n);
    pull("pmf", "--pmf", pmf_path);
    if (j.contains("seed") && !given("--seed")) seed = j["seed"].get<std::uint64_t>();
    if (j.contains("samples") && !given("--samples")) samples = j["samples"].get<std::size_t>();
  }

  int resolve_levels() const {
    if (bits > 0 && levels > 0)
      throw UsageError("give exactly one of --bits and --levels, not both");
    if (bits > 0) {
      if (bits > 20) throw UsageError("--bits must be in [1, 20]");
      return 1 << bits;
    }
    if (levels > 0) {
      if (levels < 2 || (levels & (levels - 1)) != 0)
        throw UsageError("--levels must be a power of two >= 2");
      return levels;
    }
    throw UsageError("one of --bits or --levels is required");
  }

  bussgang::MidRiseQuantizer quantizer() const {
    const int lv = resolve_levels();
    if (!given("--delta") && delta == 0.0) throw UsageError("--delta is required");
    return bussgang::MidRiseQuantizer::from_levels(lv, delta);
  }

  bussgang::SignalDistribution signal() const {
    if (signal_name == "gaussian") return bussgang::SignalDistribution::gaussian(sigma_s);
    if (signal_name == "binary") return bussgang::SignalDistribution::binary(amplitude);
    if (signal_name == "pam4") return bussgang::SignalDistribution::pam4(amplitude);
    if (pmf_path.empty()) throw UsageError("--signal discrete requires --pmf");
    return bussgang::SignalDistribution::load_pmf_file(pmf_path);
  }

  double resolve_sigma_n(const bussgang::SignalDistribution& d) const {
    const bool have_sigma = given("--sigma-n");
    const bool have_snr = given("--snr-db");
    if (have_sigma && have_snr) throw UsageError("--sigma-n and --snr-db are mutually exclusive");
    if (have_snr) return std::sqrt(d.power() / std::pow(10.0, snr_db / 10.0));
    return sigma_n;
  }

  std::uint64_t resolve_seed() const { return given("--seed") ? seed : default_seed(); }

  ordered_json config_echo(const bussgang::SignalDistribution& d, double resolved_sigma_n,
                           bool with_delta) const {
    ordered_json c;
    c["levels"] = bits > 0 ? (1 << bits) : levels;
    if (with_delta) c["delta"] = delta;
    c["signal"] = d.name();
    if (d.name() == "binary" || d.name() == "pam4") c["amplitude"] = amplitude;
    if (d.is_gaussian()) c["sigma_s"] = d.sigma_s();
    if (d.name() == "discrete") c["pmf"] = pmf_path;
    c["sigma_n"] = resolved_sigma_n;
    return c;
  }
};

// write to --output or stdout; I/O failures surface as exit 5
void emit(const CommonOptions& opt, const std::function<void(std::ostream&)>& writer) {
  if (opt.output_path.empty()) {
    writer(std::cout);
    std::cout.flush();
    if (!std::cout) throw std::ios_base::failure("cannot write to standard output");
    return;
  }
  std::ofstream out(opt.output_path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open output file: " + opt.output_path);
  writer(out);
  out.flush();
  if (!out) throw std::ios_base::failure("cannot write output file: " + opt.output_path);
}

void emit_report(const CommonOptions& opt, const ordered_json& report) {
  const std::string fmt = opt.format.empty() ? "json" : opt.format;
  emit(opt, [&](std::ostream& out) {
    if (fmt == "json")
      out << report.dump(2) << '\n';
    else
      bussgang::write_csv(out, report);
  });
}

void emit_table(const CommonOptions& opt, const bussgang::DataTable& table) {
  const std::string fmt = opt.format.empty() ? "csv" : opt.format;
  emit(opt, [&](std::ostream& out) {
    if (fmt == "csv")
      bussgang::write_csv(out, table);
    else
      out << bussgang::to_json(table).dump(2) << '\n';
  });
}

int run_coeffs(CommonOptions& opt, bool check_identities) {
  opt.merge_config();
  const auto q = opt.quantizer();
  const auto d = opt.signal();
  const double sn = opt.resolve_sigma_n(d);
  const auto cs = bussgang::s_referenced_coefficients(q, d, sn);
  const auto cx = bussgang::x_referenced_coefficients(q, d, sn);

  ordered_json out;
  out["config"] = opt.config_echo(d, sn, true);
  out["s_referenced"] = bussgang::to_json(cs);
  out["x_referenced"] = bussgang::to_json(cx);
  if (check_identities) {
    const double p = d.power();
    const double scale = 1.0 + sn * sn / p;
    const double eyn = bussgang::expected_yn(q, d, sn);
    ordered_json id;
    id["expected_yn"] = eyn;
    id["gamma_identity_residual"] = std::fabs(cs.gamma - cx.gamma * scale) / cs.gamma;
    id["alpha_gap"] = std::fabs(cs.alpha - cx.alpha);
    id["alpha_identity_residual"] = std::fabs(cs.alpha - (cx.alpha * scale - eyn / p));
    out["identities"] = id;
  }
  emit_report(opt, out);
  return 0;
}

int run_sdnr(CommonOptions& opt) {
  opt.merge_config();
  const auto q = opt.quantizer();
  const auto d = opt.signal();
  const double sn = opt.resolve_sigma_n(d);

  bussgang::SdnrReport rep;
  if (sn == 0.0) {
    // noiseless: x is the signal itself
    rep = bussgang::sdnr_noiseless(bussgang::x_referenced_coefficients(q, d, 0.0));
  } else if (d.is_gaussian()) {
    rep = bussgang::sdnr_gaussian(q, d.sigma_s(), sn);
  } else {
    rep = bussgang::sdnr_noisy(bussgang::s_referenced_coefficients(q, d, sn));
  }

  ordered_json out;
  out["config"] = opt.config_echo(d, sn, true);
  const double snr = bussgang::input_snr_linear(d, {sn});
  out["input_snr_linear"] = std::isinf(snr) ? ordered_json("inf") : ordered_json(snr);
  out["report"] = bussgang::to_json(rep);
  emit_report(opt, out);
  return 0;
}

int run_mu(CommonOptions& opt, const std::string& grid_text, std::vector<double>& s_values) {
  opt.merge_config();
  const auto q = opt.quantizer();
  const double sn = opt.sigma_n;

  std::vector<double> grid;
  if (!s_values.empty() && !grid_text.empty())
    throw UsageError("--s and --s-grid are mutually exclusive");
  if (!s_values.empty())
    grid = s_values;
  else
    grid = parse_grid(grid_text.empty() ? "-5:5:0.05" : grid_text, 0.05).expand();

  bussgang::DataTable t;
  t.columns = {"s", "mu_y", "mu_y2"};
  for (double s : grid)
    t.rows.push_back({s, bussgang::mu_y_given_s(q, sn, s), bussgang::mu_y2_given_s(q, sn, s)});
  emit_table(opt, t);
  return 0;
}

int run_sweep(CommonOptions& opt, const std::string& grid_text) {
  opt.merge_config();
  if (opt.given("--delta")) throw UsageError("sweep takes --grid, not --delta");
  if (grid_text.empty()) throw UsageError("sweep requires --grid lo:hi:step");
  const auto d = opt.signal();
  const double sn = opt.resolve_sigma_n(d);
  const int levels = opt.resolve_levels();

  const auto grid = parse_grid(grid_text, 0.005).expand();
  const auto result = bussgang::sweep_delta(levels, d, sn, grid);

  if (opt.format == "json") {
    ordered_json out = bussgang::to_json(result);
    emit_report(opt, out);
  } else {
    emit_table(opt, bussgang::to_table(result));
  }
  return 0;
}

int run_optimize(CommonOptions& opt, const std::string& bracket_text) {
  opt.merge_config();
  if (opt.given("--delta")) throw UsageError("optimize takes --bracket, not --delta");
  if (bracket_text.empty()) throw UsageError("optimize requires --bracket lo:hi");
  const auto d = opt.signal();
  const double sn = opt.resolve_sigma_n(d);
  const int levels = opt.resolve_levels();

  const auto g = parse_grid(bracket_text, 0.0);
  const auto opt_result = bussgang::optimize_delta(levels, d, sn, g.lo, g.hi);

  ordered_json out;
  out["config"] = opt.config_echo(d, sn, false);
  out["delta_star"] = opt_result.delta_star;
  out["sdnr_star"] = opt_result.sdnr_star;
  out["sdnr_star_db"] = 10.0 * std::log10(opt_result.sdnr_star);
  out["truncation_level"] = 0.5 * (levels - 1) * opt_result.delta_star;
  out["at_boundary"] = opt_result.at_boundary;
  emit_report(opt, out);
  return 0;
}

int run_simulate(CommonOptions& opt, bool ber_mode, const std::string& quantizer_mode,
                 int batches, bool parallel) {
  opt.merge_config();
  const auto q = opt.quantizer();
  const std::uint64_t seed = opt.resolve_seed();

  if (ber_mode) {
    if (opt.signal_name != "binary")
      throw UsageError("--ber runs a binary experiment; use --signal binary");
    const double sn = opt.resolve_sigma_n(bussgang::SignalDistribution::binary(opt.amplitude));
    ordered_json out;
    out["config"] = opt.config_echo(bussgang::SignalDistribution::binary(opt.amplitude), sn, true);
    out["config"]["samples"] = opt.samples;
    out["config"]["seed"] = seed;
    if (quantizer_mode == "both") {
      const auto with = bussgang::ber_uncoded_binary(q, opt.amplitude, sn, opt.samples, seed, true);
      const auto without =
          bussgang::ber_uncoded_binary(q, opt.amplitude, sn, opt.samples, seed, false);
      out["with_quantizer"] = bussgang::to_json(with);
      out["without_quantizer"] = bussgang::to_json(without);
      out["identical_error_counts"] = with.error_count == without.error_count;
    } else {
      const bool enabled = quantizer_mode != "off";
      out["report"] = bussgang::to_json(
          bussgang::ber_uncoded_binary(q, opt.amplitude, sn, opt.samples, seed, enabled));
    }
    emit_report(opt, out);
    return 0;
  }

  const auto d = opt.signal();
  const double sn = opt.resolve_sigma_n(d);
  bussgang::McOptions mc;
  mc.n_batches = batches;
  mc.parallel = parallel;
  const auto rep = bussgang::estimate_coefficients(q, d, sn, opt.samples, seed, mc);

  ordered_json out;
  out["config"] = opt.config_echo(d, sn, true);
  out["config"]["samples"] = opt.samples;
  out["config"]["seed"] = seed;
  out["report"] = bussgang::to_json(rep);
  emit_report(opt, out);
  return 0;
}

int run_figure(CommonOptions& opt, int figure_id, std::vector<double>& sigma_n_values,
               const std::string& grid_text) {
  opt.merge_config();
  bussgang::FigureOverrides ov;
  if (opt.given("--levels")) ov.levels = opt.levels;
  if (opt.given("--bits")) ov.levels = 1 << opt.bits;
  if (opt.given("--delta")) ov.delta = opt.delta;
  if (opt.given("--amplitude")) ov.amplitude = opt.amplitude;
  if (!sigma_n_values.empty()) {
    if (figure_id <= 2)
      ov.sigma_n_values = sigma_n_values;
    else if (sigma_n_values.size() == 1)
      ov.sigma_n = sigma_n_values[0];
    else
      throw UsageError("figures 3 and 4 take a single --sigma-n");
  }
  if (!grid_text.empty()) ov.grid = parse_grid(grid_text, figure_id <= 2 ? 0.05 : 0.005);
  emit_table(opt, bussgang::emit_figure_data(figure_id, ov));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bussgang decomposition of a mid-rise quantizer: analytic coefficients, SDNR, "
               "interval optimization, and Monte Carlo validation"};
  app.require_subcommand(1);

  CommonOptions opt;

  auto* coeffs = app.add_subcommand("coeffs", "analytic Bussgang coefficients, both conventions");
  bool check_identities = false;
  opt.add_quantizer_flags(*coeffs, true);
  opt.add_signal_flags(*coeffs);
  opt.add_output_flags(*coeffs);
  coeffs->add_flag("--check-identities", check_identities,
                   "also report the cross-convention identity residuals");

  auto* sdnr = app.add_subcommand("sdnr", "signal to distortion plus noise ratio");
  auto* mu = app.add_subcommand("mu", "conditional output moments vs the signal value");
  auto* sweep = app.add_subcommand("sweep", "coefficients and SDNR over a delta grid");
  auto* optimize = app.add_subcommand("optimize", "SDNR-optimal quantization interval");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates or a BER experiment");
  auto* figure = app.add_subcommand("figure", "data tables behind the four standard plots");

  std::string mu_grid, sweep_grid, bracket, fig_grid;
  std::vector<double> mu_s_values, fig_sigma_n;
  bool ber_mode = false, parallel = false;
  std::string quantizer_mode = "both";
  int batches = 100;
  int figure_id = 0;

  // sdnr
  {
    CLI::App& c = *sdnr;
    opt.add_quantizer_flags(c, true);
    opt.add_signal_flags(c);
    opt.add_output_flags(c);
  }
  // mu
  {
    CLI::App& c = *mu;
    opt.add_quantizer_flags(c, true);
    c.add_option("--sigma-n", opt.sigma_n, "noise standard deviation");
    c.add_option("--s", mu_s_values, "signal values to evaluate at");
    c.add_option("--s-grid", mu_grid, "signal grid lo:hi:step (default -5:5:0.05)");
    opt.add_output_flags(c);
  }
  // sweep
  {
    CLI::App& c = *sweep;
    opt.add_quantizer_flags(c, false);
    opt.add_signal_flags(c);
    c.add_option("--grid", sweep_grid, "delta grid lo:hi:step");
    opt.add_output_flags(c);
  }
  // optimize
  {
    CLI::App& c = *optimize;
    opt.add_quantizer_flags(c, false);
    opt.add_signal_flags(c);
    c.add_option("--bracket", bracket, "search bracket lo:hi");
    opt.add_output_flags(c);
  }
  // simulate
  {
    CLI::App& c = *simulate;
    opt.add_quantizer_flags(c, true);
    opt.add_signal_flags(c);
    opt.add_seed_flags(c);
    c.add_flag("--ber", ber_mode, "run the uncoded binary BER experiment");
    c.add_option("--quantizer", quantizer_mode, "BER experiment quantizer: on | off | both")
        ->check(CLI::IsMember({"on", "off", "both"}));
    c.add_option("--batches", batches, "batch count for standard errors");
    c.add_flag("--parallel", parallel, "evaluate batches concurrently");
    opt.add_output_flags(c);
  }
  // figure
  {
    CLI::App& c = *figure;
    c.add_option("id", figure_id, "figure number, 1-4")->required()->check(CLI::Range(1, 4));
    c.add_option("--bits", opt.bits, "quantizer bits override");
    c.add_option("--levels", opt.levels, "quantizer level count override");
    c.add_option("--delta", opt.delta, "quantization interval override (figures 1-2)");
    c.add_option("--amplitude", opt.amplitude, "signal amplitude override (figures 3-4)");
    c.add_option("--sigma-n", fig_sigma_n, "noise sigma override (repeatable for figures 1-2)");
    c.add_option("--grid", fig_grid, "grid override lo:hi:step");
    opt.cmd = &c;
    opt.add_output_flags(c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  }

  // flag presence checks must look at the subcommand that actually parsed
  if (const auto parsed = app.get_subcommands(); !parsed.empty()) opt.cmd = parsed.front();

  try {
    if (coeffs->parsed()) return run_coeffs(opt, check_identities);
    if (sdnr->parsed()) return run_sdnr(opt);
    if (mu->parsed()) return run_mu(opt, mu_grid, mu_s_values);
    if (sweep->parsed()) return run_sweep(opt, sweep_grid);
    if (optimize->parsed()) return run_optimize(opt, bracket);
    if (simulate->parsed()) return run_simulate(opt, ber_mode, quantizer_mode, batches, parallel);
    if (figure->parsed()) return run_figure(opt, figure_id, fig_sigma_n, fig_grid);
    std::cerr << "error: usage: no subcommand given\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: usage: " << e.what() << '\n';
    return 2;
  } catch (const bussgang::ConvergenceError& e) {
    std::cerr << "error: convergence: " << e.what() << " (best_estimate="
              << bussgang::format_number(e.best_estimate())
              << ", error_bound=" << bussgang::format_number(e.error_bound()) << ")\n";
    return 4;
  } catch (const bussgang::DomainError& e) {
    std::cerr << "error: domain: " << e.what() << " (quantity=" << e.quantity() << ")\n";
    return 3;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: io: " << e.what() << '\n';
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << '\n';
    return 1;
  }
}
