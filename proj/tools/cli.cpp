#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "shapewave/datasets.hpp"
#include "shapewave/local_extract.hpp"
#include "shapewave/phase_estimate.hpp"
#include "shapewave/shape_extract.hpp"

namespace shapewave::cli {

namespace fs = std::filesystem;

namespace {

// Argument problems found after CLI11 parsing; mapped to kExitUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path() && !fs::exists(path.parent_path()))
    throw Error(ErrorCode::IoError, "output directory " + path.parent_path().string() + " missing");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return f;
}

void write_columns(const fs::path& path, const char* header, std::span<const double> x,
                   std::span<const double> y) {
  auto f = open_out(path);
  f << header << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) f << fmt_double(x[i]) << ',' << fmt_double(y[i]) << '\n';
}

// "dir/name.csv" -> "dir/name" + suffix
fs::path sibling(const fs::path& base, const std::string& suffix) {
  fs::path stem = base;
  if (stem.extension() == ".csv") stem.replace_extension();
  return fs::path(stem.string() + suffix);
}

std::vector<double> shape_grid() {
  std::vector<double> tau(kShapeGridSize);
  for (std::size_t j = 0; j < tau.size(); ++j)
    tau[j] = 2. * std::numbers::pi * static_cast<double>(j) / static_cast<double>(tau.size());
  return tau;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SHAPEWAVE_SEED")) {
    std::uint64_t seed = 0;
    std::istringstream in(env);
    if (!(in >> seed) || !in.eof()) throw UsageError("SHAPEWAVE_SEED is not an unsigned integer");
    return seed;
  }
  return 0;
}

void require_file(const std::string& path, const char* what) {
  if (path.empty() || !fs::is_regular_file(path))
    throw UsageError(std::string(what) + " file not found: " + path);
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  std::string generator;
  std::string out;
  std::size_t samples = 4096;
  double sigma = 0.;
  std::optional<std::uint64_t> seed;
  int l_theta = 20;
  DuffingParams duffing;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
  const NoiseSpec noise{a.sigma, resolve_seed(a.seed)};
  const fs::path path = a.out;
  if (a.generator == "example1") {
    const auto ex = gen_example1(a.samples, noise);
    write_columns(path, "t,f", ex.signal.times(), ex.signal.values());
    write_columns(sibling(path, ".phase.csv"), "t,theta", ex.signal.times(), ex.phase);
    const auto tau = shape_grid();
    std::vector<double> s(tau.size());
    for (std::size_t j = 0; j < tau.size(); ++j) s[j] = ex.shape(tau[j]);
    write_columns(sibling(path, ".shape.csv"), "tau,s", tau, s);
  } else if (a.generator == "duffing") {
    const auto sig = gen_duffing(a.duffing, noise);
    write_columns(path, "t,f", sig.times(), sig.values());
  } else {
    const auto cosine = [](double tau) { return std::cos(tau); };
    const auto skewed = [](double tau) { return std::cos(tau + 0.5 * std::cos(2. * tau)); };
    auto sig = gen_morphing_shape(a.samples, cosine, skewed, a.l_theta);
    std::vector<double> noisy(sig.values().begin(), sig.values().end());
    add_gaussian_noise(noisy, noise);
    sig = Signal(std::vector<double>(sig.times().begin(), sig.times().end()), std::move(noisy));
    std::vector<double> theta(sig.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
      theta[i] = 2. * std::numbers::pi * a.l_theta * sig.times()[i];
    write_columns(path, "t,f", sig.times(), sig.values());
    write_columns(sibling(path, ".phase.csv"), "t,theta", sig.times(), theta);
  }
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

// --- shared extraction inputs -------------------------------------------------

struct InputArgs {
  std::string input;
  std::string phase_file;
  bool estimate = false;
  double lambda = 0.5;
  double bandwidth = 0.5;
  std::optional<double> hint;
  std::optional<int> band_limit;
  std::optional<std::size_t> grid_size;
  bool zero_dc = false;
  std::string out;
};

struct LoadedInput {
  Signal signal;
  PhaseFunction phase;
  std::size_t dropped = 0;  // trailing samples trimmed to whole periods
};

void check_input_args(const InputArgs& a) {
  require_file(a.input, "input");
  if (a.estimate == !a.phase_file.empty())
    throw UsageError("give exactly one of --phase FILE or --estimate-phase");
  if (!a.phase_file.empty()) require_file(a.phase_file, "phase");
  if (a.grid_size && !is_power_of_two(*a.grid_size))
    throw UsageError("--n must be a power of two");
}

LoadedInput load_input(const InputArgs& a) {
  Signal signal = load_signal_csv(a.input);
  if (a.estimate) {
    PhaseEstimateConfig cfg;
    cfg.smoothing_cutoff = a.lambda;
    cfg.bandwidth = a.bandwidth;
    cfg.fundamental_hint = a.hint;
    const std::size_t total = signal.size();
    auto [trimmed, phase] = trim_to_whole_periods(signal, estimate_raw_phase(signal, cfg));
    const std::size_t dropped = total - trimmed.size();
    return LoadedInput{std::move(trimmed), std::move(phase), dropped};
  }
  auto samples = load_phase_csv(a.phase_file);
  if (samples.times.size() != signal.size())
    throw Error(ErrorCode::MismatchedLengths, "phase file has " +
                                                  std::to_string(samples.times.size()) +
                                                  " rows, signal has " + std::to_string(signal.size()));
  for (std::size_t i = 0; i < signal.size(); ++i) {
    const double t = signal.times()[i];
    if (std::abs(samples.times[i] - t) > 1e-9 * std::max(1., std::abs(t)))
      throw Error(ErrorCode::MismatchedLengths,
                  "phase file time at row " + std::to_string(i) + " differs from the signal", i);
  }
  PhaseFunction phase = exact_phase_from_samples(signal, std::move(samples.phases));
  return LoadedInput{std::move(signal), std::move(phase), 0};
}

std::string default_prefix(const InputArgs& a, const char* suffix) {
  if (!a.out.empty()) return a.out;
  return sibling(a.input, suffix).string();
}

// --- extract -----------------------------------------------------------------

int cmd_extract(const InputArgs& a, std::ostream& out) {
  check_input_args(a);
  const LoadedInput in = load_input(a);
  ExtractOptions opts;
  opts.band_limit = a.band_limit;
  opts.grid_size = a.grid_size;
  opts.zero_dc = a.zero_dc;
  const ExtractionResult r = extract_shape(in.signal, in.phase, opts);
  const double rel = r.relative_residual(in.signal.values());

  const std::string prefix = default_prefix(a, ".extract");
  nlohmann::json j;
  j["K"] = r.shape.band_limit();
  j["l_theta"] = r.l_theta;
  j["n"] = r.grid_size;
  j["lambda"] = a.lambda;
  j["zero_dc"] = a.zero_dc;
  j["phase_source"] = a.estimate ? "estimate" : "exact-file";
  j["samples_used"] = in.signal.size();
  j["samples_dropped"] = in.dropped;
  auto coeffs = nlohmann::json::array();
  for (const cplx& c : r.shape.coeffs()) coeffs.push_back({c.real(), c.imag()});
  j["coefficients"] = coeffs;
  j["shape_convention"] = "s(tau) = c0 + 2 sum_k Re(c_k exp(i k tau)), tau = theta";
  j["singular_values"] = r.fit.singular_values;
  j["rank1_energy_fraction"] = r.fit.rank1_energy_fraction;
  j["objective"] = r.fit.objective_value;
  double rn = 0.;
  for (double v : r.residual) rn += v * v;
  j["residual_norm"] = std::sqrt(rn);
  j["relative_residual"] = rel;
  {
    auto f = open_out(prefix + ".json");
    f << j.dump(2) << '\n';
  }
  const auto tau = shape_grid();
  write_columns(prefix + ".shape.csv", "tau,s", tau, r.shape.sample());
  write_columns(prefix + ".envelope.csv", "t,a", in.signal.times(), r.envelope.values_time);
  write_columns(prefix + ".residual.csv", "t,r", in.signal.times(), r.residual);

  out << "K=" << r.shape.band_limit() << " l_theta=" << r.l_theta
      << " rank1=" << fmt_short(r.fit.rank1_energy_fraction) << " resid=" << fmt_short(rel)
      << " n=" << r.grid_size << " lambda=" << fmt_short(a.lambda) << '\n';
  return kExitOk;
}

// --- extract-local -------------------------------------------------------------

std::vector<std::size_t> parse_centers(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("--centers expects comma-separated sample indices");
    }
    if (pos != item.size()) throw UsageError("--centers expects comma-separated sample indices");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (!std::is_sorted(out.begin(), out.end())) throw UsageError("--centers must be ascending");
  return out;
}

int cmd_extract_local(const InputArgs& a, double mu, const std::string& centers, std::ostream& out) {
  check_input_args(a);
  WindowSpec spec;
  spec.mu = mu;
  if (!centers.empty()) spec.centers = parse_centers(centers);
  const LoadedInput in = load_input(a);
  const ShapeTrack track = extract_shape_track(in.signal, in.phase, spec, a.band_limit);

  int widest = 0;
  for (const auto& s : track.shapes)
    if (s) widest = std::max(widest, s->band_limit());

  const std::string path = a.out.empty() ? sibling(a.input, ".track.csv").string() : a.out;
  auto f = open_out(path);
  f << "t,drift,error,c0_re";
  for (int k = 1; k <= widest; ++k) f << ",c" << k << "_re,c" << k << "_im";
  f << '\n';
  std::size_t failures = 0;
  double largest_drift = 0.;
  for (std::size_t i = 0; i < track.size(); ++i) {
    f << fmt_double(track.centers[i]) << ',';
    if (track.drift[i]) {
      f << fmt_double(*track.drift[i]);
      largest_drift = std::max(largest_drift, *track.drift[i]);
    } else if (track.shapes[i]) {
      f << '0';
    }
    f << ',' << track.errors[i];
    if (!track.errors[i].empty()) ++failures;
    const auto& s = track.shapes[i];
    for (int k = 0; k <= widest; ++k) {
      const cplx c = s && k <= s->band_limit() ? s->coeffs()[static_cast<std::size_t>(k)] : cplx{};
      if (!s) {
        f << (k == 0 ? "," : ",,");
        continue;
      }
      f << ',' << fmt_double(c.real());
      if (k > 0) f << ',' << fmt_double(c.imag());
    }
    f << '\n';
  }
  out << "centers=" << track.size() << " failed=" << failures << " l_theta=" << in.phase.l_theta()
      << " max_drift=" << fmt_short(largest_drift) << " mu=" << fmt_short(mu)
      << " lambda=" << fmt_short(a.lambda) << '\n';
  return kExitOk;
}

void add_input_options(CLI::App* cmd, InputArgs& a) {
  cmd->add_option("--in,-i", a.input, "signal CSV (header t,f)")->required();
  cmd->add_option("--phase", a.phase_file, "phase CSV (header t,theta)");
  cmd->add_flag("--estimate-phase", a.estimate, "estimate the phase from the signal");
  cmd->add_option("--lambda", a.lambda, "phase smoothing cutoff, fraction of l_theta")
      ->check(CLI::Range(std::numeric_limits<double>::min(), 0.5));
  cmd->add_option("--bandwidth", a.bandwidth, "fundamental band half-width, fraction of f0")
      ->check(CLI::Range(std::numeric_limits<double>::min(), 0.999999));
  cmd->add_option("--fundamental", a.hint, "fundamental hint in cycles over the record");
  cmd->add_option("--K", a.band_limit, "band limit (number of harmonics)")->check(CLI::PositiveNumber);
  cmd->add_option("--n", a.grid_size, "phase grid size (power of two)")->check(CLI::PositiveNumber);
  cmd->add_flag("--zero-dc", a.zero_dc, "force c0 = 0 by dropping band 0");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive shape-function extraction for quasi-periodic signals"};
  app.name(args.empty() ? "shapewave" : args.front());
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a test signal");
  gen_cmd->add_option("generator", gen.generator, "example1 | duffing | morph")
      ->required()
      ->check(CLI::IsMember({"example1", "duffing", "morph"}));
  gen_cmd->add_option("--out,-o", gen.out, "signal CSV path")->required();
  gen_cmd->add_option("--n", gen.samples, "samples (example1, morph)")->check(CLI::Range(512, 1 << 24));
  gen_cmd->add_option("--sigma", gen.sigma, "Gaussian noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "noise seed (falls back to SHAPEWAVE_SEED)");
  gen_cmd->add_option("--l-theta", gen.l_theta, "periods in the morphing fixture")
      ->check(CLI::Range(kMinPeriods, 100000));
  gen_cmd->add_option("--epsilon", gen.duffing.epsilon, "Duffing nonlinearity weight");
  gen_cmd->add_option("--gamma", gen.duffing.gamma, "Duffing forcing amplitude");
  gen_cmd->add_option("--beta", gen.duffing.beta, "Duffing forcing frequency");
  gen_cmd->add_option("--omega", gen.duffing.omega_exponent, "Duffing exponent (u^(1+omega))")
      ->check(CLI::PositiveNumber);
  gen_cmd->add_option("--u0", gen.duffing.u0, "Duffing initial displacement");
  gen_cmd->add_option("--v0", gen.duffing.v0, "Duffing initial velocity");
  gen_cmd->add_option("--t-span", gen.duffing.t_span, "Duffing time span")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--dt", gen.duffing.dt, "Duffing RK4 step")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--samples", gen.duffing.samples, "Duffing output samples")
      ->check(CLI::Range(16, 1 << 24));

  InputArgs ext;
  auto* ext_cmd = app.add_subcommand("extract", "extract one shape function");
  add_input_options(ext_cmd, ext);
  ext_cmd->add_option("--out,-o", ext.out, "output prefix");

  InputArgs loc;
  double mu = kDefaultMu;
  std::string centers;
  auto* loc_cmd = app.add_subcommand("extract-local", "track the shape function over time");
  add_input_options(loc_cmd, loc);
  loc_cmd->add_option("--mu", mu, "window half-width in multiples of pi (>= 1)")
      ->check(CLI::Range(1., 1e9));
  loc_cmd->add_option("--centers", centers, "comma-separated centre sample indices");
  loc_cmd->add_option("--out,-o", loc.out, "track CSV path");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("shapewave");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*ext_cmd) return cmd_extract(ext, out);
    return cmd_extract_local(loc, mu, centers, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitPipeline;
  }
}

}  // namespace shapewave::cli
