#include "nhpump/cli.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "io.hpp"
#include "nhpump/eigensystem.hpp"
#include "nhpump/errors.hpp"
#include "nhpump/gapscan.hpp"
#include "nhpump/gbz.hpp"
#include "nhpump/pump.hpp"
#include "nhpump/realspace.hpp"
#include "nhpump/topology.hpp"

namespace nhpump::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string output_dir = ".";
  int jobs = 0;
  double gamma = 0.3;
  double delta = 1.0;
  std::string boundary = "pbc";
};

struct SweepOptions {
  std::vector<double> mu;
  double mu_min = -1.0;
  double mu_max = 1.0;
  int n_mu = 81;

  std::vector<double> values() const { return mu.empty() ? mu_grid(mu_min, mu_max, n_mu) : mu; }
};

/// Outcome of one sweep point; a failed point keeps the error for reporting.
struct PointStatus {
  std::string name = "ok";
  std::string message;
  bool ok() const { return name == "ok"; }
};

class Context {
 public:
  Context(const CommonOptions& common, std::string command, int argc, const char* const* argv)
      : common_(common), command_(std::move(command)), manifest_(command_, argc, argv) {
    fs::create_directories(common_.output_dir);
    manifest_.parameters()["gamma"] = common_.gamma;
    manifest_.parameters()["delta"] = common_.delta;
  }

  fs::path path(const std::string& suffix = "") const {
    return fs::path(common_.output_dir) / (command_ + suffix + ".csv");
  }
  CsvWriter csv(const std::string& suffix, std::vector<std::string> header) {
    CsvWriter w(path(suffix), std::move(header));
    manifest_.add_output(w.path());
    return w;
  }
  Manifest& manifest() { return manifest_; }
  void finish() {
    manifest_.write(fs::path(common_.output_dir) / (command_ + ".manifest.json"));
  }
  DriveParams params(double mu, double adiabatic_factor = 1.0) const {
    DriveParams p;
    p.mu = mu;
    p.gamma = common_.gamma;
    p.delta = common_.delta;
    p.adiabatic_factor = adiabatic_factor;
    p.validate();
    return p;
  }
  Boundary boundary() const { return parse_boundary(common_.boundary); }
  int jobs() const { return resolve_jobs(common_.jobs); }

 private:
  CommonOptions common_;
  std::string command_;
  Manifest manifest_;
};

template <class F>
PointStatus guarded(F&& f) {
  try {
    f();
    return {};
  } catch (const DomainError& e) {
    return {e.name(), e.what()};
  }
}

void add_common(CLI::App* cmd, CommonOptions& c, bool with_boundary) {
  cmd->add_option("--output-dir,-o", c.output_dir, "Directory for CSV and manifest output")
      ->capture_default_str();
  cmd->add_option("--jobs,-j", c.jobs, "Worker threads (fallback: NHPUMP_JOBS, else 1)");
  cmd->add_option("--gamma", c.gamma, "Nonreciprocity")->capture_default_str();
  cmd->add_option("--delta", c.delta, "Staggered potential amplitude")->capture_default_str();
  if (with_boundary)
    cmd->add_option("--boundary", c.boundary, "pbc or obc")
        ->check(CLI::IsMember({"pbc", "obc"}))
        ->capture_default_str();
}

void add_sweep(CLI::App* cmd, SweepOptions& s) {
  cmd->add_option("--mu", s.mu, "Explicit mu values (comma separated)")->delimiter(',');
  cmd->add_option("--mu-min", s.mu_min)->capture_default_str();
  cmd->add_option("--mu-max", s.mu_max)->capture_default_str();
  cmd->add_option("--n-mu", s.n_mu)->check(CLI::PositiveNumber)->capture_default_str();
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  double mu = 0.5;
  double t = 0.0;
  int n = 401;
};

int cmd_spectrum(Context& ctx, const SpectrumArgs& a, std::ostream& out) {
  if (a.n < 2) throw std::invalid_argument("--n must be at least 2");
  const DriveParams p = ctx.params(a.mu);
  std::vector<double> momenta(a.n);
  for (int j = 0; j < a.n; ++j)
    momenta[j] = -std::numbers::pi + two_pi * j / (a.n - 1);
  const auto samples = band_spectrum(p, ctx.boundary(), a.t, momenta);

  auto csv = ctx.csv("", {"momentum", "re_e_plus", "im_e_plus", "re_e_minus", "im_e_minus"});
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    csv.row(s.momentum, s.plus.real(), s.plus.imag(), s.minus.real(), s.minus.imag());
    gap = std::min(gap, std::abs(s.plus));
  }
  auto& m = ctx.manifest();
  m.parameters()["mu"] = a.mu;
  m.parameters()["t"] = a.t;
  m.parameters()["boundary"] = to_string(ctx.boundary());
  m.grid()["n"] = a.n;
  m.derived()["min_abs_e_on_line"] = gap;
  if (ctx.boundary() == Boundary::OBC) m.derived()["gbz_radius"] = gbz_radius(p);
  out << "min |E| along the line: " << format_double(gap) << '\n';
  return ok;
}

// ---------------------------------------------------------------------------

struct GapscanArgs {
  double mu_min = -1.0;
  double mu_max = 1.0;
  int n_mu = 201;
  int grid = 128;
  double tol = 1e-3;
};

int cmd_gapscan(Context& ctx, const GapscanArgs& a, std::ostream& out) {
  GapScanOptions opts;
  opts.tol = a.tol;
  opts.grid = a.grid;
  const Boundary boundary = ctx.boundary();
  const GapScan scan = gapless_intervals(ctx.params(0.0).gamma, a.mu_min, a.mu_max, a.n_mu,
                                         boundary, opts);

  auto rows = ctx.csv("", {"mu", "min_abs_e", "argmin_momentum", "argmin_phase", "ep_defect",
                           "gapless", "source"});
  for (std::size_t i = 0; i < scan.reports.size(); ++i) {
    const auto& r = scan.reports[i];
    rows.row(r.mu, r.min_abs_e, r.argmin.momentum, r.argmin.drive_phase, r.ep_defect_at_argmin,
             static_cast<bool>(scan.gapless[i]), "sweep");
  }
  for (const auto& r : scan.refined)
    rows.row(r.mu, r.min_abs_e, r.argmin.momentum, r.argmin.drive_phase, r.ep_defect_at_argmin,
             r.min_abs_e < a.tol, "refined");

  auto summary = ctx.csv("_intervals", {"kind", "mu_lo", "mu_hi"});
  nlohmann::json intervals = nlohmann::json::array();
  for (const auto& iv : scan.intervals) {
    summary.row("gapless", iv.lo, iv.hi);
    intervals.push_back({iv.lo, iv.hi});
    out << "gapless [" << format_double(iv.lo) << ", " << format_double(iv.hi) << "]\n";
  }
  for (double x : scan.excluded) {
    summary.row("excluded", x, x);
    out << "excluded " << format_double(x) << '\n';
  }

  auto& m = ctx.manifest();
  m.parameters()["boundary"] = to_string(boundary);
  m.parameters()["mu_min"] = a.mu_min;
  m.parameters()["mu_max"] = a.mu_max;
  m.grid()["n_mu"] = a.n_mu;
  m.grid()["torus"] = a.grid;
  m.grid()["refine_rounds"] = opts.refine.rounds;
  m.grid()["refine_factor"] = opts.refine.factor;
  m.tolerances()["gapless_tol"] = a.tol;
  m.derived()["gapless_intervals"] = intervals;
  m.derived()["excluded"] = scan.excluded;
  return ok;
}

// ---------------------------------------------------------------------------

struct ChernArgs {
  SweepOptions sweep;
  int grid = 128;
  std::string band = "minus";
  double gap_tol = 1e-6;
};

struct ChernRow {
  double mu = 0.0;
  double plaquette = 0.0;
  double derivative = 0.0;
  bool converged = false;
  PointStatus status;
};

int cmd_chern(Context& ctx, const ChernArgs& a, std::ostream& out, std::ostream& err) {
  const auto mus = a.sweep.values();
  const Band band = parse_band(a.band);
  const TorusGrid grid{a.grid, a.grid, ctx.boundary()};
  grid.validate();
  ChernOptions opts;
  opts.gap_tol = a.gap_tol;

  const auto rows = parallel_map(mus.size(), ctx.jobs(), [&](std::size_t i) {
    ChernRow row;
    row.mu = mus[i];
    row.plaquette = row.derivative = nan();
    row.status = guarded([&] {
      const DriveParams p = ctx.params(mus[i]);
      const ChernResult plaq = chern_plaquette(p, band, grid, opts);
      row.plaquette = plaq.value;
      row.converged = plaq.converged;
      row.derivative = chern_derivative(p, band, grid, opts).value;
    });
    return row;
  });
  if (rows.size() == 1 && !rows[0].status.ok()) {
    err << "error: " << rows[0].status.name << ": " << rows[0].status.message << '\n';
    return domain_error;
  }

  auto csv = ctx.csv("", {"mu", "c_plaquette", "c_derivative", "converged", "status"});
  nlohmann::json values = nlohmann::json::array();
  for (const auto& r : rows) {
    csv.row(r.mu, r.plaquette, r.derivative, r.converged, r.status.name);
    if (r.status.ok()) values.push_back({r.mu, std::lround(r.plaquette)});
  }
  out << "computed " << rows.size() << " points\n";

  auto& m = ctx.manifest();
  m.parameters()["boundary"] = to_string(ctx.boundary());
  m.parameters()["band"] = a.band;
  m.parameters()["mu"] = mus;
  m.grid()["torus"] = a.grid;
  m.tolerances()["gap_tol"] = a.gap_tol;
  m.tolerances()["ep_tol"] = opts.eigen.ep_tol;
  m.derived()["chern"] = values;
  return ok;
}

// ---------------------------------------------------------------------------

struct PumpArgs {
  SweepOptions sweep;
  std::string band = "minus";
  double adiabatic_factor = 1.0;
  int steps = 4000;
  int n_k = 64;
  int grid = 128;
};

struct PumpRow {
  double mu = 0.0;
  PumpResult result;
  PointStatus status;
};

int cmd_pump(Context& ctx, const PumpArgs& a, std::ostream& out, std::ostream& err) {
  const auto mus = a.sweep.values();
  const Band band = parse_band(a.band);
  const TorusGrid grid{a.n_k, a.grid, ctx.boundary()};
  grid.validate();
  PumpOptions opts;
  opts.n_steps = a.steps;
  if (a.steps < 1) throw std::invalid_argument("--steps must be positive");

  const auto rows = parallel_map(mus.size(), ctx.jobs(), [&](std::size_t i) {
    PumpRow row;
    row.mu = mus[i];
    row.status = guarded([&] {
      row.result = bod_cycle(ctx.params(mus[i], a.adiabatic_factor), band, grid, opts);
    });
    return row;
  });
  if (rows.size() == 1 && !rows[0].status.ok()) {
    err << "error: " << rows[0].status.name << ": " << rows[0].status.message << '\n';
    return domain_error;
  }

  auto csv = ctx.csv("", {"mu", "re_bod", "im_bod", "chern", "max_abs_im", "im_range", "status"});
  auto series = ctx.csv("_im_series", {"mu", "phase", "max_im", "min_im"});
  nlohmann::json derived = nlohmann::json::array();
  for (const auto& r : rows) {
    if (!r.status.ok()) {
      csv.row(r.mu, nan(), nan(), nan(), nan(), nan(), r.status.name);
      continue;
    }
    const auto& res = r.result;
    const double chern = res.chern_reference ? res.chern_reference->value : nan();
    const std::string status = res.chern_reference ? "ok" : "chern:" + res.chern_error;
    csv.row(r.mu, res.bod.real(), res.bod.imag(), chern, res.im_stats.max_abs_im,
            res.im_stats.im_range, status);
    for (const auto& s : res.im_stats.im_series) series.row(r.mu, s.phase, s.max_im, s.min_im);
    derived.push_back({{"mu", r.mu},
                       {"re_bod", res.bod.real()},
                       {"im_bod", res.bod.imag()},
                       {"chern", chern},
                       {"max_overlap_drift", res.max_overlap_drift}});
    out << "mu " << format_double(r.mu) << ": Re BOD " << format_double(res.bod.real())
        << ", C " << format_double(chern) << '\n';
  }

  auto& m = ctx.manifest();
  m.parameters()["boundary"] = to_string(ctx.boundary());
  m.parameters()["band"] = a.band;
  m.parameters()["adiabatic_factor"] = a.adiabatic_factor;
  m.parameters()["mu"] = mus;
  m.grid()["steps"] = a.steps;
  m.grid()["n_k"] = a.n_k;
  m.grid()["chern_phase_points"] = a.grid;
  m.tolerances()["collapse_tol"] = opts.collapse_tol;
  m.tolerances()["gap_tol"] = opts.chern.gap_tol;
  m.derived()["points"] = derived;
  return ok;
}

// ---------------------------------------------------------------------------

struct GbzArgs {
  double mu = 0.5;
  double t = 0.3;
  int n_phi = 64;
};

int cmd_gbz(Context& ctx, const GbzArgs& a, std::ostream& out) {
  const DriveParams p = ctx.params(a.mu);
  const GBZContour contour = gbz_contour(p, a.t, a.n_phi);
  auto csv = ctx.csv("", {"phi", "re_beta", "im_beta", "abs_beta"});
  for (const auto& s : contour.samples)
    for (const cplx beta : {s.beta_pair.first, s.beta_pair.second})
      csv.row(s.phi, beta.real(), beta.imag(), std::abs(beta));

  auto& m = ctx.manifest();
  m.parameters()["mu"] = a.mu;
  m.parameters()["t"] = a.t;
  m.grid()["n_phi"] = a.n_phi;
  m.derived()["gbz_radius"] = gbz_radius(p);
  m.derived()["swept_radius"] = contour.radius;
  m.derived()["complex_branch"] = contour.complex_branch;
  out << "Gamma = " << format_double(gbz_radius(p)) << '\n';
  if (contour.complex_branch) out << "note: mu^2 < gamma^2, principal branch of sqrt(mu^2-gamma^2)\n";
  return ok;
}

// ---------------------------------------------------------------------------

struct OracleArgs {
  double mu = 0.5;
  double t = 0.3;
  std::vector<int> n_cells{15, 30, 60};
  int theta_factor = 4;
};

int cmd_oracle(Context& ctx, const OracleArgs& a, std::ostream& out) {
  const DriveParams p = ctx.params(a.mu);
  gbz_radius(p);
  struct Entry {
    std::vector<cplx> exact, gbz;
    double distance;
  };
  const auto entries = parallel_map(a.n_cells.size(), ctx.jobs(), [&](std::size_t i) {
    const int n = a.n_cells[i];
    Entry e;
    e.exact = exact_spectrum(build_chain(p, a.t, n));
    const auto samples = obc_spectrum_gbz(p, a.t, a.theta_factor * n);
    e.gbz = flatten(samples);
    e.distance = spectral_distance(e.exact, e.gbz);
    return e;
  });

  auto spectra = ctx.csv("_spectra", {"n_cells", "source", "re_e", "im_e"});
  auto table = ctx.csv("_distance", {"n_cells", "distance"});
  nlohmann::json distances = nlohmann::json::object();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const int n = a.n_cells[i];
    for (const cplx e : entries[i].exact) spectra.row(n, "exact", e.real(), e.imag());
    for (const cplx e : entries[i].gbz) spectra.row(n, "gbz", e.real(), e.imag());
    table.row(n, entries[i].distance);
    distances[std::to_string(n)] = entries[i].distance;
    out << "N = " << n << ": d = " << format_double(entries[i].distance) << '\n';
  }
  auto& m = ctx.manifest();
  m.parameters()["mu"] = a.mu;
  m.parameters()["t"] = a.t;
  m.grid()["n_cells"] = a.n_cells;
  m.grid()["theta_points_per_cell"] = a.theta_factor;
  m.derived()["gbz_radius"] = gbz_radius(p);
  m.derived()["spectral_distance"] = distances;
  return ok;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-Hermitian Rice-Mele pumping toolkit", "nhpump"};
  app.require_subcommand(1);
  app.set_version_flag("--version", NHPUMP_VERSION);

  CommonOptions common;
  std::function<int()> action;
  std::string name;

  SpectrumArgs spectrum;
  auto* c_spectrum = app.add_subcommand("spectrum", "Band energies along a momentum line");
  add_common(c_spectrum, common, true);
  c_spectrum->add_option("--mu", spectrum.mu)->capture_default_str();
  c_spectrum->add_option("--t", spectrum.t, "Drive phase")->capture_default_str();
  c_spectrum->add_option("--n", spectrum.n, "Momentum samples over [-pi, pi]")
      ->capture_default_str();

  GapscanArgs gapscan;
  auto* c_gapscan = app.add_subcommand("gapscan", "Gapless mu intervals");
  add_common(c_gapscan, common, true);
  c_gapscan->add_option("--mu-min", gapscan.mu_min)->capture_default_str();
  c_gapscan->add_option("--mu-max", gapscan.mu_max)->capture_default_str();
  c_gapscan->add_option("--n-mu", gapscan.n_mu)->capture_default_str();
  c_gapscan->add_option("--grid", gapscan.grid)->capture_default_str();
  c_gapscan->add_option("--tol", gapscan.tol)->capture_default_str();

  ChernArgs chern;
  auto* c_chern = app.add_subcommand("chern", "Biorthogonal Chern number over a mu sweep");
  add_common(c_chern, common, true);
  add_sweep(c_chern, chern.sweep);
  c_chern->add_option("--grid", chern.grid)->capture_default_str();
  c_chern->add_option("--band", chern.band)
      ->check(CLI::IsMember({"plus", "minus"}))
      ->capture_default_str();
  c_chern->add_option("--gap-tol", chern.gap_tol)->capture_default_str();

  PumpArgs pump;
  auto* c_pump = app.add_subcommand("pump", "Biorthogonal displacement over one drive cycle");
  add_common(c_pump, common, true);
  add_sweep(c_pump, pump.sweep);
  c_pump->add_option("--band", pump.band)
      ->check(CLI::IsMember({"plus", "minus"}))
      ->capture_default_str();
  c_pump->add_option("--A", pump.adiabatic_factor, "Drive slowdown factor")
      ->capture_default_str();
  c_pump->add_option("--steps", pump.steps, "RK4 steps per cycle")->capture_default_str();
  c_pump->add_option("--n-k", pump.n_k, "Momenta")->capture_default_str();
  c_pump->add_option("--grid", pump.grid, "Phase points of the Chern reference")
      ->capture_default_str();

  GbzArgs gbz;
  auto* c_gbz = app.add_subcommand("gbz", "GBZ roots from the phi sweep");
  add_common(c_gbz, common, false);
  c_gbz->add_option("--mu", gbz.mu)->capture_default_str();
  c_gbz->add_option("--t", gbz.t)->capture_default_str();
  c_gbz->add_option("--n-phi", gbz.n_phi)->capture_default_str();

  OracleArgs oracle;
  auto* c_oracle = app.add_subcommand("oracle", "Finite open chain versus GBZ spectrum");
  add_common(c_oracle, common, false);
  c_oracle->add_option("--mu", oracle.mu)->capture_default_str();
  c_oracle->add_option("--t", oracle.t)->capture_default_str();
  c_oracle->add_option("--n-cells", oracle.n_cells)->delimiter(',')->capture_default_str();
  c_oracle->add_option("--theta-factor", oracle.theta_factor)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage_error;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    Context ctx(common, chosen->get_name(), argc, argv);
    int code = ok;
    if (chosen == c_spectrum) code = cmd_spectrum(ctx, spectrum, out);
    else if (chosen == c_gapscan) code = cmd_gapscan(ctx, gapscan, out);
    else if (chosen == c_chern) code = cmd_chern(ctx, chern, out, err);
    else if (chosen == c_pump) code = cmd_pump(ctx, pump, out, err);
    else if (chosen == c_gbz) code = cmd_gbz(ctx, gbz, out);
    else code = cmd_oracle(ctx, oracle, out);
    if (code == ok) ctx.finish();
    return code;
  } catch (const DomainError& e) {
    err << "error: " << e.name() << ": " << e.what() << '\n';
    return domain_error;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  }
}

}  // namespace nhpump::cli
