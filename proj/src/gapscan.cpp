#include "nhpump/gapscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "nhpump/eigensystem.hpp"
#include "nhpump/gbz.hpp"

namespace nhpump {

namespace {

double wrap(double x) {
  x = std::fmod(x, two_pi);
  return x < 0.0 ? x + two_pi : x;
}

struct Probe {
  double value;
  PhasePoint at;
};

bool is_excluded(double mu, double gamma, Boundary boundary) {
  return boundary == Boundary::OBC &&
         std::abs(std::abs(mu) - gamma) <= 1e-12 * std::max(1.0, std::abs(gamma));
}

}  // namespace

GapReport min_gap(const DriveParams& p, Boundary boundary, const TorusGrid& grid,
                  const MinGapOptions& opts) {
  grid.validate();
  const HamiltonianFn h = make_hamiltonian(p, boundary);
  auto abs_e = [&](double k, double t) {
    return std::abs(band_energy(from_matrix(h({k, t}))));
  };

  const int nk = grid.n_momentum, nt = grid.n_phase;
  std::vector<double> coarse(static_cast<std::size_t>(nk) * nt);
  for (int i = 0; i < nk; ++i)
    for (int j = 0; j < nt; ++j) coarse[i * nt + j] = abs_e(grid.momentum(i), grid.phase(j));

  auto value = [&](int i, int j) { return coarse[((i + nk) % nk) * nt + (j + nt) % nt]; };
  std::vector<Probe> minima;
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nt; ++j) {
      const double v = value(i, j);
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di)
        for (int dj = -1; dj <= 1 && local; ++dj)
          if ((di || dj) && value(i + di, j + dj) < v) local = false;
      if (local) minima.push_back({v, {grid.momentum(i), grid.phase(j)}});
    }
  }
  std::sort(minima.begin(), minima.end(),
            [](const Probe& a, const Probe& b) { return a.value < b.value; });
  if (minima.size() > static_cast<std::size_t>(opts.candidates)) minima.resize(opts.candidates);

  Probe best{std::numeric_limits<double>::infinity(), {}};
  for (Probe centre : minima) {
    double half_k = grid.momentum_step(), half_t = grid.phase_step();
    for (int round = 0; round < opts.rounds; ++round) {
      const double sk = half_k / opts.factor, st = half_t / opts.factor;
      Probe local = centre;
      for (int a = -opts.factor; a <= opts.factor; ++a) {
        for (int b = -opts.factor; b <= opts.factor; ++b) {
          const double k = centre.at.momentum + a * sk;
          const double t = centre.at.drive_phase + b * st;
          const double v = abs_e(k, t);
          if (v < local.value) local = {v, {k, t}};
        }
      }
      centre = local;
      half_k = sk;
      half_t = st;
    }
    if (centre.value < best.value) best = centre;
  }

  GapReport report;
  report.mu = p.mu;
  report.min_abs_e = best.value;
  report.argmin = {wrap(best.at.momentum), wrap(best.at.drive_phase)};
  report.ep_defect_at_argmin = ep_defect(from_matrix(h(report.argmin)));
  return report;
}

bool GapScan::covers(double mu, double tol) const {
  return std::any_of(intervals.begin(), intervals.end(),
                     [&](const MuInterval& iv) { return iv.contains(mu, tol); });
}

std::vector<double> mu_grid(double mu_min, double mu_max, int n_mu) {
  if (n_mu < 2) throw std::invalid_argument("mu grid needs at least two points");
  std::vector<double> out(n_mu);
  for (int i = 0; i < n_mu; ++i) out[i] = mu_min + (mu_max - mu_min) * i / (n_mu - 1);
  return out;
}

GapScan gapless_intervals(double gamma, double mu_min, double mu_max, int n_mu,
                          Boundary boundary, const GapScanOptions& opts) {
  if (n_mu < 50) throw std::invalid_argument("gapless_intervals needs n_mu >= 50");
  if (!(mu_max > mu_min)) throw std::invalid_argument("empty mu range");

  GapScan scan;
  scan.gamma = gamma;
  scan.boundary = boundary;
  const TorusGrid grid{opts.grid, opts.grid, boundary};
  auto report_at = [&](double mu) {
    DriveParams p;
    p.mu = mu;
    p.gamma = gamma;
    return min_gap(p, boundary, grid, opts.refine);
  };

  if (boundary == Boundary::OBC) {
    for (double x : {-std::abs(gamma), std::abs(gamma)})
      if (x >= mu_min && x <= mu_max &&
          (scan.excluded.empty() || scan.excluded.back() != x))
        scan.excluded.push_back(x);
  }

  // Points separated by an excluded mu belong to different runs and are
  // never merged or bracketed together.
  const auto mus = mu_grid(mu_min, mu_max, n_mu);
  std::vector<int> run_id;
  for (double mu : mus) {
    if (is_excluded(mu, gamma, boundary)) continue;
    scan.reports.push_back(report_at(mu));
    scan.gapless.push_back(scan.reports.back().min_abs_e < opts.tol);
    run_id.push_back(static_cast<int>(
        std::count_if(scan.excluded.begin(), scan.excluded.end(),
                      [mu](double x) { return x < mu; })));
  }

  const std::size_t n = scan.reports.size();
  for (std::size_t i = 0; i < n;) {
    if (!scan.gapless[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && scan.gapless[j + 1] && run_id[j + 1] == run_id[i]) ++j;
    MuInterval iv{scan.reports[i].mu, scan.reports[j].mu};
    // bisect each edge against its gapped neighbour
    auto edge = [&](double gapped, double gapless) {
      std::optional<GapReport> inner;
      for (int it = 0; it < opts.mu_refine_iterations; ++it) {
        const double mid = 0.5 * (gapped + gapless);
        const GapReport r = report_at(mid);
        if (r.min_abs_e < opts.tol) {
          gapless = mid;
          inner = r;
        } else {
          gapped = mid;
        }
      }
      if (inner) scan.refined.push_back(*inner);
      return gapless;
    };
    if (i > 0 && run_id[i - 1] == run_id[i]) iv.lo = edge(scan.reports[i - 1].mu, iv.lo);
    if (j + 1 < n && run_id[j + 1] == run_id[j]) iv.hi = edge(scan.reports[j + 1].mu, iv.hi);
    scan.intervals.push_back(iv);
    i = j + 1;
  }

  // Isolated closures between sweep points: golden-section on local minima.
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (scan.gapless[i] || scan.gapless[i - 1] || scan.gapless[i + 1]) continue;
    if (run_id[i - 1] != run_id[i] || run_id[i + 1] != run_id[i]) continue;
    const double v = scan.reports[i].min_abs_e;
    if (v > scan.reports[i - 1].min_abs_e || v > scan.reports[i + 1].min_abs_e) continue;

    double a = scan.reports[i - 1].mu, b = scan.reports[i + 1].mu;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    GapReport rc = report_at(c), rd = report_at(d);
    for (int it = 0; it < opts.mu_refine_iterations; ++it) {
      if (rc.min_abs_e < rd.min_abs_e) {
        b = d;
        d = c;
        rd = rc;
        c = b - ratio * (b - a);
        rc = report_at(c);
      } else {
        a = c;
        c = d;
        rc = rd;
        d = a + ratio * (b - a);
        rd = report_at(d);
      }
    }
    GapReport best = rc.min_abs_e < rd.min_abs_e ? rc : rd;
    if (scan.reports[i].min_abs_e < best.min_abs_e) best = scan.reports[i];
    scan.refined.push_back(best);
    if (best.min_abs_e < opts.tol) scan.intervals.push_back({best.mu, best.mu});
  }

  std::sort(scan.intervals.begin(), scan.intervals.end(),
            [](const MuInterval& x, const MuInterval& y) { return x.lo < y.lo; });
  return scan;
}

}  // namespace nhpump
