#pragma once

#include <vector>

#include "nhpump/model.hpp"
#include "nhpump/topology.hpp"

namespace nhpump {

struct GapReport {
  double mu = 0.0;
  double min_abs_e = 0.0;
  PhasePoint argmin{};
  double ep_defect_at_argmin = 0.0;
};

struct MinGapOptions {
  /// Subdivision rounds around each candidate minimum.
  int rounds = 6;
  /// Each round shrinks the window spacing by this factor.
  int factor = 10;
  /// Number of coarse local minima that get refined.
  int candidates = 4;
};

/// Minimum of |E| over the torus: coarse grid scan, then deterministic grid
/// subdivision around the lowest local minima.
GapReport min_gap(const DriveParams& p, Boundary boundary, const TorusGrid& grid,
                  const MinGapOptions& opts = {});

struct MuInterval {
  double lo;
  double hi;

  bool contains(double mu, double tol = 0.0) const { return mu >= lo - tol && mu <= hi + tol; }
};

struct GapScanOptions {
  double tol = 1e-3;
  int grid = 128;
  MinGapOptions refine{};
  /// Golden-section iterations used to refine local minima of the gap in mu.
  int mu_refine_iterations = 40;
};

struct GapScan {
  double gamma = 0.0;
  Boundary boundary = Boundary::PBC;
  /// One report per computed sweep point (excluded mu are skipped).
  std::vector<GapReport> reports;
  /// Per report: min_abs_e < tol.
  std::vector<bool> gapless;
  /// Local minima of the gap refined in mu between sweep points.
  std::vector<GapReport> refined;
  /// Merged gapless intervals, sorted.
  std::vector<MuInterval> intervals;
  /// OBC only: mu = +-gamma, where the GBZ degenerates.
  std::vector<double> excluded;

  bool covers(double mu, double tol) const;
};

std::vector<double> mu_grid(double mu_min, double mu_max, int n_mu);

GapScan gapless_intervals(double gamma, double mu_min, double mu_max, int n_mu,
                          Boundary boundary, const GapScanOptions& opts = {});

}  // namespace nhpump
