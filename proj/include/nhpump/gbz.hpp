#pragma once

#include <span>
#include <utility>
#include <vector>

#include "nhpump/model.hpp"

namespace nhpump {

/// sqrt(|t1 - gamma| / |t1 + gamma|). Throws DegenerateGBZ when |mu| == gamma.
double gbz_radius(const DriveParams& p);

/// Laurent coefficients of E^2(beta) = c_minus / beta + c_zero + c_plus * beta,
/// the squared band energy with e^{ik} replaced by beta.
struct EnergySquaredLaurent {
  cplx c_minus, c_zero, c_plus;

  cplx operator()(cplx beta) const { return c_minus / beta + c_zero + c_plus * beta; }
};

EnergySquaredLaurent energy_squared_laurent(const DriveParams& p, double drive_phase);

/// Both roots of a z^2 + b z + c = 0 (a != 0), ordered by magnitude.
std::pair<cplx, cplx> solve_quadratic(cplx a, cplx b, cplx c);

/// Roots beta of E^2(beta) - E^2(beta e^{i phi}) = 0. Throws DegenerateDrive
/// if t2 vanishes, DegeneratePhi if phi is a multiple of 2 pi and
/// DegenerateGBZ if mu == -gamma (vanishing leading coefficient).
std::pair<cplx, cplx> beta_roots(const DriveParams& p, double drive_phase, double phi);

/// Roots of the characteristic beta-polynomial at energy squared e2,
/// beta * det(H(beta) - E) = 0, ordered by magnitude.
std::pair<cplx, cplx> characteristic_roots(const DriveParams& p, double drive_phase,
                                           cplx energy_squared);

struct GbzSample {
  double phi;
  std::pair<cplx, cplx> beta_pair;
};

struct GBZContour {
  double radius = 0.0;
  std::vector<GbzSample> samples;
  int pole_order = 1;
  int half_degree = 1;
  /// mu^2 < gamma^2: sqrt(mu^2 - gamma^2) is taken on its principal branch.
  bool complex_branch = false;
};

/// Sweeps phi over n_phi interior points of (0, 2 pi), keeps the roots
/// satisfying |beta_M| = |beta_{M+1}| and checks the common magnitude
/// against gbz_radius.
GBZContour gbz_contour(const DriveParams& p, double drive_phase, int n_phi);

struct SpectrumSample {
  double momentum;
  cplx plus;
  cplx minus;
};

std::vector<double> periodic_grid(int n);

/// Band energies of the PBC or GBZ Hamiltonian along the given momenta.
std::vector<SpectrumSample> band_spectrum(const DriveParams& p, Boundary boundary,
                                          double drive_phase,
                                          std::span<const double> momenta);

/// +-E on a uniform theta grid of the GBZ.
std::vector<SpectrumSample> obc_spectrum_gbz(const DriveParams& p, double drive_phase,
                                             int n_theta);

/// All plus energies followed by all minus energies.
std::vector<cplx> flatten(std::span<const SpectrumSample> samples);

}  // namespace nhpump
