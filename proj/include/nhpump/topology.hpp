#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nhpump/eigensystem.hpp"
#include "nhpump/model.hpp"

namespace nhpump {

/// Hamiltonian as a function of a point on the (momentum, phase) torus.
using HamiltonianFn = std::function<Matrix2(const PhasePoint&)>;

HamiltonianFn make_hamiltonian(const DriveParams& p, Boundary boundary);

/// Uniform periodic grid on the torus; the 2 pi endpoint is excluded.
struct TorusGrid {
  int n_momentum = 128;
  int n_phase = 128;
  Boundary boundary = Boundary::PBC;

  void validate() const;
  double momentum(int i) const { return two_pi * i / n_momentum; }
  double phase(int j) const { return two_pi * j / n_phase; }
  double momentum_step() const { return two_pi / n_momentum; }
  double phase_step() const { return two_pi / n_phase; }
};

struct ChernOptions {
  double gap_tol = 1e-6;
  EigenTolerances eigen{};
  bool store_curvature = false;
};

struct ChernResult {
  double value = 0.0;
  int integer_value = 0;
  /// Largest |plaquette flux| (plaquette method) or |Omega| h^2 (derivative
  /// method).
  double max_plaquette_flux = 0.0;
  /// Largest |log |plaquette product||; zero for unitary links.
  double max_nonunitarity = 0.0;
  /// Imaginary part of the quadrature (derivative method only).
  double imag_part = 0.0;
  bool converged = false;
  int n_momentum = 0;
  int n_phase = 0;
  /// Omega_kt samples, row-major in (momentum, phase); empty unless
  /// requested.
  std::vector<cplx> berry_curvature;

  cplx curvature_at(int i, int j) const { return berry_curvature[i * n_phase + j]; }
};

/// Deterministic pairwise sum.
double pairwise_sum(std::span<const double> values);

/// Eigenpairs of one band sampled on the grid, row-major in (momentum, phase).
/// Throws GaplessSpectrum if any |E| <= gap_tol.
std::vector<BiorthPair> sample_band(const HamiltonianFn& h, Band band, int n_momentum,
                                    int n_phase, const ChernOptions& opts);

/// Gauge-invariant lattice Chern number from biorthogonal link variables.
ChernResult chern_plaquette(const HamiltonianFn& h, Band band, int n_momentum, int n_phase,
                            const ChernOptions& opts = {});
ChernResult chern_plaquette(const DriveParams& p, Band band, const TorusGrid& grid,
                            const ChernOptions& opts = {});

/// Berry curvature -i(<d_k L|d_t R> - <d_t L|d_k R>) by central differences,
/// summed over the grid.
ChernResult chern_derivative(const HamiltonianFn& h, Band band, int n_momentum,
                             int n_phase, const ChernOptions& opts = {});
ChernResult chern_derivative(const DriveParams& p, Band band, const TorusGrid& grid,
                             const ChernOptions& opts = {});

}  // namespace nhpump
