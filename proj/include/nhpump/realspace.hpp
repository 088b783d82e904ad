#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "nhpump/model.hpp"

namespace nhpump {

/// Single-particle Hamiltonian of the open chain, site basis ordered
/// (1,A), (1,B), (2,A), ...
struct ChainOperator {
  int n_cells = 0;
  Eigen::MatrixXcd matrix;
};

ChainOperator build_chain(const DriveParams& p, double drive_phase, int n_cells);

struct ChainSpectrum {
  std::vector<cplx> values;
  /// Unit-norm right eigenvectors as columns (empty unless requested).
  Eigen::MatrixXcd vectors;
  /// max ||M v - lambda v|| / ||M||; only set when vectors are computed.
  double max_relative_residual = 0.0;
};

/// Dense non-Hermitian eigensolver. Throws NoConvergence if the QR iteration
/// fails.
ChainSpectrum exact_eigensystem(const ChainOperator& chain, bool with_vectors);
std::vector<cplx> exact_spectrum(const ChainOperator& chain);

/// Symmetric Hausdorff distance between two point sets in the complex plane.
double spectral_distance(std::span<const cplx> a, std::span<const cplx> b);

/// Mean over eigenvectors of the |v|^2-weighted cell index (1..N). Values
/// below (N+1)/2 mean weight piles up at the first cell.
double mean_cell_position(const ChainSpectrum& spectrum, int n_cells);

}  // namespace nhpump
