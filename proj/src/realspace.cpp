#include "nhpump/realspace.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "nhpump/errors.hpp"

namespace nhpump {

ChainOperator build_chain(const DriveParams& p, double drive_phase, int n_cells) {
  if (n_cells < 1) throw std::invalid_argument("chain needs at least one cell");
  const double t1 = p.t1();
  const double t2 = p.t2(drive_phase);
  const double v = p.onsite(drive_phase);

  ChainOperator chain;
  chain.n_cells = n_cells;
  chain.matrix = Eigen::MatrixXcd::Zero(2 * n_cells, 2 * n_cells);
  auto& m = chain.matrix;
  for (int cell = 0; cell < n_cells; ++cell) {
    const int a = 2 * cell, b = a + 1;
    m(a, a) = v;
    m(b, b) = -v;
    m(a, b) = t1 + p.gamma;
    m(b, a) = t1 - p.gamma;
    if (cell + 1 < n_cells) {
      const int next_a = a + 2;
      m(next_a, b) = t2;
      m(b, next_a) = t2;
    }
  }
  return chain;
}

ChainSpectrum exact_eigensystem(const ChainOperator& chain, bool with_vectors) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(chain.matrix, with_vectors);
  if (solver.info() != Eigen::Success)
    throw NoConvergence("dense eigensolver did not converge for a chain of " +
                        std::to_string(chain.n_cells) + " cells");
  ChainSpectrum out;
  const auto& values = solver.eigenvalues();
  out.values.assign(values.data(), values.data() + values.size());
  if (with_vectors) {
    out.vectors = solver.eigenvectors();
    const double scale = std::max(chain.matrix.norm(), std::numeric_limits<double>::min());
    for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
      out.vectors.col(j).normalize();
      const double res =
          (chain.matrix * out.vectors.col(j) - values(j) * out.vectors.col(j)).norm();
      out.max_relative_residual = std::max(out.max_relative_residual, res / scale);
    }
  }
  return out;
}

std::vector<cplx> exact_spectrum(const ChainOperator& chain) {
  return exact_eigensystem(chain, false).values;
}

double spectral_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("spectral_distance of an empty set");
  auto directed = [](std::span<const cplx> from, std::span<const cplx> to) {
    double worst = 0.0;
    for (const cplx x : from) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const cplx y : to) nearest = std::min(nearest, std::abs(x - y));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double mean_cell_position(const ChainSpectrum& spectrum, int n_cells) {
  if (spectrum.vectors.cols() == 0) throw std::invalid_argument("eigenvectors were not computed");
  double total = 0.0;
  for (Eigen::Index j = 0; j < spectrum.vectors.cols(); ++j) {
    const auto v = spectrum.vectors.col(j);
    double weight = 0.0, moment = 0.0;
    for (int cell = 0; cell < n_cells; ++cell) {
      const double w = std::norm(v(2 * cell)) + std::norm(v(2 * cell + 1));
      weight += w;
      moment += (cell + 1) * w;
    }
    total += moment / weight;
  }
  return total / static_cast<double>(spectrum.vectors.cols());
}

}  // namespace nhpump
