#pragma once

#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Core>

namespace nhpump {

using cplx = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class Boundary { PBC, OBC };

/// Parameters of the driven non-Hermitian Rice-Mele chain.
///
/// Hoppings follow t1 = mu and t2(phase) = mu - cos(phase); the staggered
/// potential is delta * sin(phase). Physical time runs over [0, 2*pi*A]
/// with the drive phase advancing as time / A.
struct DriveParams {
  double mu = 0.0;
  double gamma = 0.3;
  double delta = 1.0;
  double adiabatic_factor = 1.0;

  /// Throws std::invalid_argument unless delta is finite and A > 0.
  void validate() const;

  double t1() const { return mu; }
  double t2(double phase) const;
  double onsite(double phase) const;
  /// Drive period in physical time, 2*pi*A.
  double period() const { return two_pi * adiabatic_factor; }
};

/// A point on the (momentum, drive phase) torus. For OBC the momentum is
/// the GBZ angle theta.
struct PhasePoint {
  double momentum = 0.0;
  double drive_phase = 0.0;
};

struct BlochVector {
  cplx d1, d2, d3;

  /// d1^2 + d2^2 + d3^2, the squared band energy.
  cplx energy_squared() const { return d1 * d1 + d2 * d2 + d3 * d3; }
};

namespace pauli {
Matrix2 sigma1();
Matrix2 sigma2();
Matrix2 sigma3();
}  // namespace pauli

/// d1 sigma1 + d2 sigma2 + d3 sigma3.
Matrix2 to_matrix(const BlochVector& d);
/// Inverse of to_matrix for traceless 2x2 matrices.
BlochVector from_matrix(const Matrix2& m);

BlochVector bloch_vector(const DriveParams& p, const PhasePoint& pt);

Matrix2 h_pbc(const DriveParams& p, const PhasePoint& pt);

/// Effective Hamiltonian on the GBZ, beta = Gamma e^{i theta}.
/// Throws DegenerateGBZ when |mu| == gamma.
Matrix2 h_obc(const DriveParams& p, const PhasePoint& pt);

Matrix2 hamiltonian(const DriveParams& p, const PhasePoint& pt, Boundary boundary);

/// Analytic derivative of the Hamiltonian with respect to momentum (PBC) or
/// theta (OBC).
Matrix2 dk_h(const DriveParams& p, const PhasePoint& pt, Boundary boundary);

const char* to_string(Boundary b);
Boundary parse_boundary(const std::string& s);

}  // namespace nhpump
