#include "nhpump/model.hpp"

#include <cmath>
#include <stdexcept>

#include "nhpump/gbz.hpp"

namespace nhpump {

namespace {
constexpr cplx I{0.0, 1.0};
}

void DriveParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(gamma))
    throw std::invalid_argument("mu and gamma must be finite");
  if (!std::isfinite(delta)) throw std::invalid_argument("delta must be finite");
  if (!std::isfinite(adiabatic_factor) || adiabatic_factor <= 0.0)
    throw std::invalid_argument("adiabatic_factor must be finite and positive");
}

double DriveParams::t2(double phase) const { return mu - std::cos(phase); }

double DriveParams::onsite(double phase) const { return delta * std::sin(phase); }

namespace pauli {
Matrix2 sigma1() {
  Matrix2 m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
Matrix2 sigma2() {
  Matrix2 m;
  m << 0.0, -I, I, 0.0;
  return m;
}
Matrix2 sigma3() {
  Matrix2 m;
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
}  // namespace pauli

Matrix2 to_matrix(const BlochVector& d) {
  Matrix2 m;
  m << d.d3, d.d1 - I * d.d2, d.d1 + I * d.d2, -d.d3;
  return m;
}

BlochVector from_matrix(const Matrix2& m) {
  return {0.5 * (m(0, 1) + m(1, 0)), 0.5 * I * (m(0, 1) - m(1, 0)),
          0.5 * (m(0, 0) - m(1, 1))};
}

BlochVector bloch_vector(const DriveParams& p, const PhasePoint& pt) {
  const double t2 = p.t2(pt.drive_phase);
  return {p.t1() + t2 * std::cos(pt.momentum),
          cplx{t2 * std::sin(pt.momentum), p.gamma},
          p.onsite(pt.drive_phase)};
}

Matrix2 h_pbc(const DriveParams& p, const PhasePoint& pt) {
  const double t2 = p.t2(pt.drive_phase);
  const double v = p.onsite(pt.drive_phase);
  const cplx phase = std::polar(1.0, pt.momentum);
  Matrix2 m;
  m << v, p.mu + p.gamma + std::conj(phase) * t2,
       p.mu - p.gamma + phase * t2, -v;
  return m;
}

Matrix2 h_obc(const DriveParams& p, const PhasePoint& pt) {
  const double radius = gbz_radius(p);
  const double t2 = p.t2(pt.drive_phase);
  const double v = p.onsite(pt.drive_phase);
  const cplx beta = std::polar(radius, pt.momentum);
  Matrix2 m;
  m << v, p.mu + p.gamma + t2 / beta,
       p.mu - p.gamma + beta * t2, -v;
  return m;
}

Matrix2 hamiltonian(const DriveParams& p, const PhasePoint& pt, Boundary boundary) {
  return boundary == Boundary::PBC ? h_pbc(p, pt) : h_obc(p, pt);
}

Matrix2 dk_h(const DriveParams& p, const PhasePoint& pt, Boundary boundary) {
  const double t2 = p.t2(pt.drive_phase);
  const double radius = boundary == Boundary::PBC ? 1.0 : gbz_radius(p);
  const cplx beta = std::polar(radius, pt.momentum);
  // d(beta)/dk = i beta, d(1/beta)/dk = -i / beta
  Matrix2 m;
  m << 0.0, -I * t2 / beta, I * beta * t2, 0.0;
  return m;
}

const char* to_string(Boundary b) { return b == Boundary::PBC ? "pbc" : "obc"; }

Boundary parse_boundary(const std::string& s) {
  if (s == "pbc" || s == "PBC") return Boundary::PBC;
  if (s == "obc" || s == "OBC") return Boundary::OBC;
  throw std::invalid_argument("unknown boundary '" + s + "' (expected pbc or obc)");
}

}  // namespace nhpump
