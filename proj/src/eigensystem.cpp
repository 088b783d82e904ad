#include "nhpump/eigensystem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nhpump/errors.hpp"

namespace nhpump {

namespace {

constexpr cplx I{0.0, 1.0};

// Right eigenvector of d.sigma for eigenvalue e. The primary form comes
// from the second row of (H - e) v = 0; the alternate form from the first
// row is used when the primary one (nearly) vanishes.
Vector2 right_vector(const BlochVector& d, cplx e, double switch_tol) {
  Vector2 v(d.d3 + e, d.d1 + I * d.d2);
  if (v.norm() < switch_tol) v = Vector2(d.d1 - I * d.d2, e - d.d3);
  return v;
}

BlochVector conjugate(const BlochVector& d) {
  return {std::conj(d.d1), std::conj(d.d2), std::conj(d.d3)};
}

BiorthPair make_pair(const BlochVector& d, cplx e, Band band, double switch_tol) {
  BiorthPair pair;
  pair.energy = e;
  pair.band = band;
  pair.right = right_vector(d, e, switch_tol);
  pair.right /= pair.right.norm();
  // H^dagger = conj(d).sigma with eigenvalue conj(e)
  pair.left = right_vector(conjugate(d), std::conj(e), switch_tol);
  const cplx overlap = pair.left.dot(pair.right);
  pair.left /= std::conj(overlap);
  return pair;
}

}  // namespace

const char* to_string(Band b) { return b == Band::plus ? "plus" : "minus"; }

Band parse_band(const std::string& s) {
  if (s == "plus" || s == "+") return Band::plus;
  if (s == "minus" || s == "-") return Band::minus;
  throw std::invalid_argument("unknown band '" + s + "' (expected plus or minus)");
}

cplx band_energy(const BlochVector& d) {
  cplx e = std::sqrt(d.energy_squared());
  if (e.real() < 0.0 || (e.real() == 0.0 && e.imag() < 0.0)) e = -e;
  return e;
}

cplx band_energy(const BlochVector& d, Band band) {
  const cplx e = band_energy(d);
  return band == Band::plus ? e : -e;
}

std::pair<BiorthPair, BiorthPair> eigensystem(const BlochVector& d,
                                              const EigenTolerances& tol) {
  const cplx e = band_energy(d);
  if (std::abs(e) <= tol.ep_tol)
    throw ExceptionalPoint("|E| = " + std::to_string(std::abs(e)) +
                           " at or below ep_tol");
  return {make_pair(d, e, Band::plus, tol.switch_tol),
          make_pair(d, -e, Band::minus, tol.switch_tol)};
}

BiorthPair eigenpair(const BlochVector& d, Band band, const EigenTolerances& tol) {
  const cplx e = band_energy(d);
  if (std::abs(e) <= tol.ep_tol)
    throw ExceptionalPoint("|E| = " + std::to_string(std::abs(e)) +
                           " at or below ep_tol");
  return make_pair(d, band == Band::plus ? e : -e, band, tol.switch_tol);
}

double ep_defect(const BlochVector& d, const EigenTolerances& tol) {
  const cplx e = band_energy(d);
  if (std::abs(e) <= tol.ep_tol) return 0.0;
  const Vector2 r = right_vector(d, e, tol.switch_tol).normalized();
  const Vector2 l = right_vector(conjugate(d), std::conj(e), tol.switch_tol).normalized();
  return std::abs(l.dot(r));
}

void fix_gauge(BiorthPair& pair, double zero_tol) {
  const double scale = pair.right.norm();
  for (int i = 0; i < 2; ++i) {
    const cplx c = pair.right(i);
    if (std::abs(c) > zero_tol * scale) {
      const cplx phase = c / std::abs(c);
      pair.right /= phase;
      pair.left *= std::conj(phase);
      return;
    }
  }
}

}  // namespace nhpump
