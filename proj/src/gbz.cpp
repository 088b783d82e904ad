#include "nhpump/gbz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nhpump/eigensystem.hpp"
#include "nhpump/errors.hpp"

namespace nhpump {

double gbz_radius(const DriveParams& p) {
  const double num = std::abs(p.t1() - p.gamma);
  const double den = std::abs(p.t1() + p.gamma);
  if (num == 0.0 || den == 0.0)
    throw DegenerateGBZ("|mu| == gamma (mu = " + std::to_string(p.mu) +
                        ", gamma = " + std::to_string(p.gamma) + ")");
  return std::sqrt(num / den);
}

EnergySquaredLaurent energy_squared_laurent(const DriveParams& p, double drive_phase) {
  const double t1 = p.t1();
  const double t2 = p.t2(drive_phase);
  const double d3 = p.onsite(drive_phase);
  // (t1 - gamma + t2 beta)(t1 + gamma + t2 / beta) + d3^2
  return {t2 * (t1 - p.gamma), t1 * t1 - p.gamma * p.gamma + t2 * t2 + d3 * d3,
          t2 * (t1 + p.gamma)};
}

std::pair<cplx, cplx> solve_quadratic(cplx a, cplx b, cplx c) {
  if (a == cplx{}) throw std::invalid_argument("solve_quadratic: leading coefficient is zero");
  const cplx disc = std::sqrt(b * b - 4.0 * a * c);
  // choose the sign that avoids cancellation
  const cplx q = -0.5 * (std::real(std::conj(b) * disc) >= 0.0 ? b + disc : b - disc);
  // q == 0 only when b == c == 0: a double root at the origin
  cplx z1 = q / a;
  cplx z2 = q == cplx{} ? cplx{} : c / q;
  if (std::abs(z2) < std::abs(z1)) std::swap(z1, z2);
  return {z1, z2};
}

std::pair<cplx, cplx> beta_roots(const DriveParams& p, double drive_phase, double phi) {
  const double t2 = p.t2(drive_phase);
  if (std::abs(t2) < 1e-12)
    throw DegenerateDrive("t2 vanishes at drive phase " + std::to_string(drive_phase));
  const cplx w = std::polar(1.0, phi);
  if (std::abs(1.0 - w) < 1e-12)
    throw DegeneratePhi("phi is a multiple of 2 pi");

  const EnergySquaredLaurent e2 = energy_squared_laurent(p, drive_phase);
  // beta * [E^2(beta) - E^2(beta w)]; the E^2 term and c_zero cancel exactly.
  const cplx a = e2.c_plus * (1.0 - w);
  const cplx b = e2.c_zero - e2.c_zero;
  const cplx c = e2.c_minus * (1.0 - 1.0 / w);
  if (std::abs(a) == 0.0)
    throw DegenerateGBZ("mu == -gamma: beta polynomial loses its leading term");
  return solve_quadratic(a, b, c);
}

std::pair<cplx, cplx> characteristic_roots(const DriveParams& p, double drive_phase,
                                           cplx energy_squared) {
  const EnergySquaredLaurent e2 = energy_squared_laurent(p, drive_phase);
  return solve_quadratic(e2.c_plus, e2.c_zero - energy_squared, e2.c_minus);
}

GBZContour gbz_contour(const DriveParams& p, double drive_phase, int n_phi) {
  if (n_phi < 8) throw std::invalid_argument("gbz_contour needs n_phi >= 8");
  const double reference = gbz_radius(p);
  const EnergySquaredLaurent e2 = energy_squared_laurent(p, drive_phase);

  GBZContour contour;
  contour.complex_branch = p.mu * p.mu < p.gamma * p.gamma;
  contour.samples.reserve(n_phi);
  double sum = 0.0;
  for (int j = 0; j < n_phi; ++j) {
    const double phi = two_pi * (j + 1) / (n_phi + 1);
    const auto roots = beta_roots(p, drive_phase, phi);
    for (const cplx beta : {roots.first, roots.second}) {
      // M = 1: the two roots of the characteristic polynomial at E^2(beta)
      // must share their magnitude, and beta must be one of them.
      const auto [inner, outer] = characteristic_roots(p, drive_phase, e2(beta));
      const double scale = std::max(1.0, std::abs(beta));
      if (std::abs(std::abs(inner) - std::abs(outer)) > 1e-8 * scale)
        throw AdmissibilityViolation("|beta_1| != |beta_2| at phi = " + std::to_string(phi));
      if (std::min(std::abs(beta - inner), std::abs(beta - outer)) > 1e-8 * scale)
        throw AdmissibilityViolation("root is not a characteristic root at phi = " +
                                     std::to_string(phi));
      sum += std::abs(beta);
    }
    contour.samples.push_back({phi, roots});
  }
  contour.radius = sum / (2.0 * n_phi);
  if (std::abs(contour.radius - reference) > 1e-9)
    throw AdmissibilityViolation("swept radius " + std::to_string(contour.radius) +
                                 " disagrees with closed form " + std::to_string(reference));
  return contour;
}

std::vector<double> periodic_grid(int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = two_pi * i / n;
  return out;
}

std::vector<SpectrumSample> band_spectrum(const DriveParams& p, Boundary boundary,
                                          double drive_phase,
                                          std::span<const double> momenta) {
  std::vector<SpectrumSample> out;
  out.reserve(momenta.size());
  for (const double k : momenta) {
    const cplx e = band_energy(from_matrix(hamiltonian(p, {k, drive_phase}, boundary)));
    out.push_back({k, e, -e});
  }
  return out;
}

std::vector<SpectrumSample> obc_spectrum_gbz(const DriveParams& p, double drive_phase,
                                             int n_theta) {
  if (n_theta < 1) throw std::invalid_argument("obc_spectrum_gbz needs n_theta >= 1");
  gbz_radius(p);
  const auto thetas = periodic_grid(n_theta);
  return band_spectrum(p, Boundary::OBC, drive_phase, thetas);
}

std::vector<cplx> flatten(std::span<const SpectrumSample> samples) {
  std::vector<cplx> out;
  out.reserve(2 * samples.size());
  for (const auto& s : samples) out.push_back(s.plus);
  for (const auto& s : samples) out.push_back(s.minus);
  return out;
}

}  // namespace nhpump
