#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nhpump/errors.hpp"
#include "nhpump/model.hpp"

using namespace nhpump;
using std::numbers::pi;

namespace {

double max_abs(const Matrix2& m) { return m.cwiseAbs().maxCoeff(); }

DriveParams params(double mu, double gamma, double delta = 1.0) {
  DriveParams p;
  p.mu = mu;
  p.gamma = gamma;
  p.delta = delta;
  return p;
}

Matrix2 mat(cplx a, cplx b, cplx c, cplx d) {
  Matrix2 m;
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("bloch vector at simple points") {
  auto d = bloch_vector(params(1.0, 0.0), {1.234, 0.0});
  CHECK(std::abs(d.d1 - 1.0) < 1e-15);
  CHECK(std::abs(d.d2) < 1e-15);
  CHECK(std::abs(d.d3) < 1e-15);

  d = bloch_vector(params(0.5, 0.3), {0.0, pi / 2});
  CHECK(std::abs(d.d1 - 1.0) < 1e-15);
  CHECK(std::abs(d.d2 - cplx(0, 0.3)) < 1e-15);
  CHECK(std::abs(d.d3 - 1.0) < 1e-15);

  d = bloch_vector(params(0.65, 0.3), {0.0, 0.0});
  CHECK(std::abs(d.d1 - 0.3) < 1e-14);
  CHECK(std::abs(d.d2 - cplx(0, 0.3)) < 1e-15);
  CHECK(std::abs(d.energy_squared()) < 1e-14);
}

TEST_CASE("periodic Hamiltonian entries") {
  CHECK(max_abs(h_pbc(params(0, 0), {0, 0}) - mat(0, -1, -1, 0)) < 1e-15);
  CHECK(max_abs(h_pbc(params(0.5, 0.3), {pi, 0}) - mat(0, 1.3, 0.7, 0)) < 1e-14);
}

TEST_CASE("open-boundary Hamiltonian entries") {
  CHECK(max_abs(h_obc(params(0.5, 0.3), {0, pi / 2}) - mat(1, 1.8, 0.45, -1)) < 1e-14);
  CHECK_THROWS_AS(h_obc(params(0.3, 0.3), {0, 0}), DegenerateGBZ);
  CHECK_THROWS_AS(h_obc(params(-0.3, 0.3), {0, 0}), DegenerateGBZ);
}

TEST_CASE("momentum derivative") {
  CHECK(max_abs(dk_h(params(1, 0), {0.7, 0}, Boundary::PBC)) < 1e-15);
  CHECK(max_abs(dk_h(params(0, 0), {0, 0}, Boundary::PBC) - mat(0, cplx(0, 1), cplx(0, -1), 0)) <
        1e-15);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5), ang(0, two_pi);
  const double h = 1e-5;
  for (int n = 0; n < 200; ++n) {
    const DriveParams p = params(u(rng), 0.5 * u(rng), u(rng));
    const PhasePoint pt{ang(rng), ang(rng)};
    for (Boundary b : {Boundary::PBC, Boundary::OBC}) {
      if (b == Boundary::OBC && std::abs(std::abs(p.mu) - std::abs(p.gamma)) < 0.05) continue;
      const Matrix2 fd = (hamiltonian(p, {pt.momentum + h, pt.drive_phase}, b) -
                          hamiltonian(p, {pt.momentum - h, pt.drive_phase}, b)) /
                         (2 * h);
      CHECK(max_abs(fd - dk_h(p, pt, b)) < 1e-8);
    }
  }
}

TEST_CASE("matrix invariants over random parameters") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5), ang(0, two_pi);
  const Matrix2 s3 = pauli::sigma3();
  for (int n = 0; n < 200; ++n) {
    const DriveParams p = params(u(rng), 0.5 * u(rng), u(rng));
    const PhasePoint pt{ang(rng), ang(rng)};
    const Matrix2 h = h_pbc(p, pt);
    CHECK(h.trace() == cplx(0, 0));
    CHECK(max_abs(h - to_matrix(bloch_vector(p, pt))) < 1e-14);
    CHECK(h_pbc(p, {pt.momentum + two_pi, pt.drive_phase}).isApprox(h, 1e-14));
    CHECK(h_pbc(p, {pt.momentum, pt.drive_phase + two_pi}).isApprox(h, 1e-14));

    for (double t : {0.0, pi}) {
      const Matrix2 hc = h_pbc(p, {pt.momentum, t});
      CHECK(max_abs(s3 * hc * s3 + hc) < 1e-15);
    }

    const DriveParams herm = params(p.mu, 0.0, p.delta);
    const Matrix2 hh = h_pbc(herm, pt);
    CHECK(max_abs(hh - hh.adjoint()) < 1e-14);
    if (std::abs(p.mu) > 1e-6) CHECK(max_abs(h_obc(herm, pt) - hh) < 1e-14);

    if (std::abs(std::abs(p.mu) - std::abs(p.gamma)) > 1e-3)
      CHECK(h_obc(p, pt).trace() == cplx(0, 0));
  }
}

TEST_CASE("from_matrix inverts to_matrix") {
  const BlochVector d{cplx(0.3, -0.2), cplx(1.1, 0.4), cplx(-0.7, 0.05)};
  const BlochVector e = from_matrix(to_matrix(d));
  CHECK(std::abs(e.d1 - d.d1) < 1e-15);
  CHECK(std::abs(e.d2 - d.d2) < 1e-15);
  CHECK(std::abs(e.d3 - d.d3) < 1e-15);
}

TEST_CASE("parameter validation and parsing") {
  DriveParams p;
  p.adiabatic_factor = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK(parse_boundary("obc") == Boundary::OBC);
  CHECK(parse_boundary("pbc") == Boundary::PBC);
  CHECK_THROWS_AS(parse_boundary("open"), std::invalid_argument);
  CHECK(params(0.2, 0.3).period() == doctest::Approx(two_pi));
}
