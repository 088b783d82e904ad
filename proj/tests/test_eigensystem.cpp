#include <doctest.h>

#include <cmath>
#include <random>

#include "nhpump/eigensystem.hpp"
#include "nhpump/errors.hpp"

using namespace nhpump;

namespace {

double residual(const Matrix2& h, const BiorthPair& b) {
  const double r = (h * b.right - b.energy * b.right).norm();
  const double l = (h.adjoint() * b.left - std::conj(b.energy) * b.left).norm();
  return std::max(r, l);
}

void check_pairs(const BlochVector& d) {
  const auto [plus, minus] = eigensystem(d);
  const Matrix2 h = to_matrix(d);
  CHECK(std::abs(plus.left.dot(plus.right) - 1.0) < 1e-12);
  CHECK(std::abs(minus.left.dot(minus.right) - 1.0) < 1e-12);
  CHECK(residual(h, plus) < 1e-10);
  CHECK(residual(h, minus) < 1e-10);
  CHECK(std::abs(plus.left.dot(minus.right)) < 1e-10);
  CHECK(std::abs(minus.left.dot(plus.right)) < 1e-10);
  CHECK(minus.energy == -plus.energy);
  const Matrix2 id = plus.right * plus.left.adjoint() + minus.right * minus.left.adjoint();
  CHECK((id - Matrix2::Identity()).cwiseAbs().maxCoeff() < 1e-8);
}

}  // namespace

TEST_CASE("sigma1 eigenbasis") {
  const BlochVector d{1.0, 0.0, 0.0};
  const auto [plus, minus] = eigensystem(d);
  CHECK(std::abs(plus.energy - 1.0) < 1e-15);
  CHECK(std::abs(minus.energy + 1.0) < 1e-15);
  CHECK(std::abs(plus.right(0) - plus.right(1)) < 1e-15);
  CHECK(std::abs(minus.right(0) + minus.right(1)) < 1e-15);
  CHECK((plus.left - plus.right / plus.right.squaredNorm()).norm() < 1e-15);
  check_pairs(d);
}

TEST_CASE("sigma3 eigenbasis uses the alternate form") {
  const BlochVector d{0.0, 0.0, 1.0};
  const auto [plus, minus] = eigensystem(d);
  CHECK(std::abs(plus.right(1)) < 1e-15);
  CHECK(std::abs(minus.right(0)) < 1e-15);
  CHECK(std::abs(minus.right(1)) > 0.5);
  check_pairs(d);
}

TEST_CASE("exceptional point") {
  const BlochVector d{0.3, cplx(0, 0.3), 0.0};
  CHECK_THROWS_AS(eigensystem(d), ExceptionalPoint);
  CHECK(ep_defect(d) == 0.0);
  // H - E I with E = 0 has rank one: a Jordan block.
  const Matrix2 h = to_matrix(d);
  CHECK(std::abs(h(0, 1) - 0.6) < 1e-15);
  CHECK(std::abs(h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)) < 1e-15);
  CHECK(h.cwiseAbs().maxCoeff() > 0.5);
}

TEST_CASE("phase rigidity") {
  CHECK(ep_defect({1.0, 0.0, 0.0}) == doctest::Approx(1.0));
  double previous = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double v = ep_defect({0.3 + eps, cplx(0, 0.3), 0.0});
    CHECK(v > 0.0);
    CHECK(v < previous);
    previous = v;
  }
  CHECK(previous < 0.1);
}

TEST_CASE("random Bloch vectors") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 0; n < 500; ++n) {
    const BlochVector d{cplx(g(rng), g(rng)), cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    if (std::abs(d.energy_squared()) < 1e-4) continue;
    check_pairs(d);
    const cplx e = band_energy(d);
    CHECK(std::abs(e * e - d.energy_squared()) < 1e-12);
  }
}

TEST_CASE("gauge fixing keeps biorthonormality") {
  BiorthPair b = eigenpair({cplx(0.2, 0.1), cplx(0.4, -0.3), cplx(-0.5, 0.2)}, Band::minus);
  fix_gauge(b);
  CHECK(std::abs(b.right(0).imag()) < 1e-15);
  CHECK(b.right(0).real() > 0);
  CHECK(std::abs(b.left.dot(b.right) - 1.0) < 1e-12);
}

TEST_CASE("band names") {
  CHECK(parse_band("minus") == Band::minus);
  CHECK(std::string(to_string(Band::plus)) == "plus");
  CHECK_THROWS_AS(parse_band("upper"), std::invalid_argument);
}
