#include "nhpump/topology.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nhpump/errors.hpp"
#include "nhpump/gbz.hpp"

namespace nhpump {

namespace {

constexpr cplx I{0.0, 1.0};

void check_grid(int n_momentum, int n_phase) {
  if (n_momentum < 8 || n_phase < 8)
    throw std::invalid_argument("torus grid needs at least 8 points per direction");
}

ChernResult finish(double total, int n_momentum, int n_phase) {
  ChernResult r;
  r.value = total;
  r.integer_value = static_cast<int>(std::lround(total));
  r.n_momentum = n_momentum;
  r.n_phase = n_phase;
  return r;
}

}  // namespace

HamiltonianFn make_hamiltonian(const DriveParams& p, Boundary boundary) {
  if (boundary == Boundary::OBC) gbz_radius(p);
  return [p, boundary](const PhasePoint& pt) { return hamiltonian(p, pt, boundary); };
}

void TorusGrid::validate() const { check_grid(n_momentum, n_phase); }

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::vector<BiorthPair> sample_band(const HamiltonianFn& h, Band band, int n_momentum,
                                    int n_phase, const ChernOptions& opts) {
  check_grid(n_momentum, n_phase);
  std::vector<BiorthPair> field;
  field.reserve(static_cast<std::size_t>(n_momentum) * n_phase);
  for (int i = 0; i < n_momentum; ++i) {
    for (int j = 0; j < n_phase; ++j) {
      const PhasePoint pt{two_pi * i / n_momentum, two_pi * j / n_phase};
      const BlochVector d = from_matrix(h(pt));
      if (std::abs(band_energy(d)) <= opts.gap_tol)
        throw GaplessSpectrum("|E| <= gap_tol at momentum " + std::to_string(pt.momentum) +
                              ", phase " + std::to_string(pt.drive_phase));
      field.push_back(eigenpair(d, band, opts.eigen));
    }
  }
  return field;
}

ChernResult chern_plaquette(const HamiltonianFn& h, Band band, int n_momentum, int n_phase,
                            const ChernOptions& opts) {
  const auto field = sample_band(h, band, n_momentum, n_phase, opts);
  auto at = [&](int i, int j) -> const BiorthPair& {
    return field[((i + n_momentum) % n_momentum) * n_phase + (j + n_phase) % n_phase];
  };
  auto link = [&](int i, int j, int di, int dj) {
    return at(i, j).left.dot(at(i + di, j + dj).right);
  };

  std::vector<double> flux(field.size());
  double max_flux = 0.0;
  double max_nonunitarity = 0.0;
  for (int i = 0; i < n_momentum; ++i) {
    for (int j = 0; j < n_phase; ++j) {
      // circulate momentum then phase
      const cplx loop = link(i, j, 1, 0) * link(i + 1, j, 0, 1) /
                        (link(i, j + 1, 1, 0) * link(i, j, 0, 1));
      const double f = std::arg(loop);
      flux[i * n_phase + j] = f;
      max_flux = std::max(max_flux, std::abs(f));
      max_nonunitarity = std::max(max_nonunitarity, std::abs(std::log(std::abs(loop))));
    }
  }
  if (max_flux >= std::numbers::pi * (1.0 - 1e-12))
    throw NotConverged("plaquette flux reached the branch cut; refine the grid");

  ChernResult r = finish(pairwise_sum(flux) / two_pi, n_momentum, n_phase);
  r.max_plaquette_flux = max_flux;
  r.max_nonunitarity = max_nonunitarity;
  r.converged = std::abs(r.value - r.integer_value) < 0.01;
  if (opts.store_curvature) {
    const double area = (two_pi / n_momentum) * (two_pi / n_phase);
    r.berry_curvature.reserve(flux.size());
    for (double f : flux) r.berry_curvature.emplace_back(f / area);
  }
  return r;
}

ChernResult chern_plaquette(const DriveParams& p, Band band, const TorusGrid& grid,
                            const ChernOptions& opts) {
  grid.validate();
  return chern_plaquette(make_hamiltonian(p, grid.boundary), band, grid.n_momentum,
                         grid.n_phase, opts);
}

ChernResult chern_derivative(const HamiltonianFn& h, Band band, int n_momentum,
                             int n_phase, const ChernOptions& opts) {
  auto field = sample_band(h, band, n_momentum, n_phase, opts);
  for (auto& pair : field) fix_gauge(pair);

  const double hk = two_pi / n_momentum;
  const double ht = two_pi / n_phase;
  auto at = [&](int i, int j) -> const BiorthPair& {
    return field[((i + n_momentum) % n_momentum) * n_phase + (j + n_phase) % n_phase];
  };

  std::vector<double> re(field.size()), im(field.size());
  std::vector<cplx> curvature;
  if (opts.store_curvature) curvature.resize(field.size());
  double max_flux = 0.0;
  for (int i = 0; i < n_momentum; ++i) {
    for (int j = 0; j < n_phase; ++j) {
      const BiorthPair& centre = at(i, j);
      // Neighbours get the phase that makes <centre.left | right> real and positive.
      auto aligned = [&](int di, int dj) {
        BiorthPair n = at(i + di, j + dj);
        const cplx overlap = centre.left.dot(n.right);
        const cplx s = overlap / std::abs(overlap);
        n.right /= s;
        n.left *= std::conj(s);
        return n;
      };
      const BiorthPair kp = aligned(1, 0), km = aligned(-1, 0);
      const BiorthPair tp = aligned(0, 1), tm = aligned(0, -1);
      const Vector2 dk_r = (kp.right - km.right) / (2.0 * hk);
      const Vector2 dk_l = (kp.left - km.left) / (2.0 * hk);
      const Vector2 dt_r = (tp.right - tm.right) / (2.0 * ht);
      const Vector2 dt_l = (tp.left - tm.left) / (2.0 * ht);
      const cplx omega = -I * (dk_l.dot(dt_r) - dt_l.dot(dk_r));
      re[i * n_phase + j] = omega.real();
      im[i * n_phase + j] = omega.imag();
      max_flux = std::max(max_flux, std::abs(omega) * hk * ht);
      if (opts.store_curvature) curvature[i * n_phase + j] = omega;
    }
  }
  const double weight = hk * ht / two_pi;
  ChernResult r = finish(pairwise_sum(re) * weight, n_momentum, n_phase);
  r.imag_part = pairwise_sum(im) * weight;
  r.max_plaquette_flux = max_flux;
  r.converged = std::abs(r.value - r.integer_value) < 0.01;
  r.berry_curvature = std::move(curvature);
  return r;
}

ChernResult chern_derivative(const DriveParams& p, Band band, const TorusGrid& grid,
                             const ChernOptions& opts) {
  grid.validate();
  return chern_derivative(make_hamiltonian(p, grid.boundary), band, grid.n_momentum,
                          grid.n_phase, opts);
}

}  // namespace nhpump
