#include "nhpump/pump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "nhpump/errors.hpp"
#include "nhpump/gbz.hpp"

namespace nhpump {

namespace {

constexpr cplx I{0.0, 1.0};

struct Derivative {
  Vector2 right;
  Vector2 left;
  cplx velocity;
};

void update_im(ImSample& s, double im) {
  s.max_im = std::max(s.max_im, im);
  s.min_im = std::min(s.min_im, im);
}

ImStats summarize(std::vector<ImSample> series) {
  ImStats stats;
  double hi = -std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    stats.max_abs_im = std::max({stats.max_abs_im, std::abs(s.max_im), std::abs(s.min_im)});
    hi = std::max(hi, s.max_im);
    lo = std::min(lo, s.max_im);
  }
  stats.im_range = series.empty() ? 0.0 : hi - lo;
  stats.im_series = std::move(series);
  return stats;
}

std::vector<ImSample> empty_series(std::size_t n) {
  return std::vector<ImSample>(n, ImSample{0.0, -std::numeric_limits<double>::infinity(),
                                           std::numeric_limits<double>::infinity()});
}

}  // namespace

PairEvolution::PairEvolution(PhaseHamiltonian h, PhaseHamiltonian velocity_operator,
                             double adiabatic_factor, PumpState initial,
                             const EvolveOptions& opts, double momentum)
    : h_(std::move(h)),
      dh_(std::move(velocity_operator)),
      adiabatic_factor_(adiabatic_factor),
      opts_(opts),
      momentum_(momentum),
      state_(std::move(initial)) {
  if (opts_.n_steps < 1) throw std::invalid_argument("n_steps must be positive");
  if (!(adiabatic_factor_ > 0.0)) throw std::invalid_argument("adiabatic_factor must be positive");
  dt_ = two_pi * adiabatic_factor_ / opts_.n_steps;
}

void PairEvolution::step() {
  auto rhs = [&](double t, const Vector2& r, const Vector2& l) {
    const double phase = t / adiabatic_factor_;
    const Matrix2 h = h_(phase);
    Derivative d{-I * (h * r), -I * (h.adjoint() * l), cplx{}};
    if (dh_) d.velocity = l.dot(dh_(phase) * r);
    return d;
  };

  const double t = state_.time;
  const double dt = dt_;
  const Vector2& r = state_.psi_right;
  const Vector2& l = state_.psi_left;
  const Derivative k1 = rhs(t, r, l);
  const Derivative k2 = rhs(t + 0.5 * dt, r + 0.5 * dt * k1.right, l + 0.5 * dt * k1.left);
  const Derivative k3 = rhs(t + 0.5 * dt, r + 0.5 * dt * k2.right, l + 0.5 * dt * k2.left);
  const Derivative k4 = rhs(t + dt, r + dt * k3.right, l + dt * k3.left);

  state_.psi_right += dt / 6.0 * (k1.right + 2.0 * k2.right + 2.0 * k3.right + k4.right);
  state_.psi_left += dt / 6.0 * (k1.left + 2.0 * k2.left + 2.0 * k3.left + k4.left);
  displacement_ += dt / 6.0 *
                   (k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity);
  ++steps_;
  // avoid accumulating t += dt rounding
  state_.time = steps_ == opts_.n_steps ? two_pi * adiabatic_factor_ : steps_ * dt_;

  const double drift = std::abs(state_.overlap() - 1.0);
  max_drift_ = std::max(max_drift_, drift);
  if (!(drift <= opts_.collapse_tol))
    throw OverlapCollapse("biorthogonal overlap drifted by " + std::to_string(drift) +
                              " at momentum " + std::to_string(momentum_) + ", time " +
                              std::to_string(state_.time),
                          momentum_);

  if (opts_.rescale_every > 0 && steps_ % opts_.rescale_every == 0) {
    const double s = state_.psi_right.norm();
    state_.psi_right /= s;
    state_.psi_left *= s;
    state_.log_scale_right += std::log(s);
    state_.log_scale_left -= std::log(s);
  }
}

void PairEvolution::run() {
  while (steps_ < opts_.n_steps) step();
}

PumpState initial_state(const DriveParams& p, double momentum, Band band, Boundary boundary) {
  const BlochVector d = from_matrix(hamiltonian(p, {momentum, 0.0}, boundary));
  BiorthPair pair;
  try {
    pair = eigenpair(d, band);
  } catch (const ExceptionalPoint&) {
    throw GaplessSpectrum("spectrum is gapless at drive phase 0, momentum " +
                          std::to_string(momentum));
  }
  PumpState s;
  s.psi_right = pair.right;
  s.psi_left = pair.left;
  return s;
}

namespace {

PairEvolution make_evolution(const DriveParams& p, double momentum, Band band,
                             Boundary boundary, const EvolveOptions& opts) {
  p.validate();
  if (boundary == Boundary::OBC) gbz_radius(p);
  auto h = [p, momentum, boundary](double phase) {
    return hamiltonian(p, {momentum, phase}, boundary);
  };
  auto dh = [p, momentum, boundary](double phase) {
    return dk_h(p, {momentum, phase}, boundary);
  };
  return PairEvolution(h, dh, p.adiabatic_factor, initial_state(p, momentum, band, boundary),
                       opts, momentum);
}

}  // namespace

std::vector<PumpState> evolve_pair(const DriveParams& p, double momentum, Band band,
                                   int n_steps, Boundary boundary) {
  EvolveOptions opts;
  opts.n_steps = n_steps;
  PairEvolution evo = make_evolution(p, momentum, band, boundary, opts);
  std::vector<PumpState> out;
  out.reserve(n_steps + 1);
  out.push_back(evo.state());
  while (evo.steps_taken() < n_steps) {
    evo.step();
    out.push_back(evo.state());
  }
  return out;
}

cplx velocity(const DriveParams& p, const PumpState& state, double momentum,
              Boundary boundary) {
  const Matrix2 dh = dk_h(p, {momentum, state.time / p.adiabatic_factor}, boundary);
  return state.psi_left.dot(dh * state.psi_right);
}

PumpResult bod_cycle(const DriveParams& p, Band band, const TorusGrid& grid,
                     const PumpOptions& opts) {
  grid.validate();
  EvolveOptions evo_opts;
  evo_opts.n_steps = opts.n_steps;
  evo_opts.rescale_every = opts.rescale_every;
  evo_opts.collapse_tol = opts.collapse_tol;

  PumpResult result;
  std::vector<cplx> sum(opts.n_steps + 1, cplx{});
  auto series = empty_series(opts.n_steps);
  const double dt = p.period() / opts.n_steps;
  for (int j = 0; j < opts.n_steps; ++j) series[j].phase = j * dt / p.adiabatic_factor;

  for (int i = 0; i < grid.n_momentum; ++i) {
    const double k = grid.momentum(i);
    PairEvolution evo = make_evolution(p, k, band, grid.boundary, evo_opts);
    for (int j = 0; j < opts.n_steps; ++j) {
      const BlochVector d = from_matrix(hamiltonian(p, {k, series[j].phase}, grid.boundary));
      update_im(series[j], band_energy(d, band).imag());
      evo.step();
      sum[j + 1] += evo.displacement();
    }
    result.max_overlap_drift = std::max(result.max_overlap_drift, evo.max_overlap_drift());
  }

  // periodic trapezoid in momentum is the plain mean
  result.bod_vs_time.resize(sum.size());
  for (std::size_t j = 0; j < sum.size(); ++j)
    result.bod_vs_time[j] = sum[j] / static_cast<double>(grid.n_momentum);
  result.bod = result.bod_vs_time.back();
  result.im_stats = summarize(std::move(series));

  try {
    result.chern_reference = chern_plaquette(p, band, grid, opts.chern);
  } catch (const DomainError& e) {
    result.chern_error = e.name();
  }
  return result;
}

ImStats imag_fluctuation(const DriveParams& p, Band band, const TorusGrid& grid) {
  grid.validate();
  if (grid.boundary == Boundary::OBC) gbz_radius(p);
  auto series = empty_series(grid.n_phase);
  for (int j = 0; j < grid.n_phase; ++j) {
    series[j].phase = grid.phase(j);
    for (int i = 0; i < grid.n_momentum; ++i) {
      const BlochVector d =
          from_matrix(hamiltonian(p, {grid.momentum(i), grid.phase(j)}, grid.boundary));
      update_im(series[j], band_energy(d, band).imag());
    }
  }
  return summarize(std::move(series));
}

}  // namespace nhpump
