#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nhpump/eigensystem.hpp"
#include "nhpump/model.hpp"
#include "nhpump/topology.hpp"

namespace nhpump {

/// Right state evolved under H and left state evolved under H^dagger. The
/// stored vectors are rescaled by reciprocal real factors; the true states
/// are psi * exp(log_scale).
struct PumpState {
  Vector2 psi_right;
  Vector2 psi_left;
  double time = 0.0;
  double log_scale_right = 0.0;
  double log_scale_left = 0.0;

  cplx overlap() const { return psi_left.dot(psi_right); }
};

/// Hamiltonian at fixed momentum as a function of the drive phase.
using PhaseHamiltonian = std::function<Matrix2(double phase)>;

struct EvolveOptions {
  int n_steps = 4000;
  /// Rescale every this many steps; 0 disables rescaling.
  int rescale_every = 1;
  /// OverlapCollapse when |<L|R> - 1| exceeds this.
  double collapse_tol = 1e-4;
};

/// Fixed-step RK4 for the pair i d_t R = H R, i d_t L = H^dagger L over one
/// drive cycle [0, 2 pi A], optionally integrating <L| dH |R> alongside.
class PairEvolution {
 public:
  PairEvolution(PhaseHamiltonian h, PhaseHamiltonian velocity_operator,
                double adiabatic_factor, PumpState initial, const EvolveOptions& opts,
                double momentum = 0.0);

  void step();
  void run();

  const PumpState& state() const { return state_; }
  int steps_taken() const { return steps_; }
  int n_steps() const { return opts_.n_steps; }
  double step_size() const { return dt_; }
  /// Integral of the velocity matrix element over elapsed time.
  cplx displacement() const { return displacement_; }
  double max_overlap_drift() const { return max_drift_; }

 private:
  PhaseHamiltonian h_;
  PhaseHamiltonian dh_;
  double adiabatic_factor_;
  EvolveOptions opts_;
  double momentum_;
  double dt_;
  PumpState state_;
  int steps_ = 0;
  cplx displacement_{};
  double max_drift_ = 0.0;
};

/// Initial state: the band's biorthonormal eigenpair at drive phase 0.
PumpState initial_state(const DriveParams& p, double momentum, Band band, Boundary boundary);

/// Full trajectory, n_steps + 1 states including the initial one.
std::vector<PumpState> evolve_pair(const DriveParams& p, double momentum, Band band,
                                   int n_steps, Boundary boundary = Boundary::PBC);

/// <L| d_k H |R> at the state's time.
cplx velocity(const DriveParams& p, const PumpState& state, double momentum,
              Boundary boundary);

struct ImSample {
  double phase;
  double max_im;
  double min_im;
};

struct ImStats {
  double max_abs_im = 0.0;
  /// Spread over the cycle of max_k Im E.
  double im_range = 0.0;
  std::vector<ImSample> im_series;
};

struct PumpOptions {
  int n_steps = 4000;
  int rescale_every = 1;
  double collapse_tol = 1e-4;
  ChernOptions chern{};
};

struct PumpResult {
  /// Net displacement; the real part is the physical prediction.
  cplx bod{};
  /// Displacement after each step, starting at 0 and ending at bod.
  std::vector<cplx> bod_vs_time;
  std::optional<ChernResult> chern_reference;
  /// Error name when the Chern reference could not be computed.
  std::string chern_error;
  ImStats im_stats;
  double max_overlap_drift = 0.0;
};

/// Evolves one pair per momentum of the grid and integrates the velocity
/// over the cycle and the momentum circle. The Chern reference uses the same
/// grid.
PumpResult bod_cycle(const DriveParams& p, Band band, const TorusGrid& grid,
                     const PumpOptions& opts = {});

/// Instantaneous Im E of the band over the torus grid.
ImStats imag_fluctuation(const DriveParams& p, Band band, const TorusGrid& grid);

}  // namespace nhpump
