#pragma once

#include <utility>

#include "nhpump/model.hpp"

namespace nhpump {

enum class Band { plus, minus };

const char* to_string(Band b);
Band parse_band(const std::string& s);

struct EigenTolerances {
  /// |E| at or below this is treated as an exceptional point.
  double ep_tol = 1e-8;
  /// Below this norm the Eq.-5-style right vector is replaced by the
  /// alternate row form.
  double switch_tol = 1e-6;
};

/// One band of a 2x2 non-Hermitian Bloch Hamiltonian with matched right and
/// left eigenvectors, normalized so that <left|right> = 1.
struct BiorthPair {
  cplx energy;
  Vector2 right;
  Vector2 left;
  Band band = Band::plus;
};

/// Principal branch of sqrt(d1^2 + d2^2 + d3^2): Re E >= 0, and Im E >= 0
/// on the imaginary axis. The minus band carries -E.
cplx band_energy(const BlochVector& d);
cplx band_energy(const BlochVector& d, Band band);

/// Both bands, plus first. Throws ExceptionalPoint when |E| <= ep_tol.
std::pair<BiorthPair, BiorthPair> eigensystem(const BlochVector& d,
                                              const EigenTolerances& tol = {});

BiorthPair eigenpair(const BlochVector& d, Band band, const EigenTolerances& tol = {});

/// Phase rigidity |<l|r>| / (|l| |r|) of the plus band; 1 for Hermitian
/// points, tending to 0 at an exceptional point (returns 0 when |E| <= ep_tol).
double ep_defect(const BlochVector& d, const EigenTolerances& tol = {});

/// Rescales right so that its first non-vanishing component is real and
/// positive, with left compensated to keep <left|right> = 1.
void fix_gauge(BiorthPair& pair, double zero_tol = 1e-12);

}  // namespace nhpump
