#pragma once

#include "wt/resonance.hpp"

namespace wt {

// Broadened frequency delta used when discrete sums approximate the
// resonant-manifold integrals.  All kernels are normalized to unit area;
// "unit" assigns weight 1 to every listed tuple (synthetic sets where the
// normalization is folded into the couplings).
enum class DeltaKernelKind { triangular, lorentzian, window_sinc2, unit };

struct DeltaKernel {
  DeltaKernelKind kind = DeltaKernelKind::triangular;
  double scale = 1.0; // half-width, or the time window for window_sinc2

  double operator()(double x) const;

  static DeltaKernel triangular(double half_width);
  static DeltaKernel lorentzian(double half_width);
  // Finite-time broadening |Delta(x,T)|^2 / (2 pi T); this is the kernel an
  // ensemble measured over a window of length T actually sees.
  static DeltaKernel window(double T);
  static DeltaKernel unit();
};

struct CollisionRates {
  ArrayXd eta;   // gain
  ArrayXd gamma; // loss rate
  // number of tuples with nonzero kernel weight; zero means the broadened
  // delta missed every listed resonance and the rates are identically zero
  long active_terms = 0;
};

CollisionRates collision_rates_3w(const ArrayXd& n, const WaveSystem& sys,
                                  const TriadSet& triads,
                                  const DeltaKernel& kernel);
// shift, when given, evaluates the broadened delta at the
// renormalization-shifted detunings.
CollisionRates collision_rates_4w(const ArrayXd& n, const WaveSystem& sys,
                                  const QuartetSet& quartets,
                                  const DeltaKernel& kernel,
                                  const ArrayXd* shift = nullptr);

struct KineticState {
  ArrayXd n;
  ArrayXd eta, gamma;
  ArrayXd gamma_tilde; // source (>0) / sink (<0) rate; zero when absent
  double time = 0.0;
};

KineticState make_kinetic_state(ArrayXd n0);

void refresh_rates_3w(KineticState& state, const WaveSystem& sys,
                      const TriadSet& triads, const DeltaKernel& kernel);
void refresh_rates_4w(KineticState& state, const WaveSystem& sys,
                      const QuartetSet& quartets, const DeltaKernel& kernel);

// One explicit Euler update n += dt * (eta - (gamma - gamma_tilde) * n)
// from the stored rates.  Requires dt <= 0.1 / max(gamma - gamma_tilde).
void advance(KineticState& state, double dt);

// refresh + advance.
void step_kinetic_3w(KineticState& state, const WaveSystem& sys,
                     const TriadSet& triads, const DeltaKernel& kernel,
                     double dt);
void step_kinetic_4w(KineticState& state, const WaveSystem& sys,
                     const QuartetSet& quartets, const DeltaKernel& kernel,
                     double dt);

// Omega_k from the mean spectrum: Omega_l = 2 eps sum_mu W^{l mu}_{l mu} n_mu.
ArrayXd frequency_shift_spectrum(const ArrayXd& n, const WaveSystem& sys,
                                 const QuartetSet& quartets);

} // namespace wt
