#pragma once

#include <optional>
#include <vector>

#include "wt/resonance.hpp"

namespace wt {

// Complex mode amplitudes in the interaction representation.
struct WaveField {
  FourierLattice lattice;
  ArrayXcd a;
  double time = 0.0;
};

WaveField make_field(const FourierLattice& lattice);

// Per-mode nonlinear frequency shift Omega_l = 2 eps sum_mu W^{l mu}_{l mu} A_mu^2.
using FrequencyShift = ArrayXd;
FrequencyShift frequency_shift(const ArrayXcd& a, const WaveSystem& sys,
                               const QuartetSet& quartets);

ArrayXcd rhs_three_wave(const WaveField& field, const WaveSystem& sys,
                        const TriadSet& triads);
ArrayXcd rhs_four_wave(const WaveField& field, const WaveSystem& sys,
                       const QuartetSet& quartets, const FrequencyShift& shift);

enum class ShiftPolicy {
  refresh_each_step, // recompute Omega from current amplitudes every step
  frozen             // hold Omega fixed at its value on entry
};

struct IntegrateOptions {
  double dt = 0.0;
  ShiftPolicy shift_policy = ShiftPolicy::refresh_each_step;
  int sample_every = 0; // if > 0, record the state every that many steps
};

struct Trajectory {
  std::vector<double> times;
  std::vector<ArrayXcd> states;
};

// Classical fixed-step RK4 with the oscillating phase factors evaluated
// exactly at the stage times.  Requires dt <= (2*pi/omega_max)/20 so the
// linear oscillations inside the interaction terms are resolved; throws on
// violation and on non-finite amplitudes (integration blow-up).
WaveField integrate_three_wave(WaveField field, const WaveSystem& sys,
                               const TriadSet& triads, double T,
                               const IntegrateOptions& opts,
                               Trajectory* trajectory = nullptr);
WaveField integrate_four_wave(WaveField field, const WaveSystem& sys,
                              const QuartetSet& quartets, double T,
                              const IntegrateOptions& opts,
                              Trajectory* trajectory = nullptr);

// H2 + H3 (or H2 + H4) in the canonical variables reconstructed from the
// interaction-representation amplitudes at field.time.
double hamiltonian(const WaveField& field, const WaveSystem& sys,
                   const TriadSet& triads);
double hamiltonian(const WaveField& field, const WaveSystem& sys,
                   const QuartetSet& quartets,
                   const FrequencyShift* shift = nullptr);

double max_dispersion(const FourierLattice& lattice, const WaveSystem& sys);

} // namespace wt
