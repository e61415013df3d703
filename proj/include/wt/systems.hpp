#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wt/types.hpp"

namespace wt {

enum class SystemKind { capillary, rossby, nls, gravity, acoustic, custom };
enum class InteractionOrder { three_wave, four_wave };

using DispersionHook = DispersionFn;
using Coupling3Hook =
    std::function<Complex(const KVec&, const KVec&, const KVec&)>;
using Coupling4Hook =
    std::function<Complex(const KVec&, const KVec&, const KVec&, const KVec&)>;

// Dispersion law plus interaction coefficients for one wave system.
// epsilon is the formal nonlinearity parameter of the evolution equations.
struct WaveSystem {
  SystemKind kind = SystemKind::nls;
  InteractionOrder order = InteractionOrder::four_wave;
  double epsilon = 0.1;

  double sigma = 1.0; // capillary surface tension
  double beta = 1.0;  // Coriolis parameter gradient (Rossby)
  double rho = 1.0;   // Rossby deformation radius
  double g = 9.81;    // gravity acceleration (dispersion-only system)
  double c = 1.0;     // acoustic sound speed
  double v0 = 0.5;    // acoustic coupling strength

  // hooks for kind == custom
  DispersionHook custom_dispersion;
  Coupling3Hook custom_coupling3;
  Coupling4Hook custom_coupling4;

  static WaveSystem capillary(double sigma, double epsilon);
  static WaveSystem rossby(double beta, double rho, double epsilon);
  static WaveSystem nls(double epsilon);
  static WaveSystem gravity(double g, double epsilon);
  // nondispersive three-wave system omega = c|k| with a constant coupling;
  // collinear triads resonate exactly, which makes it the strongest-mixing
  // benchmark system
  static WaveSystem acoustic(double c, double v0, double epsilon);
  static WaveSystem custom3(DispersionHook w, Coupling3Hook v, double epsilon);
  static WaveSystem custom4(DispersionHook w, Coupling4Hook w4, double epsilon);
};

double dispersion(const WaveSystem& sys, const KVec& k);

// V^l_{mn}: three-wave coefficient; zero whenever any argument is the zero
// wavevector.  Custom hooks are symmetrized over m <-> n, which is the only
// part that enters the cubic Hamiltonian.
Complex coupling3(const WaveSystem& sys, const KVec& kl, const KVec& km,
                  const KVec& kn);

// W^{lm}_{mu nu}: four-wave coefficient, symmetrized over l <-> m and
// mu <-> nu for custom hooks; zero on zero-wavevector arguments.
Complex coupling4(const WaveSystem& sys, const KVec& kl, const KVec& km,
                  const KVec& kmu, const KVec& knu);

// Non-fatal regime diagnostics (e.g. epsilon outside the weakly nonlinear
// range).  Empty when nothing is worth flagging.
std::vector<std::string> system_warnings(const WaveSystem& sys);

// Convenience adapter for the lattice resonance search.
DispersionHook dispersion_fn(const WaveSystem& sys);

} // namespace wt
