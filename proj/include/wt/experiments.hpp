#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wt/config.hpp"
#include "wt/kinetics.hpp"
#include "wt/onemode.hpp"
#include "wt/statistics.hpp"

namespace wt {

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunResult {
  std::string kind;
  std::vector<Verdict> verdicts;
  std::vector<std::string> artifacts;
  bool all_pass() const;
};

// Runs one declarative experiment: writes the data CSVs (with schema
// sidecars) and summary.json under cfg.output_dir and returns the verdicts.
RunResult run_experiment(const ExperimentConfig& cfg);

// ---- reusable experiment cores (also driven by the acceptance suite) ----

void parallel_for(int count, int workers, const std::function<void(int)>& body);

ArrayXd spectrum_preset(const FourierLattice& lattice, const std::string& kind,
                        const WaveSystem& sys, double n0, double k0,
                        double kwidth, double t_eq);

struct McKineticResult {
  ArrayXd k_abs, omega;
  ArrayXd n_initial, n_final;
  ArrayXd dndt_mc, dndt_mc_stderr, dndt_kin;
  double window = 0.0;
  double coverage_min = 0.0; // modes within the kernel width, worst case
};

McKineticResult mc_kinetic_3w(const FourierLattice& lattice,
                              const WaveSystem& sys, const AmplitudeLaw& law,
                              int realizations, double T, double dt,
                              std::uint64_t seed, int workers);
McKineticResult mc_kinetic_4w(const FourierLattice& lattice,
                              const WaveSystem& sys, const AmplitudeLaw& law,
                              int realizations, double T, double dt,
                              std::uint64_t seed, int workers);

// Relative agreement of measured vs predicted rates over the modes whose
// predicted |rate| lies in the top quartile.
struct RateAgreement {
  double worst_rel = 0.0;
  int modes_checked = 0;
  double threshold_rate = 0.0;
};
RateAgreement rate_agreement(const McKineticResult& r);

struct ScalingResult {
  std::vector<double> eps;
  std::vector<double> residual;
  double slope = 0.0;
};

ScalingResult perturbation_scaling_3w(const std::vector<double>& eps_values,
                                      double T, std::uint64_t seed);
ScalingResult perturbation_scaling_4w(const std::vector<double>& eps_values,
                                      double T, std::uint64_t seed);

// ---- desk-scale PBP studies on synthetic exact-resonance sets ----

// Interior divergence residual of the thermodynamic product PDF on one
// exactly resonant triad with frequencies (omega1, omega2, omega1+omega2).
double pbp_thermo_residual(double omega1, double omega2, int cells);

// Max relative gap between the marginal one-mode flux of a 3-mode product
// PDF and the onemode-module flux built from the induced (eta, gamma, n).
double pbp_marginal_gap(double omega1, double omega2, int cells);

// ---- one-mode steady-state diagnostics ----

// Max relative residual |-s (gamma P + eta dP/ds) - F| / |F| over the grid
// interior of a constant-flux steady pdf, with dP/ds taken by high-order
// finite differences of the stored grid values.
double steady_plugback_residual(const OneModePdf& pdf, double F);

// Sign dichotomy of the finite-flux tail against the same-n Rayleigh
// density: negative flux enhances the tail, positive flux depletes it.
bool tail_dichotomy_holds(const OneModePdf& pdf, double F, double s_cut);

struct PbpKzStudy {
  double thermo_residual = 0.0; // thermodynamic product, same grid
  double flux_residual = 0.0;   // product built from the through-flux steady
                                // spectrum of the forced kinetic equation
  double ratio = 0.0;
  ArrayXd steady_n;
};
// Four modes chained by two exact triads, forced at the bottom and damped at
// the top; the kinetic steady spectrum carries a through-flux.
PbpKzStudy pbp_kz_study(int cells);

} // namespace wt
