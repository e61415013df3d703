#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wt {

// Declarative experiment description.  One flat key-value document with a
// section per module; every run is fully determined by (config, seed).
struct ExperimentConfig {
  // [experiment]
  std::string kind; // mc-kinetic-3w, mc-kinetic-4w, perturbation-scaling,
                    // onemode-pdf, pbp-triad, kz-flux-scan
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  bool reproducible = true;
  int workers = 0; // 0 = all hardware threads

  // [lattice]
  int dim = 1;
  int n_side = 64;
  double box_length = 125.66370614359172; // 40*pi

  // [system]
  std::string system_kind = "capillary";
  double sigma = 1.0;
  double beta = 1.0;
  double rho = 1.0;
  double g = 9.81;
  double sound_speed = 1.0;
  double coupling_v0 = 0.25;
  double epsilon = 0.05;

  // [ensemble]
  int realizations = 200;
  std::string amplitude_law = "deterministic-level"; // or "rayleigh"

  // [spectrum]
  std::string spectrum = "gauss-bump"; // flat | gauss-bump | thermal
  double n0 = 1.0;
  double k0 = 1.5;
  double kwidth = 0.75;
  double t_eq = 1.0;

  // [time]
  double horizon = 12.0; // window T
  double dt = 0.0;       // 0 = auto: (2 pi / omega_max) / 20 / 1.2

  // [kinetics]
  std::string delta_kernel = "window"; // window | triangular | lorentzian
  double delta_omega = 1.0;            // list cutoff / kernel half-width
  double forcing_rate = 0.0;           // kz-flux-scan gamma_tilde amplitude
  double kinetic_time = 0.0;           // kz-flux-scan relaxation horizon

  // [perturbation]
  std::string expansion = "3w"; // 3w | 4w
  std::vector<double> eps_values = {0.02, 0.04, 0.08};
  double pert_window = 2.0;

  // [onemode]
  double level = 1.0; // spectrum value n
  double eta = 1.0;
  double flux = -0.01;
  double s_nl = 0.0; // 0 = no cutoff
  int cells = 400;

  // [pbp]
  int pbp_cells = 48;
  double omega1 = 0.9;
  double omega2 = 1.3;
};

// Parses and validates the key-value document; fills defaults, rejects
// unknown sections/keys (naming them) and out-of-range values (naming the
// bound).  Parse errors carry the line number.
ExperimentConfig validate_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical text form of the config (defaults applied, keys sorted); the
// config hash in run summaries is computed over this.
std::string canonical_config(const ExperimentConfig& cfg);

} // namespace wt
