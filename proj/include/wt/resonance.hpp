#pragma once

#include <array>
#include <limits>
#include <memory>
#include <vector>

#include "wt/lattice.hpp"
#include "wt/systems.hpp"

namespace wt {

// Resonance lists with the interaction coefficients evaluated once and
// cached per entry.  Entries are fully ordered: the double (triple) sums of
// the evolution equations map onto a single pass over the list, and the
// Kronecker momentum delta absorbs the dummy-sum measure, so collision sums
// over these tuples carry no extra lattice factor.

struct TriadTerm {
  int j, m, n;     // k_j = k_m + k_n
  double detuning; // omega_j - omega_m - omega_n
  Complex V;       // V^j_{mn}
};

struct TriadSet {
  std::vector<TriadTerm> terms;
  int mode_count = 0;
  double delta_omega = std::numeric_limits<double>::infinity();
};

struct QuartetTerm {
  int j, l, m, n;  // k_j + k_l = k_m + k_n
  double detuning; // omega_j + omega_l - omega_m - omega_n
  Complex W;       // W^{jl}_{mn}
};

struct QuartetSet {
  std::vector<QuartetTerm> terms;
  int mode_count = 0;
  double delta_omega = std::numeric_limits<double>::infinity();
  // W^{l mu}_{l mu} for all mode pairs; feeds the frequency shift.
  Eigen::MatrixXd self_coupling;
};

TriadSet build_triad_set(const FourierLattice& lattice, const WaveSystem& sys,
                         double delta_omega);
QuartetSet build_quartet_set(const FourierLattice& lattice,
                             const WaveSystem& sys, double delta_omega);

// Process-wide memoization for built-in system kinds; the scan dominates
// setup cost and the sets are immutable, so sharing is safe.  Custom systems
// are always built fresh (their hooks have no stable fingerprint).
std::shared_ptr<const TriadSet> cached_triad_set(const FourierLattice& lattice,
                                                 const WaveSystem& sys,
                                                 double delta_omega);
std::shared_ptr<const QuartetSet> cached_quartet_set(
    const FourierLattice& lattice, const WaveSystem& sys, double delta_omega);

// Synthetic exactly-resonant sets for desk-scale experiments: mode
// frequencies are assigned directly, so resonance holds by construction
// even when no lattice dispersion admits exact triads.  Each listed tuple
// is expanded to the full ordered closure (m <-> n for triads; j <-> l,
// m <-> n and side exchange for quartets).
TriadSet synthetic_triad_set(const std::vector<double>& omega,
                             const std::vector<std::array<int, 3>>& triads,
                             Complex V);
QuartetSet synthetic_quartet_set(const std::vector<double>& omega,
                                 const std::vector<std::array<int, 4>>& quartets,
                                 Complex W);

} // namespace wt
