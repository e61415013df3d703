#pragma once

#include <functional>
#include <vector>

#include "wt/types.hpp"

namespace wt {

// Finite d-dimensional Fourier lattice with the centered index box: for even
// n_side indices run from -n_side/2 to n_side/2 - 1 per dimension, for odd
// n_side from -(n_side-1)/2 to (n_side-1)/2.  Mode index l carries the
// wavevector k = 2*pi*l / L.
struct FourierLattice {
  int dim = 1;
  int n_side = 0;
  double box_length = 0.0;

  int mode_count() const {
    int n = 1;
    for (int i = 0; i < dim; ++i) n *= n_side;
    return n;
  }
  double spacing() const { return 2.0 * pi / box_length; }
  double k_max() const { return pi * n_side / box_length; }
  int lower() const { return -(n_side / 2); }
  int upper() const { return n_side - n_side / 2 - 1; }

  bool contains(const IndexVec& l) const;
  int flat_index(const IndexVec& l) const; // -1 if outside the box
  IndexVec index_vector(int flat) const;
  KVec wavevector(int flat) const;
  KVec wavevector(const IndexVec& l) const;
  bool is_zero_mode(int flat) const { return index_vector(flat).isZero(); }
};

FourierLattice build_lattice(int dim, int n_side, double box_length);

// Momentum-conserving triple k_j = k_m + k_n with frequency detuning
// omega_j - omega_m - omega_n.  Lists are fully ordered in (m, n): a triad
// with m != n appears once per ordering.
struct Triad {
  int j, m, n;
  double detuning;
};

// Momentum-conserving quadruple k_j + k_l = k_m + k_n with detuning
// omega_j + omega_l - omega_m - omega_n; fully ordered in (l, m, n).
struct Quartet {
  int j, l, m, n;
  double detuning;
};

// All triads (quartets) with |detuning| <= delta_omega.  Tuples containing
// the zero wavevector are excluded; the interaction coefficients vanish
// there in any spatially homogeneous system.
std::vector<Triad> find_triads(const FourierLattice& lattice,
                               const DispersionFn& dispersion,
                               double delta_omega);
std::vector<Quartet> find_quartets(const FourierLattice& lattice,
                                   const DispersionFn& dispersion,
                                   double delta_omega);

} // namespace wt
