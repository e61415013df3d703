#include "wt/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace wt {

bool FourierLattice::contains(const IndexVec& l) const {
  for (int i = 0; i < dim; ++i)
    if (l[i] < lower() || l[i] > upper()) return false;
  for (int i = dim; i < 3; ++i)
    if (l[i] != 0) return false;
  return true;
}

int FourierLattice::flat_index(const IndexVec& l) const {
  if (!contains(l)) return -1;
  int flat = 0;
  for (int i = 0; i < dim; ++i) flat = flat * n_side + (l[i] - lower());
  return flat;
}

IndexVec FourierLattice::index_vector(int flat) const {
  IndexVec l = IndexVec::Zero();
  for (int i = dim - 1; i >= 0; --i) {
    l[i] = flat % n_side + lower();
    flat /= n_side;
  }
  return l;
}

KVec FourierLattice::wavevector(int flat) const {
  return wavevector(index_vector(flat));
}

KVec FourierLattice::wavevector(const IndexVec& l) const {
  return (2.0 * pi / box_length) * l.cast<double>();
}

FourierLattice build_lattice(int dim, int n_side, double box_length) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("build_lattice: dim must be 1, 2 or 3");
  if (n_side < 2)
    throw std::invalid_argument("build_lattice: n_side must be >= 2");
  if (!(box_length > 0.0))
    throw std::invalid_argument("build_lattice: box_length must be positive");
  return FourierLattice{dim, n_side, box_length};
}

std::vector<Triad> find_triads(const FourierLattice& lattice,
                               const DispersionFn& dispersion,
                               double delta_omega) {
  if (delta_omega < 0.0)
    throw std::invalid_argument("find_triads: delta_omega must be >= 0");
  const int N = lattice.mode_count();
  std::vector<double> omega(N);
  std::vector<bool> zero(N);
  for (int i = 0; i < N; ++i) {
    omega[i] = dispersion(lattice.wavevector(i));
    zero[i] = lattice.is_zero_mode(i);
  }
  std::vector<Triad> out;
  for (int m = 0; m < N; ++m) {
    if (zero[m]) continue;
    const IndexVec lm = lattice.index_vector(m);
    for (int n = 0; n < N; ++n) {
      if (zero[n]) continue;
      const IndexVec lj = lm + lattice.index_vector(n);
      const int j = lattice.flat_index(lj);
      if (j < 0 || zero[j]) continue;
      const double det = omega[j] - omega[m] - omega[n];
      if (std::abs(det) <= delta_omega) out.push_back({j, m, n, det});
    }
  }
  return out;
}

std::vector<Quartet> find_quartets(const FourierLattice& lattice,
                                   const DispersionFn& dispersion,
                                   double delta_omega) {
  if (delta_omega < 0.0)
    throw std::invalid_argument("find_quartets: delta_omega must be >= 0");
  const int N = lattice.mode_count();
  std::vector<double> omega(N);
  std::vector<bool> zero(N);
  for (int i = 0; i < N; ++i) {
    omega[i] = dispersion(lattice.wavevector(i));
    zero[i] = lattice.is_zero_mode(i);
  }
  std::vector<Quartet> out;
  for (int j = 0; j < N; ++j) {
    if (zero[j]) continue;
    const IndexVec vj = lattice.index_vector(j);
    for (int l = 0; l < N; ++l) {
      if (zero[l]) continue;
      const IndexVec vjl = vj + lattice.index_vector(l);
      for (int m = 0; m < N; ++m) {
        if (zero[m]) continue;
        const IndexVec vn = vjl - lattice.index_vector(m);
        const int n = lattice.flat_index(vn);
        if (n < 0 || zero[n]) continue;
        const double det = omega[j] + omega[l] - omega[m] - omega[n];
        if (std::abs(det) <= delta_omega) out.push_back({j, l, m, n, det});
      }
    }
  }
  return out;
}

} // namespace wt
