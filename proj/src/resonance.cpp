#include "wt/resonance.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace wt {

TriadSet build_triad_set(const FourierLattice& lattice, const WaveSystem& sys,
                         double delta_omega) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("build_triad_set: system is not three-wave");
  TriadSet set;
  set.mode_count = lattice.mode_count();
  set.delta_omega = delta_omega;
  const auto triads = find_triads(lattice, dispersion_fn(sys), delta_omega);
  set.terms.reserve(triads.size());
  for (const Triad& t : triads) {
    const Complex V = coupling3(sys, lattice.wavevector(t.j),
                                lattice.wavevector(t.m), lattice.wavevector(t.n));
    set.terms.push_back({t.j, t.m, t.n, t.detuning, V});
  }
  return set;
}

QuartetSet build_quartet_set(const FourierLattice& lattice,
                             const WaveSystem& sys, double delta_omega) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("build_quartet_set: system is not four-wave");
  QuartetSet set;
  const int N = lattice.mode_count();
  set.mode_count = N;
  set.delta_omega = delta_omega;
  const auto quartets = find_quartets(lattice, dispersion_fn(sys), delta_omega);
  set.terms.reserve(quartets.size());
  for (const Quartet& q : quartets) {
    const Complex W =
        coupling4(sys, lattice.wavevector(q.j), lattice.wavevector(q.l),
                  lattice.wavevector(q.m), lattice.wavevector(q.n));
    set.terms.push_back({q.j, q.l, q.m, q.n, q.detuning, W});
  }
  set.self_coupling.resize(N, N);
  for (int l = 0; l < N; ++l) {
    const KVec kl = lattice.wavevector(l);
    for (int mu = 0; mu < N; ++mu) {
      const KVec kmu = lattice.wavevector(mu);
      const Complex w = coupling4(sys, kl, kmu, kl, kmu);
      if (std::abs(w.imag()) > 1e-12 * (1.0 + std::abs(w.real())))
        throw std::invalid_argument(
            "build_quartet_set: self-coupling W^{l mu}_{l mu} must be real");
      set.self_coupling(l, mu) = w.real();
    }
  }
  return set;
}

namespace {

std::string system_fingerprint(const WaveSystem& sys) {
  std::ostringstream os;
  os.precision(17);
  os << static_cast<int>(sys.kind) << ':' << static_cast<int>(sys.order) << ':'
     << sys.sigma << ':' << sys.beta << ':' << sys.rho << ':' << sys.g;
  return os.str();
}

std::string set_key(const FourierLattice& lattice, const WaveSystem& sys,
                    double delta_omega) {
  std::ostringstream os;
  os.precision(17);
  os << lattice.dim << ':' << lattice.n_side << ':' << lattice.box_length
     << ':' << delta_omega << ':' << system_fingerprint(sys);
  return os.str();
}

std::mutex cache_mutex;
std::map<std::string, std::shared_ptr<const TriadSet>> triad_cache;
std::map<std::string, std::shared_ptr<const QuartetSet>> quartet_cache;

} // namespace

std::shared_ptr<const TriadSet> cached_triad_set(const FourierLattice& lattice,
                                                 const WaveSystem& sys,
                                                 double delta_omega) {
  if (sys.kind == SystemKind::custom)
    return std::make_shared<const TriadSet>(
        build_triad_set(lattice, sys, delta_omega));
  const std::string key = set_key(lattice, sys, delta_omega);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = triad_cache.find(key);
  if (it != triad_cache.end()) return it->second;
  auto set = std::make_shared<const TriadSet>(
      build_triad_set(lattice, sys, delta_omega));
  triad_cache.emplace(key, set);
  return set;
}

std::shared_ptr<const QuartetSet> cached_quartet_set(
    const FourierLattice& lattice, const WaveSystem& sys, double delta_omega) {
  if (sys.kind == SystemKind::custom)
    return std::make_shared<const QuartetSet>(
        build_quartet_set(lattice, sys, delta_omega));
  const std::string key = set_key(lattice, sys, delta_omega);
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = quartet_cache.find(key);
  if (it != quartet_cache.end()) return it->second;
  auto set = std::make_shared<const QuartetSet>(
      build_quartet_set(lattice, sys, delta_omega));
  quartet_cache.emplace(key, set);
  return set;
}

TriadSet synthetic_triad_set(const std::vector<double>& omega,
                             const std::vector<std::array<int, 3>>& triads,
                             Complex V) {
  TriadSet set;
  set.mode_count = static_cast<int>(omega.size());
  set.delta_omega = 0.0;
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& t : triads) {
    const int j = t[0], m = t[1], n = t[2];
    if (j < 0 || m < 0 || n < 0 || j >= set.mode_count ||
        m >= set.mode_count || n >= set.mode_count)
      throw std::invalid_argument("synthetic_triad_set: mode index out of range");
    for (const auto& [mm, nn] : {std::pair{m, n}, std::pair{n, m}}) {
      if (!seen.insert({j, mm, nn}).second) continue;
      set.terms.push_back({j, mm, nn, omega[j] - omega[mm] - omega[nn], V});
    }
  }
  return set;
}

QuartetSet synthetic_quartet_set(const std::vector<double>& omega,
                                 const std::vector<std::array<int, 4>>& quartets,
                                 Complex W) {
  QuartetSet set;
  const int N = static_cast<int>(omega.size());
  set.mode_count = N;
  set.delta_omega = 0.0;
  set.self_coupling = Eigen::MatrixXd::Zero(N, N);
  std::set<std::tuple<int, int, int, int>> seen;
  for (const auto& q : quartets) {
    for (int idx : q)
      if (idx < 0 || idx >= N)
        throw std::invalid_argument(
            "synthetic_quartet_set: mode index out of range");
    const int j = q[0], l = q[1], m = q[2], n = q[3];
    const std::array<std::array<int, 4>, 8> closure = {{
        {j, l, m, n}, {l, j, m, n}, {j, l, n, m}, {l, j, n, m},
        {m, n, j, l}, {n, m, j, l}, {m, n, l, j}, {n, m, l, j},
    }};
    for (const auto& c : closure) {
      if (!seen.insert({c[0], c[1], c[2], c[3]}).second) continue;
      const double det = omega[c[0]] + omega[c[1]] - omega[c[2]] - omega[c[3]];
      set.terms.push_back({c[0], c[1], c[2], c[3], det, W});
    }
  }
  return set;
}

} // namespace wt
