#include "wt/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wt {

AmplitudeLaw AmplitudeLaw::deterministic(ArrayXd level) {
  AmplitudeLaw law;
  law.kind = AmplitudeLawKind::deterministic_level;
  law.level = std::move(level);
  return law;
}

AmplitudeLaw AmplitudeLaw::rayleigh_law(ArrayXd level) {
  AmplitudeLaw law;
  law.kind = AmplitudeLawKind::rayleigh;
  law.level = std::move(level);
  return law;
}

AmplitudeLaw AmplitudeLaw::tabulated_law(ArrayXd level, std::vector<double> s,
                                         std::vector<double> p) {
  if (s.empty() || s.size() != p.size())
    throw std::invalid_argument("tabulated_law: atoms and weights mismatch");
  double total = 0.0;
  for (double w : p) {
    if (w < 0.0) throw std::invalid_argument("tabulated_law: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("tabulated_law: weights must sum to 1");
  AmplitudeLaw law;
  law.kind = AmplitudeLawKind::tabulated;
  law.level = std::move(level);
  law.atom_s = std::move(s);
  law.atom_p = std::move(p);
  return law;
}

ArrayXcd rpa_sample(const AmplitudeLaw& law, std::uint64_t seed,
                    std::uint64_t realization) {
  const int N = static_cast<int>(law.level.size());
  ArrayXcd a(N);
  for (int l = 0; l < N; ++l) {
    const Complex psi = rng::unit_phase(seed, realization, l, 0);
    double s = 0.0; // intensity A^2
    switch (law.kind) {
      case AmplitudeLawKind::deterministic_level:
        s = law.level[l];
        break;
      case AmplitudeLawKind::rayleigh:
        s = -law.level[l] * std::log(rng::uniform_open(seed, realization, l, 1));
        break;
      case AmplitudeLawKind::tabulated: {
        const double u = rng::uniform(seed, realization, l, 1);
        double cum = 0.0;
        std::size_t pick = law.atom_s.size() - 1;
        for (std::size_t i = 0; i < law.atom_p.size(); ++i) {
          cum += law.atom_p[i];
          if (u < cum) {
            pick = i;
            break;
          }
        }
        s = law.atom_s[pick] * law.level[l];
        break;
      }
    }
    a[l] = std::sqrt(s) * psi;
  }
  return a;
}

WaveField generate_rpa_field(const FourierLattice& lattice,
                             const AmplitudeLaw& law, std::uint64_t seed,
                             std::uint64_t realization) {
  if (law.level.size() != lattice.mode_count())
    throw std::invalid_argument(
        "generate_rpa_field: law level size does not match the lattice");
  WaveField f;
  f.lattice = lattice;
  f.a = rpa_sample(law, seed, realization);
  f.time = 0.0;
  return f;
}

EnsembleStats estimate_moments(const Ensemble& ensemble, int p_max) {
  if (ensemble.size() < 2)
    throw std::invalid_argument("estimate_moments: need at least 2 realizations");
  if (p_max < 1) throw std::invalid_argument("estimate_moments: p_max >= 1");
  const int R = static_cast<int>(ensemble.size());
  const int N = static_cast<int>(ensemble[0].size());
  EnsembleStats st;
  st.realizations = R;
  st.M = ArrayXXd::Zero(N, p_max + 1);
  st.M_stderr = ArrayXXd::Zero(N, p_max + 1);
  st.M.col(0) = 1.0;
  ArrayXXd sumsq = ArrayXXd::Zero(N, p_max + 1);
  for (const ArrayXcd& a : ensemble) {
    if (a.size() != N)
      throw std::invalid_argument("estimate_moments: ragged ensemble");
    ArrayXd power = ArrayXd::Ones(N);
    const ArrayXd s = a.abs2();
    for (int p = 1; p <= p_max; ++p) {
      power *= s;
      st.M.col(p) += power;
      sumsq.col(p) += power.square();
    }
  }
  st.M.rightCols(p_max) /= R;
  for (int p = 1; p <= p_max; ++p) {
    const ArrayXd var =
        (sumsq.col(p) / R - st.M.col(p).square()).max(0.0) * R / (R - 1.0);
    st.M_stderr.col(p) = (var / R).sqrt();
  }
  st.n = st.M.col(1);
  st.sigma = (st.M.col(2) - st.n.square()).max(0.0).sqrt();
  return st;
}

OneModeHistogram estimate_one_mode_pdf(const Ensemble& ensemble, int mode,
                                       const ArrayXd& s_edges) {
  const int B = static_cast<int>(s_edges.size()) - 1;
  if (B < 1) throw std::invalid_argument("estimate_one_mode_pdf: empty grid");
  for (int i = 0; i < B; ++i)
    if (!(s_edges[i + 1] > s_edges[i]))
      throw std::invalid_argument(
          "estimate_one_mode_pdf: s grid must be strictly increasing");
  OneModeHistogram h;
  h.s_edges = s_edges;
  h.density = ArrayXd::Zero(B);
  h.density_stderr = ArrayXd::Zero(B);
  ArrayXd counts = ArrayXd::Zero(B);
  for (const ArrayXcd& a : ensemble) {
    const double s = std::norm(a[mode]);
    if (s < s_edges[0] || s >= s_edges[B]) {
      ++h.outside;
      continue;
    }
    // binary search for the bin
    const double* begin = s_edges.data();
    const double* pos = std::upper_bound(begin, begin + B + 1, s);
    counts[static_cast<int>(pos - begin) - 1] += 1.0;
  }
  h.samples = static_cast<int>(ensemble.size());
  const double inside = counts.sum();
  if (inside == 0.0)
    throw std::invalid_argument("estimate_one_mode_pdf: no samples on the grid");
  const ArrayXd widths = s_edges.tail(B) - s_edges.head(B);
  // normalized over the grid: sum(density * ds) = 1
  h.density = counts / (inside * widths);
  for (int b = 0; b < B; ++b) {
    const double p = counts[b] / inside;
    h.density_stderr[b] = std::sqrt(std::max(p * (1.0 - p) / inside, 0.0)) /
                          widths[b];
  }
  if (h.samples < 10 * B)
    h.warnings.push_back("undersampled grid: fewer than 10 samples per bin");
  if (h.outside > 0)
    h.warnings.push_back("samples outside the s grid were dropped");
  return h;
}

PhaseDiagnostics phase_diagnostics(const Ensemble& ensemble,
                                   std::uint64_t pair_seed, int max_pairs) {
  const int R = static_cast<int>(ensemble.size());
  if (R < 100)
    throw std::invalid_argument(
        "phase_diagnostics: need at least 100 realizations");
  const int N = static_cast<int>(ensemble[0].size());
  PhaseDiagnostics d;
  d.realizations = R;
  d.threshold = 3.0 / std::sqrt(static_cast<double>(R));

  ArrayXXcd psi(N, R);
  for (int r = 0; r < R; ++r) {
    const ArrayXcd& a = ensemble[r];
    for (int l = 0; l < N; ++l) {
      const double mag = std::abs(a[l]);
      psi(l, r) = mag > 0.0 ? a[l] / mag : Complex(0.0, 0.0);
    }
  }
  d.psi_mean = psi.rowwise().mean();
  d.rayleigh_p = ArrayXd::Zero(N);
  for (int l = 0; l < N; ++l) {
    const double rbar = std::abs(d.psi_mean[l]);
    const double z = R * rbar * rbar;
    double p = std::exp(-z) * (1.0 + (2.0 * z - z * z) / (4.0 * R));
    d.rayleigh_p[l] = std::clamp(p, 0.0, 1.0);
    if (d.rayleigh_p[l] <= 0.01) ++d.uniformity_violations;
    if (std::abs(d.psi_mean[l]) > d.threshold) ++d.mean_violations;
  }

  std::vector<std::pair<int, int>> pair_list;
  if (N <= 128) {
    for (int l = 0; l < N; ++l)
      for (int m = l + 1; m < N; ++m) pair_list.push_back({l, m});
  } else {
    for (int i = 0; i < max_pairs; ++i) {
      const int l = static_cast<int>(rng::uniform(pair_seed, i, 0, 2) * N);
      const int m = static_cast<int>(rng::uniform(pair_seed, i, 1, 2) * N);
      if (l != m) pair_list.push_back({std::min(l, m), std::max(l, m)});
    }
  }
  d.pairs.reserve(pair_list.size());
  for (const auto& [l, m] : pair_list) {
    const Complex pp = (psi.row(l) * psi.row(m)).mean();
    const Complex pq = (psi.row(l) * psi.row(m).conjugate()).mean();
    d.pairs.push_back({l, m, pp, pq});
    if (std::abs(pp) > d.threshold) ++d.pair_violations;
    if (std::abs(pq) > d.threshold) ++d.pair_violations;
  }
  return d;
}

SingularCumulant singular_cumulant(const Ensemble& ensemble) {
  if (ensemble.size() < 100)
    throw std::invalid_argument(
        "singular_cumulant: need at least 100 realizations");
  const int R = static_cast<int>(ensemble.size());
  const int N = static_cast<int>(ensemble[0].size());
  ArrayXd s1 = ArrayXd::Zero(N), s2 = ArrayXd::Zero(N);
  ArrayXd q2 = ArrayXd::Zero(N);
  for (const ArrayXcd& a : ensemble) {
    const ArrayXd s = a.abs2();
    s1 += s;
    s2 += s.square();
    q2 += s.square().square();
  }
  s1 /= R;
  s2 /= R;
  SingularCumulant out;
  out.Q = s2 - 2.0 * s1.square();
  // dominant error source is the <A^4> estimate
  const ArrayXd var4 = (q2 / R - s2.square()).max(0.0) * R / (R - 1.0);
  out.Q_stderr = (var4 / R).sqrt();
  return out;
}

double distance_correlation(const std::vector<double>& x,
                            const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 4)
    throw std::invalid_argument("distance_correlation: bad sample sizes");
  auto centered = [n](const std::vector<double>& v,
                      std::vector<double>& dist) {
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double d = std::abs(v[i] - v[j]);
        dist[i * n + j] = d;
        row_mean[i] += d;
      }
    for (std::size_t i = 0; i < n; ++i) {
      row_mean[i] /= n;
      grand += row_mean[i];
    }
    grand /= n;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        dist[i * n + j] += grand - row_mean[i] - row_mean[j];
  };
  std::vector<double> A(n * n), B(n * n);
  centered(x, A);
  centered(y, B);
  double vxy = 0.0, vxx = 0.0, vyy = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) {
    vxy += A[k] * B[k];
    vxx += A[k] * A[k];
    vyy += B[k] * B[k];
  }
  if (vxx <= 0.0 || vyy <= 0.0) return 0.0;
  return std::sqrt(std::max(vxy, 0.0) / std::sqrt(vxx * vyy));
}

} // namespace wt
