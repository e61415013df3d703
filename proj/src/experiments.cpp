#include "wt/experiments.hpp"

#include <atomic>
#include <cstdio>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wt/csvio.hpp"
#include "wt/onemode.hpp"
#include "wt/pbp.hpp"
#include "wt/perturbation.hpp"

namespace wt {

namespace {
std::string dstr(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
} // namespace

bool RunResult::all_pass() const {
  for (const Verdict& v : verdicts)
    if (!v.pass) return false;
  return true;
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

ArrayXd spectrum_preset(const FourierLattice& lattice, const std::string& kind,
                        const WaveSystem& sys, double n0, double k0,
                        double kwidth, double t_eq) {
  const int N = lattice.mode_count();
  ArrayXd n(N);
  for (int i = 0; i < N; ++i) {
    const KVec k = lattice.wavevector(i);
    const double kk = k.norm();
    if (kind == "flat") {
      n[i] = n0;
    } else if (kind == "gauss-bump") {
      const double u = (kk - k0) / kwidth;
      n[i] = n0 * std::exp(-u * u);
    } else if (kind == "thermal") {
      const double w = dispersion(sys, k);
      n[i] = w > 0.0 ? t_eq / w : 0.0;
    } else if (kind == "thermal-comb") {
      // equilibrium sea above k0 with every second mode emptied between
      // 2*k0 and kwidth; the empty comb modes become clean rate probes
      const double w = dispersion(sys, k);
      n[i] = (w > 0.0 && kk >= k0) ? t_eq / w : 0.0;
      const int l0 = lattice.index_vector(i)[0];
      if (kk >= 2.0 * k0 && kk <= kwidth && ((l0 % 2) + 2) % 2 == 0) n[i] = 0.0;
    } else {
      throw std::invalid_argument("spectrum_preset: unknown kind " + kind);
    }
    if (lattice.is_zero_mode(i)) n[i] = 0.0;
  }
  return n;
}

namespace {

constexpr double window_cut_factor = 32.0 * pi; // detuning cut |x| <= 32*pi/T

double auto_dt(const FourierLattice& lattice, const WaveSystem& sys,
               double requested) {
  if (requested > 0.0) return requested;
  const double wmax = max_dispersion(lattice, sys);
  return (2.0 * pi / wmax) / 20.0 / 1.2;
}

// per-mode count of modes inside the broadening width around its frequency
ArrayXd coverage_counts(const FourierLattice& lattice, const WaveSystem& sys,
                        double width) {
  const int N = lattice.mode_count();
  std::vector<double> omega(N);
  for (int i = 0; i < N; ++i) omega[i] = dispersion(sys, lattice.wavevector(i));
  ArrayXd c = ArrayXd::Zero(N);
  for (int i = 0; i < N; ++i) {
    if (lattice.is_zero_mode(i)) continue;
    int count = 0;
    for (int j = 0; j < N; ++j)
      if (!lattice.is_zero_mode(j) && std::abs(omega[j] - omega[i]) <= width)
        ++count;
    c[i] = count;
  }
  return c;
}

McKineticResult finish_mc(const FourierLattice& lattice, const WaveSystem& sys,
                          const ArrayXd& level, const ArrayXXd& s0,
                          const ArrayXXd& sT, double T,
                          const CollisionRates& rates) {
  const int N = static_cast<int>(s0.rows());
  const int R = static_cast<int>(s0.cols());
  McKineticResult out;
  out.window = T;
  out.k_abs.resize(N);
  out.omega.resize(N);
  for (int i = 0; i < N; ++i) {
    out.k_abs[i] = lattice.wavevector(i).norm();
    out.omega[i] = dispersion(sys, lattice.wavevector(i));
  }
  out.n_initial = s0.rowwise().mean();
  out.n_final = sT.rowwise().mean();
  const ArrayXXd incr = (sT - s0) / T;
  out.dndt_mc = incr.rowwise().mean();
  out.dndt_mc_stderr.resize(N);
  for (int i = 0; i < N; ++i) {
    const double m = out.dndt_mc[i];
    double var = 0.0;
    for (int r = 0; r < R; ++r) var += (incr(i, r) - m) * (incr(i, r) - m);
    var /= (R - 1.0);
    out.dndt_mc_stderr[i] = std::sqrt(var / R);
  }
  out.dndt_kin = rates.eta - rates.gamma * level;

  // coverage over the modes the agreement check will look at
  const ArrayXd counts = coverage_counts(lattice, sys, 2.0 * pi / T);
  const RateAgreement agree = [&] {
    McKineticResult tmp;
    tmp.dndt_kin = out.dndt_kin;
    tmp.dndt_mc = out.dndt_mc;
    return rate_agreement(tmp);
  }();
  double cmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < N; ++i)
    if (std::abs(out.dndt_kin[i]) >= agree.threshold_rate && counts[i] > 0.0)
      cmin = std::min(cmin, counts[i]);
  out.coverage_min = std::isfinite(cmin) ? cmin : 0.0;
  return out;
}

} // namespace

RateAgreement rate_agreement(const McKineticResult& r) {
  std::vector<double> mags;
  for (int i = 0; i < r.dndt_kin.size(); ++i)
    if (r.dndt_kin[i] != 0.0) mags.push_back(std::abs(r.dndt_kin[i]));
  RateAgreement out;
  if (mags.empty()) return out;
  std::sort(mags.begin(), mags.end());
  out.threshold_rate = mags[static_cast<std::size_t>(0.75 * (mags.size() - 1))];
  for (int i = 0; i < r.dndt_kin.size(); ++i) {
    if (std::abs(r.dndt_kin[i]) < out.threshold_rate) continue;
    ++out.modes_checked;
    const double rel =
        std::abs(r.dndt_mc[i] - r.dndt_kin[i]) / std::abs(r.dndt_kin[i]);
    out.worst_rel = std::max(out.worst_rel, rel);
  }
  return out;
}

McKineticResult mc_kinetic_3w(const FourierLattice& lattice,
                              const WaveSystem& sys, const AmplitudeLaw& law,
                              int realizations, double T, double dt,
                              std::uint64_t seed, int workers) {
  if (realizations < 2)
    throw std::invalid_argument("mc_kinetic_3w: need at least 2 realizations");
  const auto dyn = cached_triad_set(
      lattice, sys, std::numeric_limits<double>::infinity());
  const auto kin = cached_triad_set(lattice, sys, window_cut_factor / T);
  const DeltaKernel kernel = DeltaKernel::window(T);
  const int N = lattice.mode_count();
  const double h = auto_dt(lattice, sys, dt);

  ArrayXXd s0(N, realizations), sT(N, realizations);
  parallel_for(realizations, workers, [&](int r) {
    WaveField f = generate_rpa_field(lattice, law, seed, r);
    s0.col(r) = f.a.abs2();
    // control variate: the first-order interference 2 eps Re(conj(a0) a1)
    // has exactly zero phase average, so subtracting it removes the leading
    // Monte-Carlo noise without biasing the measured rate
    const ArrayXcd a1 = first_iterate_3w(f, sys, *dyn, T);
    const ArrayXd control =
        2.0 * sys.epsilon * (f.a.conjugate() * a1).real();
    IntegrateOptions opts;
    opts.dt = h;
    f = integrate_three_wave(std::move(f), sys, *dyn, T, opts);
    sT.col(r) = f.a.abs2() - control;
  });
  const CollisionRates rates = collision_rates_3w(law.level, sys, *kin, kernel);
  return finish_mc(lattice, sys, law.level, s0, sT, T, rates);
}

McKineticResult mc_kinetic_4w(const FourierLattice& lattice,
                              const WaveSystem& sys, const AmplitudeLaw& law,
                              int realizations, double T, double dt,
                              std::uint64_t seed, int workers) {
  if (realizations < 2)
    throw std::invalid_argument("mc_kinetic_4w: need at least 2 realizations");
  const auto dyn = cached_quartet_set(
      lattice, sys, std::numeric_limits<double>::infinity());
  // the renormalization shift moves detunings; pad the list cut accordingly
  const ArrayXd shift = frequency_shift_spectrum(law.level, sys, *dyn);
  const double pad = 4.0 * shift.abs().maxCoeff();
  const auto kin =
      cached_quartet_set(lattice, sys, window_cut_factor / T + pad);
  const DeltaKernel kernel = DeltaKernel::window(T);
  const int N = lattice.mode_count();
  const double h = auto_dt(lattice, sys, dt);

  ArrayXXd s0(N, realizations), sT(N, realizations);
  parallel_for(realizations, workers, [&](int r) {
    WaveField f = generate_rpa_field(lattice, law, seed, r);
    s0.col(r) = f.a.abs2();
    // zero-phase-mean control variate; the renormalization counter-term
    // makes the first-order drift vanish realization by realization
    const FrequencyShift rshift = frequency_shift(f.a, sys, *dyn);
    const ArrayXcd a1 = first_iterate_4w(f, sys, *dyn, rshift, T);
    const ArrayXd control =
        2.0 * sys.epsilon * (f.a.conjugate() * a1).real();
    IntegrateOptions opts;
    opts.dt = h;
    f = integrate_four_wave(std::move(f), sys, *dyn, T, opts);
    sT.col(r) = f.a.abs2() - control;
  });
  const CollisionRates rates =
      collision_rates_4w(law.level, sys, *kin, kernel, &shift);
  return finish_mc(lattice, sys, law.level, s0, sT, T, rates);
}

namespace {

double fit_slope(const std::vector<double>& eps,
                 const std::vector<double>& residual) {
  const int n = static_cast<int>(eps.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(eps[i]);
    const double y = std::log(residual[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

ScalingResult perturbation_scaling_3w(const std::vector<double>& eps_values,
                                      double T, std::uint64_t seed) {
  const FourierLattice lattice = build_lattice(1, 32, 2.0 * pi);
  WaveSystem sys = WaveSystem::capillary(1.0, eps_values.front());
  const auto triads = cached_triad_set(
      lattice, sys, std::numeric_limits<double>::infinity());
  const int N = lattice.mode_count();
  ArrayXd level(N);
  for (int i = 0; i < N; ++i) {
    const double k = lattice.wavevector(i).norm();
    level[i] = 0.02 / (1.0 + std::pow(k / 4.0, 2));
    if (lattice.is_zero_mode(i)) level[i] = 0.0;
  }
  const AmplitudeLaw law = AmplitudeLaw::rayleigh_law(level);
  const WaveField f0 = generate_rpa_field(lattice, law, seed, 0);

  const ArrayXcd a1 = first_iterate_3w(f0, sys, *triads, T);
  const ArrayXcd a2 = second_iterate_3w(f0, sys, *triads, T);

  IntegrateOptions opts;
  opts.dt = auto_dt(lattice, sys, 0.0) / 4.0;
  ScalingResult out;
  for (double eps : eps_values) {
    sys.epsilon = eps;
    WaveField f = integrate_three_wave(f0, sys, *triads, T, opts);
    const ArrayXcd model = f0.a + eps * a1 + eps * eps * a2;
    out.eps.push_back(eps);
    out.residual.push_back((f.a - model).matrix().norm());
  }
  out.slope = fit_slope(out.eps, out.residual);
  return out;
}

ScalingResult perturbation_scaling_4w(const std::vector<double>& eps_values,
                                      double T, std::uint64_t seed) {
  const FourierLattice lattice = build_lattice(1, 32, 2.0 * pi);
  WaveSystem sys = WaveSystem::nls(eps_values.front());
  const auto quartets = cached_quartet_set(
      lattice, sys, std::numeric_limits<double>::infinity());
  const int N = lattice.mode_count();
  ArrayXd level(N);
  for (int i = 0; i < N; ++i) {
    const double k = lattice.wavevector(i).norm();
    level[i] = 0.05 / (1.0 + std::pow(k / 4.0, 4));
    if (lattice.is_zero_mode(i)) level[i] = 0.0;
  }
  const AmplitudeLaw law = AmplitudeLaw::rayleigh_law(level);
  const WaveField f0 = generate_rpa_field(lattice, law, seed, 0);

  IntegrateOptions opts;
  opts.dt = auto_dt(lattice, sys, 0.0) / 4.0;
  opts.shift_policy = ShiftPolicy::frozen; // match the constant-shift window
  ScalingResult out;
  for (double eps : eps_values) {
    sys.epsilon = eps;
    const FrequencyShift shift = frequency_shift(f0.a, sys, *quartets);
    const ArrayXcd a1 = first_iterate_4w(f0, sys, *quartets, shift, T);
    const ArrayXcd a2 = second_iterate_4w(f0, sys, *quartets, shift, T);
    WaveField f = integrate_four_wave(f0, sys, *quartets, T, opts);
    const ArrayXcd model = f0.a + eps * a1 + eps * eps * a2;
    out.eps.push_back(eps);
    out.residual.push_back((f.a - model).matrix().norm());
  }
  out.slope = fit_slope(out.eps, out.residual);
  return out;
}

namespace {

// Fornberg finite-difference weights for the m-th derivative at z on
// arbitrary nodes x[0..n-1].
std::vector<double> fd_weights(double z, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][m];
  return w;
}

} // namespace

double steady_plugback_residual(const OneModePdf& pdf, double F) {
  const int M = pdf.grid.cells();
  const int half = 3; // 7-point stencils
  double worst = 0.0;
  const double fscale = std::abs(F) > 0.0 ? std::abs(F) : 1.0;
  for (int i = half; i < M - half; ++i) {
    if (pdf.P[i] == 0.0) continue; // beyond the cutoff
    bool cut = false;
    std::vector<double> xs, ys;
    for (int j = i - half; j <= i + half; ++j) {
      if (pdf.P[j] == 0.0) cut = true;
      xs.push_back(pdf.grid.center[j]);
      ys.push_back(pdf.P[j]);
    }
    if (cut) continue; // stencil crosses the cutoff
    // the finite-flux density carries a log singularity at s = 0: only
    // stencils that resolve it locally can certify the derivative
    if (xs.back() - xs.front() > 0.2 * pdf.grid.center[i]) continue;
    const auto w = fd_weights(pdf.grid.center[i], xs, 1);
    double dP = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) dP += w[j] * ys[j];
    const double s = pdf.grid.center[i];
    const double flux = -s * (pdf.gamma * pdf.P[i] + pdf.eta * dP);
    worst = std::max(worst, std::abs(flux - F) / fscale);
  }
  return worst;
}

bool tail_dichotomy_holds(const OneModePdf& pdf, double F, double s_cut) {
  if (F == 0.0) return true;
  const int M = pdf.grid.cells();
  bool any = false;
  for (int i = 0; i < M; ++i) {
    const double s = pdf.grid.center[i];
    if (s < 5.0 * pdf.n || s > s_cut) continue;
    const double rayleigh = std::exp(-s / pdf.n) / pdf.n;
    any = true;
    if (F < 0.0 && !(pdf.P[i] > rayleigh)) return false;
    if (F > 0.0 && !(pdf.P[i] < rayleigh)) return false;
  }
  return any;
}

// ---------------------------------------------------------------------------
// desk-scale PBP studies

namespace {

WaveSystem pbp_dummy_system_3w(double eps) {
  return WaveSystem::custom3([](const KVec&) { return 1.0; },
                             [](const KVec&, const KVec&, const KVec&) {
                               return Complex(1.0, 0.0);
                             },
                             eps);
}

MultiModePdf product_exponential_pdf(const std::vector<int>& modes,
                                     const std::vector<double>& n,
                                     int cells, double span) {
  std::vector<SGrid> grids;
  for (double ni : n) grids.push_back(uniform_grid(span * ni, cells));
  MultiModePdf pdf = make_multimode_pdf(
      modes, grids, [&](const std::vector<double>& s) {
        double p = 1.0;
        for (std::size_t i = 0; i < s.size(); ++i)
          p *= std::exp(-s[i] / n[i]) / n[i];
        return p;
      });
  normalize(pdf);
  return pdf;
}

} // namespace

double pbp_thermo_residual(double omega1, double omega2, int cells) {
  const std::vector<double> omega = {omega1, omega2, omega1 + omega2};
  const TriadSet set = synthetic_triad_set(omega, {{2, 0, 1}}, Complex(1.0, 0.0));
  const WaveSystem sys = pbp_dummy_system_3w(0.1);
  std::vector<double> n(3);
  for (int i = 0; i < 3; ++i) n[i] = 1.0 / omega[i]; // T_eq = 1
  MultiModePdf pdf = product_exponential_pdf({0, 1, 2}, n, cells, 6.0);
  const FluxField flux = pbp_flux_3w(pdf, sys, set, DeltaKernel::unit());
  const ArrayXd div = pbp_divergence(flux, pdf);
  return interior_divergence_max(div, pdf);
}

double pbp_marginal_gap(double omega1, double omega2, int cells) {
  const std::vector<double> omega = {omega1, omega2, omega1 + omega2};
  const TriadSet set = synthetic_triad_set(omega, {{2, 0, 1}}, Complex(1.0, 0.0));
  const WaveSystem sys = pbp_dummy_system_3w(0.1);
  // strongly unbalanced levels: the reference (eta/n - gamma) stays well
  // conditioned against discretization error
  const std::vector<double> n = {0.4, 0.4, 0.6};
  MultiModePdf pdf = product_exponential_pdf({0, 1, 2}, n, cells, 8.0);

  // rates induced from the moments the grid actually carries
  ArrayXd nvec(3);
  for (int i = 0; i < 3; ++i) nvec[i] = marginal_mean(pdf, i);
  const CollisionRates rates =
      collision_rates_3w(nvec, sys, set, DeltaKernel::unit());
  const FluxField flux = pbp_flux_3w(pdf, sys, set, DeltaKernel::unit());

  double worst = 0.0;
  for (int d = 0; d < 3; ++d) {
    const int M = pdf.grids[d].cells();
    // marginal flux: integrate F_d over the other two coordinates
    ArrayXd fm = ArrayXd::Zero(M + 1);
    auto dims = std::vector<int>{pdf.grids[0].cells(), pdf.grids[1].cells(),
                                 pdf.grids[2].cells()};
    auto fdims = dims;
    fdims[d] += 1;
    std::vector<int> idx(3, 0);
    for (long flat = 0; flat < flux.F[d].size(); ++flat) {
      long rem = flat;
      for (int i = 2; i >= 0; --i) {
        idx[i] = static_cast<int>(rem % fdims[i]);
        rem /= fdims[i];
      }
      double vol = 1.0;
      for (int i = 0; i < 3; ++i)
        if (i != d) vol *= pdf.grids[i].width[idx[i]];
      fm[idx[d]] += flux.F[d][flat] * vol;
    }
    // reference: one-mode flux from the induced (eta, gamma, n)
    double fmax = 0.0;
    ArrayXd ref(M + 1);
    for (int f = 0; f <= M; ++f) {
      const double s = pdf.grids[d].edges[f];
      const double P = std::exp(-s / nvec[d]) / nvec[d];
      ref[f] = -s * (rates.gamma[d] * P - rates.eta[d] * P / nvec[d]);
      fmax = std::max(fmax, std::abs(ref[f]));
    }
    for (int f = 1; f < M; ++f) {
      if (std::abs(ref[f]) < 0.05 * fmax) continue;
      worst = std::max(worst, std::abs(fm[f] - ref[f]) / std::abs(ref[f]));
    }
  }
  return worst;
}

PbpKzStudy pbp_kz_study(int cells) {
  // four modes chained by two exact triads: omega2 = omega0 + omega1,
  // omega3 = omega0 + omega2
  const double w0 = 0.7, w1 = 1.1;
  const std::vector<double> omega = {w0, w1, w0 + w1, w0 + (w0 + w1)};
  const TriadSet set =
      synthetic_triad_set(omega, {{2, 0, 1}, {3, 0, 2}}, Complex(1.0, 0.0));
  const WaveSystem sys = pbp_dummy_system_3w(0.3);

  PbpKzStudy out;

  // through-flux steady spectrum: force the lowest mode, damp the highest
  KineticState state = make_kinetic_state(ArrayXd::Constant(4, 1.0));
  state.gamma_tilde = ArrayXd::Zero(4);
  state.gamma_tilde[0] = 0.25;
  state.gamma_tilde[3] = -0.6;
  const DeltaKernel unit = DeltaKernel::unit();
  for (int it = 0; it < 20000; ++it) {
    refresh_rates_3w(state, sys, set, unit);
    const double dmax =
        std::max((state.gamma - state.gamma_tilde).maxCoeff(), 1e-6);
    advance(state, 0.09 / dmax);
    const ArrayXd rate =
        state.eta - (state.gamma - state.gamma_tilde) * state.n;
    if (rate.abs().maxCoeff() < 1e-13 * state.n.maxCoeff()) break;
  }
  out.steady_n = state.n;

  std::vector<double> n_flux(4), n_thermo(4);
  for (int i = 0; i < 4; ++i) {
    n_flux[i] = state.n[i];
    n_thermo[i] = 1.0 / omega[i];
  }
  {
    MultiModePdf pdf = product_exponential_pdf({0, 1, 2, 3}, n_thermo, cells, 8.0);
    const FluxField flux = pbp_flux_3w(pdf, sys, set, unit);
    out.thermo_residual =
        interior_divergence_max(pbp_divergence(flux, pdf), pdf);
  }
  {
    MultiModePdf pdf = product_exponential_pdf({0, 1, 2, 3}, n_flux, cells, 8.0);
    const FluxField flux = pbp_flux_3w(pdf, sys, set, unit);
    out.flux_residual =
        interior_divergence_max(pbp_divergence(flux, pdf), pdf);
  }
  out.ratio = out.thermo_residual > 0.0
                  ? out.flux_residual / out.thermo_residual
                  : std::numeric_limits<double>::infinity();
  return out;
}

// ---------------------------------------------------------------------------
// declarative experiment runner

namespace {

WaveSystem system_from_config(const ExperimentConfig& cfg) {
  if (cfg.system_kind == "capillary")
    return WaveSystem::capillary(cfg.sigma, cfg.epsilon);
  if (cfg.system_kind == "rossby")
    return WaveSystem::rossby(cfg.beta, cfg.rho, cfg.epsilon);
  if (cfg.system_kind == "nls") return WaveSystem::nls(cfg.epsilon);
  if (cfg.system_kind == "gravity")
    return WaveSystem::gravity(cfg.g, cfg.epsilon);
  if (cfg.system_kind == "acoustic")
    return WaveSystem::acoustic(cfg.sound_speed, cfg.coupling_v0, cfg.epsilon);
  throw std::invalid_argument("unknown system kind " + cfg.system_kind);
}

std::filesystem::path out_path(const ExperimentConfig& cfg,
                               const std::string& name) {
  return std::filesystem::path(cfg.output_dir) / name;
}

void run_mc_kinetic(const ExperimentConfig& cfg, RunResult& result) {
  const bool four = cfg.kind == "mc-kinetic-4w";
  const FourierLattice lattice =
      build_lattice(cfg.dim, cfg.n_side, cfg.box_length);
  const WaveSystem sys = system_from_config(cfg);
  const ArrayXd level = spectrum_preset(lattice, cfg.spectrum, sys, cfg.n0,
                                        cfg.k0, cfg.kwidth, cfg.t_eq);
  const AmplitudeLaw law = cfg.amplitude_law == "rayleigh"
                               ? AmplitudeLaw::rayleigh_law(level)
                               : AmplitudeLaw::deterministic(level);
  const McKineticResult mc =
      four ? mc_kinetic_4w(lattice, sys, law, cfg.realizations, cfg.horizon,
                           cfg.dt, cfg.seed, cfg.workers)
           : mc_kinetic_3w(lattice, sys, law, cfg.realizations, cfg.horizon,
                           cfg.dt, cfg.seed, cfg.workers);

  CsvWriter csv(out_path(cfg, "rates.csv"),
                {{"mode", ""},
                 {"k", "rad/length"},
                 {"omega", "rad/time"},
                 {"n_initial", "waveaction"},
                 {"n_final", "waveaction"},
                 {"dndt_mc", "waveaction/time"},
                 {"dndt_mc_stderr", "waveaction/time"},
                 {"dndt_kinetic", "waveaction/time"}});
  for (int i = 0; i < mc.k_abs.size(); ++i)
    csv.row(std::to_string(i),
            {mc.k_abs[i], mc.omega[i], mc.n_initial[i], mc.n_final[i],
             mc.dndt_mc[i], mc.dndt_mc_stderr[i], mc.dndt_kin[i]});
  csv.close();
  result.artifacts.push_back(csv.path().string());

  const RateAgreement agree = rate_agreement(mc);
  const double tol = four ? 0.25 : 0.20;
  result.verdicts.push_back(
      {"kinetic-agreement", agree.worst_rel <= tol && agree.modes_checked > 0,
       "worst relative error " + dstr(agree.worst_rel) + " over " +
           std::to_string(agree.modes_checked) + " top-quartile modes (tol " +
           dstr(tol) + ")"});
  result.verdicts.push_back(
      {"broadening-coverage", mc.coverage_min >= 5.0,
       "min modes inside the kernel width: " +
           dstr(mc.coverage_min)});
}

void run_perturbation_scaling(const ExperimentConfig& cfg, RunResult& result) {
  const ScalingResult sc =
      cfg.expansion == "4w"
          ? perturbation_scaling_4w(cfg.eps_values, cfg.pert_window, cfg.seed)
          : perturbation_scaling_3w(cfg.eps_values, cfg.pert_window, cfg.seed);
  CsvWriter csv(out_path(cfg, "scaling.csv"),
                {{"epsilon", ""}, {"residual", ""}});
  for (std::size_t i = 0; i < sc.eps.size(); ++i)
    csv.row({sc.eps[i], sc.residual[i]});
  csv.close();
  result.artifacts.push_back(csv.path().string());
  result.verdicts.push_back(
      {"expansion-order", std::abs(sc.slope - 3.0) <= 0.45,
       "log-log slope " + dstr(sc.slope) + " (target 3 +- 0.45)"});
}

void run_onemode_pdf(const ExperimentConfig& cfg, RunResult& result) {
  const double n = cfg.level;
  const double s_cut = cfg.s_nl > 0.0 ? cfg.s_nl
                                      : std::numeric_limits<double>::infinity();
  const double s_max =
      cfg.s_nl > 0.0 ? std::max(20.0 * n, 2.0 * cfg.s_nl) : 20.0 * n;
  SGrid grid = geometric_grid(s_max, cfg.cells);
  const OneModePdf pdf = steady_pdf(grid, n, cfg.flux, cfg.eta, s_cut);

  CsvWriter csv(out_path(cfg, "steady_pdf.csv"),
                {{"s", "waveaction"},
                 {"P", "1/waveaction"},
                 {"F", "1/time"},
                 {"rayleigh", "1/waveaction"},
                 {"tail_one_term", "1/waveaction"},
                 {"tail_two_terms", "1/waveaction"}});
  for (int i = 0; i < pdf.grid.cells(); ++i) {
    const double s = pdf.grid.center[i];
    csv.row({s, pdf.P[i], 0.5 * (pdf.F[i] + pdf.F[i + 1]),
             std::exp(-s / n) / n,
             tail_series(s, cfg.flux, pdf.gamma, pdf.eta, 1),
             tail_series(s, cfg.flux, pdf.gamma, pdf.eta, 2)});
  }
  csv.close();
  result.artifacts.push_back(csv.path().string());

  const double mass =
      (pdf.P * pdf.grid.width).sum();
  result.verdicts.push_back({"normalization", std::abs(mass - 1.0) < 1e-8,
                             "integral of P = " + dstr(mass)});
  const double plugback = steady_plugback_residual(pdf, cfg.flux);
  result.verdicts.push_back(
      {"plugback-residual", plugback < 1e-6,
       "max |flux(P) - F| / |F| = " + dstr(plugback)});
  result.verdicts.push_back(
      {"tail-dichotomy", tail_dichotomy_holds(pdf, cfg.flux, s_cut),
       cfg.flux < 0.0 ? "negative flux tail exceeds Rayleigh"
                      : "positive flux tail falls below Rayleigh"});
  if (cfg.s_nl > 0.0) {
    // weak nonlinearity needs the breakdown far from the PDF core
    result.verdicts.push_back(
        {"cutoff-regime", cfg.s_nl >= 5.0 * n,
         "s_nl / n = " + dstr(cfg.s_nl / n)});
  }
  // tail comparison in the far tail region s/n >= 10
  bool tail_ok = true;
  for (int i = 0; i < pdf.grid.cells(); ++i) {
    const double s = pdf.grid.center[i];
    if (s < 10.0 * n || s > s_cut) continue;
    const double exact = -(cfg.flux / pdf.eta) * expint_ei_scaled(s / n);
    const double two = tail_series(s, cfg.flux, pdf.gamma, pdf.eta, 2);
    const double bound = 4.0 * (n / s) * (n / s) *
                         std::abs(cfg.flux / (s * pdf.gamma));
    if (std::abs(two - exact) > bound) tail_ok = false;
  }
  result.verdicts.push_back({"tail-series", tail_ok,
                             "two-term tail within the (n/s)^2-order bound"});
}

void run_pbp_triad(const ExperimentConfig& cfg, RunResult& result) {
  const int cells = cfg.pbp_cells;
  const double r1 = pbp_thermo_residual(cfg.omega1, cfg.omega2, cells);
  const double r2 = pbp_thermo_residual(cfg.omega1, cfg.omega2, 2 * cells);
  const double ratio = r1 / r2;
  result.verdicts.push_back(
      {"thermodynamic-convergence", ratio >= 3.5,
       "residual ratio per 2x refinement " + dstr(ratio)});
  const double gap = pbp_marginal_gap(cfg.omega1, cfg.omega2, cells);
  result.verdicts.push_back(
      {"marginal-consistency", gap <= 0.05,
       "worst marginal flux gap " + dstr(gap)});

  // vortex projection of a non-equilibrium product
  const std::vector<double> omega = {cfg.omega1, cfg.omega2,
                                     cfg.omega1 + cfg.omega2};
  const TriadSet set =
      synthetic_triad_set(omega, {{2, 0, 1}}, Complex(1.0, 0.0));
  const WaveSystem sys = pbp_dummy_system_3w(0.1);
  MultiModePdf pdf =
      product_exponential_pdf({0, 1, 2}, {0.4, 0.4, 0.6}, cells / 2, 8.0);
  const FluxField flux = pbp_flux_3w(pdf, sys, set, DeltaKernel::unit());
  const VortexProjection vp = vortex_projection(flux, pdf, 0, 2);
  CsvWriter csv(out_path(cfg, "vortex.csv"),
                {{"s1", "waveaction"},
                 {"s2", "waveaction"},
                 {"F1", "1/time"},
                 {"F2", "1/time"}});
  for (int i = 0; i < vp.s1.size(); ++i)
    for (int j = 0; j < vp.s2.size(); ++j)
      csv.row({vp.s1[i], vp.s2[j], vp.F1(i, j), vp.F2(i, j)});
  csv.close();
  result.artifacts.push_back(csv.path().string());

  nlohmann::json residuals;
  residuals["thermo_residual_coarse"] = r1;
  residuals["thermo_residual_fine"] = r2;
  residuals["refinement_ratio"] = ratio;
  residuals["marginal_gap"] = gap;
  const auto rpath = out_path(cfg, "residuals.json");
  std::filesystem::create_directories(rpath.parent_path());
  std::ofstream(rpath) << residuals.dump(2) << '\n';
  result.artifacts.push_back(rpath.string());
}

void run_kz_flux_scan(const ExperimentConfig& cfg, RunResult& result) {
  const FourierLattice lattice =
      build_lattice(cfg.dim, cfg.n_side, cfg.box_length);
  const WaveSystem sys = system_from_config(cfg);
  const auto set = cached_triad_set(lattice, sys, cfg.delta_omega);
  const DeltaKernel kernel =
      cfg.delta_kernel == "lorentzian"
          ? DeltaKernel::lorentzian(cfg.delta_omega / 2.0)
          : cfg.delta_kernel == "window"
                ? DeltaKernel::window(2.0 * pi / cfg.delta_omega)
                : DeltaKernel::triangular(cfg.delta_omega);

  const int N = lattice.mode_count();
  const double kmax = lattice.k_max();
  const double f = cfg.forcing_rate > 0.0 ? cfg.forcing_rate : 0.05;
  KineticState state = make_kinetic_state(spectrum_preset(
      lattice, cfg.spectrum, sys, cfg.n0, cfg.k0, cfg.kwidth, cfg.t_eq));
  // forcing in a low-k band, sinks at both ends: the high-k sink absorbs
  // the direct energy flux, the large-scale sink stops waveaction piling up
  // at the smallest wavenumbers (three-wave collisions conserve energy, not
  // waveaction)
  state.gamma_tilde = ArrayXd::Zero(N);
  for (int i = 0; i < N; ++i) {
    const double k = lattice.wavevector(i).norm();
    if (lattice.is_zero_mode(i)) continue;
    if (k >= 0.12 * kmax && k <= 0.28 * kmax) state.gamma_tilde[i] = f;
    if (k >= 0.75 * kmax || k < 0.12 * kmax) state.gamma_tilde[i] = -6.0 * f;
  }
  const double horizon =
      cfg.kinetic_time > 0.0 ? cfg.kinetic_time : 60.0 / f;
  const double dt_cap = horizon / 4000.0;
  while (state.time < horizon) {
    refresh_rates_3w(state, sys, *set, kernel);
    const double dmax =
        std::max((state.gamma - state.gamma_tilde).maxCoeff(), 1e-12);
    const double dt =
        std::min({0.09 / dmax, dt_cap, horizon - state.time + 1e-12});
    advance(state, dt);
  }
  refresh_rates_3w(state, sys, *set, kernel);
  const double residual_rate =
      (state.eta - (state.gamma - state.gamma_tilde) * state.n)
          .abs()
          .maxCoeff();

  // energy flux through |k|: Pi(k) = -sum_{|k'|<=k} omega' (eta' - gamma' n')
  std::vector<int> order(N);
  for (int i = 0; i < N; ++i) order[i] = i;
  std::vector<double> kabs(N), omega(N);
  for (int i = 0; i < N; ++i) {
    kabs[i] = lattice.wavevector(i).norm();
    omega[i] = dispersion(sys, lattice.wavevector(i));
  }
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return kabs[a] < kabs[b]; });
  ArrayXd Pi(N);
  double acc = 0.0;
  for (int idx = 0; idx < N; ++idx) {
    const int i = order[idx];
    acc -= omega[i] * (state.eta[i] - state.gamma[i] * state.n[i]);
    Pi[i] = acc;
  }

  CsvWriter csv(out_path(cfg, "kz_spectrum.csv"),
                {{"k", "rad/length"},
                 {"n", "waveaction"},
                 {"eta", "1/time"},
                 {"gamma", "1/time"},
                 {"gamma_tilde", "1/time"},
                 {"energy_flux", "energy/time"}});
  for (int idx = 0; idx < N; ++idx) {
    const int i = order[idx];
    csv.row({kabs[i], state.n[i], state.eta[i], state.gamma[i],
             state.gamma_tilde[i], Pi[i]});
  }
  csv.close();
  result.artifacts.push_back(csv.path().string());

  // flux constancy across the inertial band
  std::vector<double> band;
  for (int i = 0; i < N; ++i)
    if (kabs[i] > 0.35 * kmax && kabs[i] < 0.7 * kmax) band.push_back(Pi[i]);
  double lo = 0, hi = 0, mean = 0;
  if (!band.empty()) {
    lo = *std::min_element(band.begin(), band.end());
    hi = *std::max_element(band.begin(), band.end());
    for (double v : band) mean += v;
    mean /= band.size();
  }
  const bool ok = !band.empty() && mean > 0.0 &&
                  (hi - lo) <= 0.25 * std::abs(mean);
  result.verdicts.push_back(
      {"flux-constancy", ok,
       "inertial-band flux spread " + dstr(hi - lo) + " around " +
           dstr(mean) + "; residual max |dn/dt| " +
           dstr(residual_rate)});
}

} // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result;
  result.kind = cfg.kind;
  std::filesystem::create_directories(cfg.output_dir);

  if (cfg.kind == "mc-kinetic-3w" || cfg.kind == "mc-kinetic-4w")
    run_mc_kinetic(cfg, result);
  else if (cfg.kind == "perturbation-scaling")
    run_perturbation_scaling(cfg, result);
  else if (cfg.kind == "onemode-pdf")
    run_onemode_pdf(cfg, result);
  else if (cfg.kind == "pbp-triad")
    run_pbp_triad(cfg, result);
  else if (cfg.kind == "kz-flux-scan")
    run_kz_flux_scan(cfg, result);
  else
    throw std::invalid_argument("run_experiment: unknown kind " + cfg.kind);

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  nlohmann::json summary;
  summary["kind"] = cfg.kind;
  summary["config_hash"] = fnv1a_hex(canonical_config(cfg));
  summary["seed"] = cfg.seed;
  summary["wall_seconds"] = wall;
  summary["versions"] = {{"waveturb", "0.1.0"},
                         {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                       std::to_string(EIGEN_MAJOR_VERSION) +
                                       "." +
                                       std::to_string(EIGEN_MINOR_VERSION)}};
  summary["verdicts"] = nlohmann::json::array();
  for (const Verdict& v : result.verdicts)
    summary["verdicts"].push_back(
        {{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  summary["artifacts"] = result.artifacts;
  const auto spath = out_path(cfg, "summary.json");
  std::ofstream(spath) << summary.dump(2) << '\n';
  result.artifacts.push_back(spath.string());
  return result;
}

} // namespace wt
