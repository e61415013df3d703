#include "wt/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>

#include "wt/experiments.hpp"
#include "wt/pbp.hpp"
#include "wt/perturbation.hpp"

namespace wt {

namespace {

CriterionResult criterion(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// composite Simpson over [a, b]
template <typename F>
double simpson(F&& f, double a, double b, int intervals) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double sum = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

// --- criterion 1: int |Delta(x,T)|^2 dx = 2 pi T within 1% --------------

CriterionResult criterion_kernel_asymptotics() {
  CriterionResult r = criterion(1, "kernel asymptotics: quadrature of |Delta|^2 equals "
                       "2*pi*T");
  r.pass = true;
  std::ostringstream detail;
  for (double T : {10.0, 100.0}) {
    const double X = 1000.0 / T;
    const double integral = simpson(
        [T](double x) { return std::norm(delta_kernel(x, T)); }, -X, X,
        200000);
    const double rel = std::abs(integral - 2.0 * pi * T) / (2.0 * pi * T);
    detail << "T=" << T << ": rel err " << fmt(rel) << "; ";
    if (rel > 0.01) r.pass = false;
  }
  r.detail = detail.str();
  return r;
}

// --- criterion 2: expansion order via epsilon scaling --------------------

CriterionResult criterion_perturbation_order() {
  CriterionResult r = criterion(2, "perturbation order: residual slope 3 +- 0.45 (3-wave "
                       "and 4-wave)");
  const std::vector<double> eps = {0.02, 0.04, 0.08};
  const ScalingResult s3 = perturbation_scaling_3w(eps, 2.0, 7);
  const ScalingResult s4 = perturbation_scaling_4w(eps, 1.0, 7);
  r.pass = std::abs(s3.slope - 3.0) <= 0.45 && std::abs(s4.slope - 3.0) <= 0.45;
  r.detail = "slope 3w = " + fmt(s3.slope) + ", slope 4w = " + fmt(s4.slope);
  return r;
}

// --- criterion 3: Monte-Carlo kinetic verification (3-wave) ---------------

CriterionResult criterion_mc_kinetic(int workers) {
  CriterionResult r = criterion(3, "Monte-Carlo kinetic closure (3-wave acoustic, "
                       "R=1000, eps=0.05): rates within 20%");
  const FourierLattice lattice = build_lattice(1, 160, 40.0 * pi);
  const WaveSystem sys = WaveSystem::acoustic(1.0, 0.25, 0.05);
  ArrayXd level = spectrum_preset(lattice, "gauss-bump", sys, 0.1, 1.5, 0.75,
                                  1.0);
  const AmplitudeLaw law = AmplitudeLaw::deterministic(level);
  const double T = 4.0;
  const McKineticResult mc =
      mc_kinetic_3w(lattice, sys, law, 1000, T, 0.0, 7, workers);
  const RateAgreement agree = rate_agreement(mc);
  r.pass = agree.modes_checked > 0 && agree.worst_rel <= 0.20 &&
           mc.coverage_min >= 5.0;
  r.detail = "worst rel err " + fmt(agree.worst_rel) + " over " +
             std::to_string(agree.modes_checked) +
             " modes; min modes in broadening " + fmt(mc.coverage_min);
  return r;
}

// --- criterion 4: detailed balance on exact resonances -------------------

CriterionResult criterion_detailed_balance() {
  CriterionResult r = criterion(4, "detailed balance: thermodynamic spectrum on exact "
                       "triads, residual < 1e-10");
  const double w0 = 0.9, w1 = 1.3;
  const std::vector<double> omega = {w0, w1, w0 + w1, w0 + (w0 + w1),
                                     w1 + (w0 + w1)};
  const TriadSet set = synthetic_triad_set(
      omega, {{2, 0, 1}, {3, 0, 2}, {4, 1, 2}}, Complex(0.7, 0.3));
  WaveSystem sys = WaveSystem::custom3(
      [](const KVec&) { return 1.0; },
      [](const KVec&, const KVec&, const KVec&) { return Complex(1.0, 0.0); },
      0.1);
  const double t_eq = 0.8;
  ArrayXd n(5);
  for (int i = 0; i < 5; ++i) n[i] = t_eq / omega[i];
  const CollisionRates rates =
      collision_rates_3w(n, sys, set, DeltaKernel::unit());
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double gn = rates.gamma[i] * n[i];
    worst = std::max(worst, std::abs(gn - rates.eta[i]) / std::abs(gn));
  }
  r.pass = worst < 1e-10;
  r.detail = "max |gamma n - eta| / (gamma n) = " + fmt(worst);
  return r;
}

// --- criterion 5: Gaussian moment hierarchy -------------------------------

CriterionResult criterion_moment_hierarchy() {
  CriterionResult r = criterion(5, "moment hierarchy: steady M^(p) = p! n^p and Rayleigh "
                       "MC within 3 SE");
  const double n = 0.7, gamma = 1.3, eta = gamma * n;
  double worst = 0.0;
  double Mpm1 = 1.0;
  for (int p = 1; p <= 5; ++p) {
    double Mp = Mpm1 * p * n; // p! n^p by recursion
    const double rhs = moment_rhs(p, Mp, Mpm1, eta, gamma);
    worst = std::max(worst, std::abs(rhs) / (p * gamma * Mp));
    Mpm1 = Mp;
  }
  bool mc_ok = true;
  {
    const FourierLattice lattice = build_lattice(1, 16, 2.0 * pi);
    const AmplitudeLaw law =
        AmplitudeLaw::rayleigh_law(ArrayXd::Constant(16, 0.8));
    Ensemble ens;
    const int R = 4000;
    ens.reserve(R);
    for (int rr = 0; rr < R; ++rr)
      ens.push_back(generate_rpa_field(lattice, law, 21, rr).a);
    const EnsembleStats st = estimate_moments(ens, 4);
    for (int i = 0; i < 16; ++i) {
      if (lattice.is_zero_mode(i)) continue;
      double target = 1.0;
      for (int p = 1; p <= 4; ++p) {
        target *= p * 0.8;
        if (std::abs(st.M(i, p) - target) > 3.0 * st.M_stderr(i, p))
          mc_ok = false;
      }
    }
  }
  r.pass = worst < 1e-13 && mc_ok;
  r.detail = "recursion residual " + fmt(worst) +
             (mc_ok ? "; MC moments within 3 SE" : "; MC moments FAILED");
  return r;
}

// --- criterion 6: finite-flux steady PDF ----------------------------------

CriterionResult criterion_steady_pdf() {
  CriterionResult r = criterion(6, "finite-flux steady PDF: plug-back < 1e-6, two-term "
                       "tail bound, tail dichotomy");
  std::ostringstream detail;
  bool ok = true;
  const double n = 1.0, eta = 1.0, gamma = eta / n;

  struct Case {
    double F;
    double s_cut;
    double s_max;
  };
  const Case cases[] = {{-0.02, std::numeric_limits<double>::infinity(), 20.0},
                        {5e-5, 12.0, 24.0}};
  for (const Case& c : cases) {
    const OneModePdf pdf = steady_pdf(geometric_grid(c.s_max, 400), n, c.F,
                                      eta, c.s_cut);
    const double plugback = steady_plugback_residual(pdf, c.F);
    const bool dich = tail_dichotomy_holds(pdf, c.F, c.s_cut);
    bool tail_ok = true;
    for (int i = 0; i < pdf.grid.cells(); ++i) {
      const double s = pdf.grid.center[i];
      if (s < 10.0 * n || s > c.s_cut) continue;
      const double exact = -(c.F / eta) * expint_ei_scaled(s / n);
      const double two = tail_series(s, c.F, gamma, eta, 2);
      const double bound =
          4.0 * (n / s) * (n / s) * std::abs(c.F / (s * gamma));
      if (std::abs(two - exact) > bound) tail_ok = false;
    }
    detail << "F=" << c.F << ": plugback " << fmt(plugback)
           << (tail_ok ? ", tail ok" : ", tail FAILED")
           << (dich ? ", dichotomy ok; " : ", dichotomy FAILED; ");
    ok = ok && plugback < 1e-6 && tail_ok && dich;
  }
  r.pass = ok;
  r.detail = detail.str();
  return r;
}

// --- criterion 7: PBP thermodynamic steady state convergence ---------------

CriterionResult criterion_pbp_thermo() {
  CriterionResult r = criterion(7, "PBP thermodynamic product: divergence residual "
                       "falls >= 3.5x per 2x refinement");
  const double r48 = pbp_thermo_residual(0.9, 1.3, 48);
  const double r96 = pbp_thermo_residual(0.9, 1.3, 96);
  const double ratio = r48 / r96;
  r.pass = ratio >= 3.5;
  r.detail = "residual " + fmt(r48) + " (48^3) -> " + fmt(r96) +
             " (96^3), ratio " + fmt(ratio);
  return r;
}

// --- criterion 8: PBP vs one-mode marginal consistency ---------------------

CriterionResult criterion_pbp_marginal() {
  CriterionResult r = criterion(8, "PBP marginal flux matches the one-mode flux within "
                       "5% after refinement");
  const double gap = pbp_marginal_gap(0.9, 1.3, 64);
  r.pass = gap <= 0.05;
  r.detail = "worst marginal flux gap " + fmt(gap);
  return r;
}

// --- criterion 9: through-flux product is not a PBP steady state -----------

CriterionResult criterion_pbp_kz() {
  CriterionResult r = criterion(9, "through-flux product PDF: divergence residual >= 10x "
                       "the thermodynamic residual");
  const PbpKzStudy study = pbp_kz_study(24);
  r.pass = study.ratio >= 10.0;
  r.detail = "flux-product residual " + fmt(study.flux_residual) +
             " vs thermodynamic " + fmt(study.thermo_residual) + " (ratio " +
             fmt(study.ratio) + ")";
  return r;
}

// --- criterion 10: phase statistics ----------------------------------------

CriterionResult criterion_phase_statistics() {
  CriterionResult r = criterion(10, "phase statistics: psi thresholds at 3/sqrt(R) and "
                        "the phi-vs-psi construction");
  std::ostringstream detail;
  bool ok = true;
  {
    const FourierLattice lattice = build_lattice(1, 32, 2.0 * pi);
    const AmplitudeLaw law =
        AmplitudeLaw::rayleigh_law(ArrayXd::Constant(32, 1.0));
    Ensemble ens;
    const int R = 2000;
    for (int rr = 0; rr < R; ++rr)
      ens.push_back(generate_rpa_field(lattice, law, 1, rr).a);
    const PhaseDiagnostics d = phase_diagnostics(ens);
    detail << "psi mean violations " << d.mean_violations << ", pair "
           << d.pair_violations << ", uniformity " << d.uniformity_violations
           << "; ";
    ok = ok && d.mean_violations == 0 && d.pair_violations == 0 &&
         d.uniformity_violations == 0;
  }
  {
    // phi = 2 pi N + r with random integer N: phases correlate, phase
    // factors do not
    const int R = 20000;
    const std::uint64_t seed = 31415;
    std::vector<double> phi1(R), phi2(R);
    std::vector<Complex> psi1(R), psi2(R);
    double m1 = 0, m2 = 0;
    Complex p1(0, 0), p2(0, 0), pp(0, 0);
    for (int i = 0; i < R; ++i) {
      const int Nint = static_cast<int>(rng::uniform(seed, i, 0, 0) * 10.0);
      const double r1 = 2.0 * pi * rng::uniform(seed, i, 1, 0) - pi;
      const double r2 = 2.0 * pi * rng::uniform(seed, i, 2, 0) - pi;
      phi1[i] = 2.0 * pi * Nint + r1;
      phi2[i] = 2.0 * pi * Nint + r2;
      psi1[i] = std::polar(1.0, phi1[i]);
      psi2[i] = std::polar(1.0, phi2[i]);
      m1 += phi1[i];
      m2 += phi2[i];
      p1 += psi1[i];
      p2 += psi2[i];
      pp += psi1[i] * psi2[i];
    }
    m1 /= R;
    m2 /= R;
    p1 /= static_cast<double>(R);
    p2 /= static_cast<double>(R);
    pp /= static_cast<double>(R);
    double cov = 0, var_prod = 0;
    for (int i = 0; i < R; ++i) {
      const double d1 = (phi1[i] - m1) * (phi2[i] - m2);
      cov += d1;
    }
    cov /= R;
    for (int i = 0; i < R; ++i) {
      const double d1 = (phi1[i] - m1) * (phi2[i] - m2) - cov;
      var_prod += d1 * d1;
    }
    var_prod /= (R - 1.0);
    const double se = std::sqrt(var_prod / R);
    const double var_n = (100.0 - 1.0) / 12.0; // uniform integers 0..9
    const double target = 4.0 * pi * pi * var_n;
    const double thr = 3.0 / std::sqrt(static_cast<double>(R));
    detail << "cov(phi) = " << fmt(cov) << " vs " << fmt(target) << " (3 SE "
           << fmt(3.0 * se) << "); |<psi1 psi2>| = " << fmt(std::abs(pp));
    ok = ok && std::abs(cov - target) <= 3.0 * se && cov > 0.0 &&
         std::abs(pp) <= thr && std::abs(p1) <= thr && std::abs(p2) <= thr;
  }
  r.pass = ok;
  r.detail = detail.str();
  return r;
}

// --- criterion 11: source/sink renormalization -----------------------------

CriterionResult criterion_renormalization() {
  CriterionResult r = criterion(11, "source renormalization: gamma_tilde step equals the "
                        "gamma - gamma_tilde step bit-identically");
  const int N = 33;
  KineticState a = make_kinetic_state(ArrayXd::Zero(N));
  for (int i = 0; i < N; ++i) {
    a.n[i] = 0.1 + 0.03 * i;
    a.eta[i] = std::sin(i + 1.0) * std::sin(i + 1.0);
    a.gamma[i] = 0.5 + 0.02 * i;
    a.gamma_tilde[i] = 0.3 * std::cos(0.7 * i);
  }
  KineticState b = a;
  b.gamma = a.gamma - a.gamma_tilde;
  b.gamma_tilde.setZero();
  const double dt = 0.05 / (a.gamma - a.gamma_tilde).maxCoeff();
  advance(a, dt);
  advance(b, dt);
  r.pass = std::memcmp(a.n.data(), b.n.data(), sizeof(double) * N) == 0;
  r.detail = r.pass ? "spectra bit-identical after one step"
                    : "spectra differ";
  return r;
}

} // namespace

CriterionResult run_criterion(int id, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  switch (id) {
    case 1: r = criterion_kernel_asymptotics(); break;
    case 2: r = criterion_perturbation_order(); break;
    case 3: r = criterion_mc_kinetic(workers); break;
    case 4: r = criterion_detailed_balance(); break;
    case 5: r = criterion_moment_hierarchy(); break;
    case 6: r = criterion_steady_pdf(); break;
    case 7: r = criterion_pbp_thermo(); break;
    case 8: r = criterion_pbp_marginal(); break;
    case 9: r = criterion_pbp_kz(); break;
    case 10: r = criterion_phase_statistics(); break;
    case 11: r = criterion_renormalization(); break;
    default:
      throw std::invalid_argument("run_criterion: id must be 1..11");
  }
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return r;
}

std::vector<CriterionResult> run_acceptance(int workers) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 11; ++id) out.push_back(run_criterion(id, workers));
  return out;
}

} // namespace wt
