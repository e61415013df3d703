#include <doctest.h>

#include <cmath>

#include "wt/dynamics.hpp"
#include "wt/statistics.hpp"

using namespace wt;

TEST_SUITE_BEGIN("dynamics");

namespace {

// single-triad system on the 1-D integer lattice: V = v0 on (3; 1, 2) and
// zero elsewhere, dispersion k^2
const double v0 = 0.8;

bool is_k(const KVec& k, double v) { return k.x() == v && k.y() == 0.0; }

WaveSystem single_triad_system(double eps) {
  return WaveSystem::custom3(
      [](const KVec& k) { return k.squaredNorm(); },
      [](const KVec& kl, const KVec& km, const KVec& kn) {
        const bool match = is_k(kl, 3.0) && ((is_k(km, 1.0) && is_k(kn, 2.0)) ||
                                             (is_k(km, 2.0) && is_k(kn, 1.0)));
        return match ? Complex(v0, 0.0) : Complex(0.0, 0.0);
      },
      eps);
}

struct TriadOracle {
  // closed three-mode equations integrated by a hand-coded RK4
  Complex a1, a2, a3;
  double eps, det;
  void rhs(double t, const Complex& x1, const Complex& x2, const Complex& x3,
           Complex& d1, Complex& d2, Complex& d3) const {
    const Complex I(0, 1);
    const Complex ph = std::polar(1.0, det * t);
    d3 = -I * eps * 2.0 * v0 * x1 * x2 * ph;
    d1 = -I * eps * 2.0 * v0 * std::conj(x2) * x3 * std::conj(ph);
    d2 = -I * eps * 2.0 * v0 * std::conj(x1) * x3 * std::conj(ph);
  }
  void advance(double T, double dt) {
    long n = static_cast<long>(std::ceil(T / dt));
    const double h = T / n;
    double t = 0.0;
    for (long s = 0; s < n; ++s) {
      Complex k1a, k1b, k1c, k2a, k2b, k2c, k3a, k3b, k3c, k4a, k4b, k4c;
      rhs(t, a1, a2, a3, k1a, k1b, k1c);
      rhs(t + h / 2, a1 + h / 2 * k1a, a2 + h / 2 * k1b, a3 + h / 2 * k1c,
          k2a, k2b, k2c);
      rhs(t + h / 2, a1 + h / 2 * k2a, a2 + h / 2 * k2b, a3 + h / 2 * k2c,
          k3a, k3b, k3c);
      rhs(t + h, a1 + h * k3a, a2 + h * k3b, a3 + h * k3c, k4a, k4b, k4c);
      a1 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
      a2 += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
      a3 += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
      t += h;
    }
  }
};

} // namespace

TEST_CASE("zero field and lone modes have zero derivative") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const WaveSystem sys = single_triad_system(0.1);
  const TriadSet set = build_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  WaveField f = make_field(lat);
  CHECK(rhs_three_wave(f, sys, set).abs().maxCoeff() == 0.0);
  // a single excited mode has no triad partner
  f.a[lat.flat_index(IndexVec(1, 0, 0))] = Complex(0.3, -0.2);
  CHECK(rhs_three_wave(f, sys, set).abs().maxCoeff() == 0.0);
}

TEST_CASE("resonant triad matches the hand-coded 3-mode oracle") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const WaveSystem sys = single_triad_system(0.15);
  const TriadSet set = build_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  WaveField f = make_field(lat);
  const int i1 = lat.flat_index(IndexVec(1, 0, 0));
  const int i2 = lat.flat_index(IndexVec(2, 0, 0));
  const int i3 = lat.flat_index(IndexVec(3, 0, 0));
  f.a[i1] = Complex(0.7, 0.1);
  f.a[i2] = Complex(-0.3, 0.4);
  f.a[i3] = Complex(0.2, -0.5);

  TriadOracle oracle{f.a[i1], f.a[i2], f.a[i3], sys.epsilon,
                     9.0 - 1.0 - 4.0};
  const double T = 3.0, dt = 1e-3;
  oracle.advance(T, dt);

  IntegrateOptions opts;
  opts.dt = dt;
  const WaveField g = integrate_three_wave(f, sys, set, T, opts);
  CHECK(std::abs(g.a[i1] - oracle.a1) < 1e-10);
  CHECK(std::abs(g.a[i2] - oracle.a2) < 1e-10);
  CHECK(std::abs(g.a[i3] - oracle.a3) < 1e-10);
  // other modes stay empty
  double rest = 0.0;
  for (int i = 0; i < lat.mode_count(); ++i)
    if (i != i1 && i != i2 && i != i3) rest += std::abs(g.a[i]);
  CHECK(rest == 0.0);
}

TEST_CASE("interaction representation freezes the linear dynamics") {
  const FourierLattice lat = build_lattice(1, 16, 2.0 * pi);
  const WaveSystem sys = WaveSystem::capillary(1.0, 0.0);
  const auto set = cached_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  const AmplitudeLaw law =
      AmplitudeLaw::rayleigh_law(ArrayXd::Constant(16, 0.5));
  WaveField f = generate_rpa_field(lat, law, 5, 0);
  const ArrayXcd before = f.a;
  IntegrateOptions opts;
  opts.dt = 1e-3;
  const WaveField g = integrate_three_wave(std::move(f), sys, *set, 2.0, opts);
  CHECK((g.a - before).abs().maxCoeff() == 0.0);
}

TEST_CASE("RK4 self-convergence is fourth order") {
  const FourierLattice lat = build_lattice(1, 16, 2.0 * pi);
  const WaveSystem sys = WaveSystem::capillary(1.0, 0.3);
  const auto set = cached_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  ArrayXd level(16);
  for (int i = 0; i < 16; ++i)
    level[i] = 0.05 / (1.0 + lat.wavevector(i).squaredNorm());
  const WaveField f0 =
      generate_rpa_field(lat, AmplitudeLaw::rayleigh_law(level), 11, 0);
  const double T = 0.5;
  auto run = [&](double dt) {
    IntegrateOptions opts;
    opts.dt = dt;
    return integrate_three_wave(f0, sys, *set, T, opts).a;
  };
  const double dt0 = 2e-3;
  const ArrayXcd c = run(dt0), h = run(dt0 / 2), q = run(dt0 / 4);
  const double e1 = (c - q).matrix().norm();
  const double e2 = (h - q).matrix().norm();
  // (dt^4 - (dt/2)^4) / ((dt/2)^4 - (dt/4)^4) ~ 16.xx for 4th order
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 24.0);
}

TEST_CASE("capillary energy conservation over ten nonlinear times") {
  const FourierLattice lat = build_lattice(1, 16, 2.0 * pi);
  const WaveSystem sys = WaveSystem::capillary(1.0, 0.1);
  const auto set = cached_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  ArrayXd level(16);
  for (int i = 0; i < 16; ++i)
    level[i] = 0.2 / (1.0 + lat.wavevector(i).squaredNorm());
  WaveField f = generate_rpa_field(lat, AmplitudeLaw::rayleigh_law(level), 3, 0);
  const double wmid = dispersion(sys, KVec(4, 0, 0));
  const double tau_nl = 1.0 / (sys.epsilon * sys.epsilon * wmid);
  const double T = 10.0 * tau_nl;
  IntegrateOptions opts;
  opts.dt = (2.0 * pi / max_dispersion(lat, sys)) / 20.0 / 4.0;
  const double H0 = hamiltonian(f, sys, *set);
  const WaveField g = integrate_three_wave(std::move(f), sys, *set, T, opts);
  const double H1 = hamiltonian(g, sys, *set);
  CHECK(std::abs(H1 - H0) / std::abs(H0) < 1e-6);
}

TEST_CASE("step cap enforcement") {
  const FourierLattice lat = build_lattice(1, 16, 2.0 * pi);
  const WaveSystem sys = WaveSystem::capillary(1.0, 0.1);
  const auto set = cached_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  WaveField f = make_field(lat);
  IntegrateOptions opts;
  opts.dt = 1.0; // far above (2 pi / omega_max) / 20
  CHECK_THROWS_AS(integrate_three_wave(std::move(f), sys, *set, 1.0, opts),
                  std::invalid_argument);
}

TEST_CASE("four-wave: single-mode phase rotation") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const WaveSystem sys = WaveSystem::nls(0.02);
  const auto set = cached_quartet_set(
      lat, sys, std::numeric_limits<double>::infinity());
  WaveField f = make_field(lat);
  const int i2 = lat.flat_index(IndexVec(2, 0, 0));
  f.a[i2] = Complex(0.6, 0.3);
  const double A2 = std::norm(f.a[i2]);
  const double T = 5.0;
  IntegrateOptions opts;
  opts.dt = 1e-3;
  const WaveField g = integrate_four_wave(std::move(f), sys, *set, T, opts);
  // self-interaction cancels against the counter-term up to the pairing
  // count, leaving rotation at +eps W A^2
  const Complex expected =
      Complex(0.6, 0.3) * std::polar(1.0, sys.epsilon * A2 * T);
  CHECK(std::abs(g.a[i2] - expected) < 1e-9);
}

TEST_CASE("four-wave: two NLS modes rotate at eps A^2 for 100 periods") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const WaveSystem sys = WaveSystem::nls(1e-3);
  const auto set = cached_quartet_set(
      lat, sys, std::numeric_limits<double>::infinity());
  WaveField f = make_field(lat);
  const int ip = lat.flat_index(IndexVec(1, 0, 0));
  const int iq = lat.flat_index(IndexVec(2, 0, 0));
  f.a[ip] = Complex(0.9, -0.2);
  f.a[iq] = Complex(-0.4, 0.7);
  const double Ap = std::norm(f.a[ip]), Aq = std::norm(f.a[iq]);
  const double T = 100.0 * 2.0 * pi; // 100 periods of the slowest mode
  IntegrateOptions opts;
  opts.dt = (2.0 * pi / max_dispersion(lat, sys)) / 20.0;
  const WaveField g = integrate_four_wave(std::move(f), sys, *set, T, opts);
  const Complex ep = Complex(0.9, -0.2) * std::polar(1.0, sys.epsilon * Ap * T);
  const Complex eq = Complex(-0.4, 0.7) * std::polar(1.0, sys.epsilon * Aq * T);
  CHECK(std::abs(g.a[ip] - ep) / std::abs(ep) < 5e-3);
  CHECK(std::abs(g.a[iq] - eq) / std::abs(eq) < 5e-3);
}

TEST_CASE("four-wave RHS conserves total waveaction exactly") {
  const FourierLattice lat = build_lattice(1, 12, 2.0 * pi);
  const WaveSystem sys = WaveSystem::nls(0.2);
  const auto set = cached_quartet_set(
      lat, sys, std::numeric_limits<double>::infinity());
  const AmplitudeLaw law =
      AmplitudeLaw::rayleigh_law(ArrayXd::Constant(12, 0.7));
  WaveField f = generate_rpa_field(lat, law, 17, 0);
  f.time = 0.37;
  const FrequencyShift shift = frequency_shift(f.a, sys, *set);
  const ArrayXcd d = rhs_four_wave(f, sys, *set, shift);
  double rate = 0.0, scale = 0.0;
  for (int i = 0; i < 12; ++i) {
    rate += 2.0 * std::real(std::conj(f.a[i]) * d[i]);
    scale += std::abs(f.a[i]) * std::abs(d[i]);
  }
  CHECK(std::abs(rate) < 1e-13 * scale);
}

TEST_CASE("frequency shift identity against a direct double sum") {
  const FourierLattice lat = build_lattice(1, 10, 2.0 * pi);
  const WaveSystem sys = WaveSystem::nls(0.12);
  const auto set = cached_quartet_set(
      lat, sys, std::numeric_limits<double>::infinity());
  const AmplitudeLaw law =
      AmplitudeLaw::rayleigh_law(ArrayXd::Constant(10, 0.4));
  const WaveField f = generate_rpa_field(lat, law, 23, 0);
  const FrequencyShift shift = frequency_shift(f.a, sys, *set);
  for (int l = 0; l < 10; ++l) {
    double direct = 0.0;
    for (int mu = 0; mu < 10; ++mu) {
      const Complex w = lat.is_zero_mode(l) || lat.is_zero_mode(mu)
                            ? Complex(0, 0)
                            : coupling4(sys, lat.wavevector(l),
                                        lat.wavevector(mu), lat.wavevector(l),
                                        lat.wavevector(mu));
      direct += 2.0 * sys.epsilon * w.real() * std::norm(f.a[mu]);
    }
    CHECK(shift[l] == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("hamiltonian reductions") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const WaveSystem sys = single_triad_system(0.2);
  const TriadSet set = build_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  WaveField f = make_field(lat);
  CHECK(hamiltonian(f, sys, set) == 0.0);

  f.a[lat.flat_index(IndexVec(1, 0, 0))] = Complex(0.7, 0.1);
  f.a[lat.flat_index(IndexVec(2, 0, 0))] = Complex(-0.3, 0.4);
  f.a[lat.flat_index(IndexVec(3, 0, 0))] = Complex(0.2, -0.5);
  f.time = 0.8;

  // direct term-by-term sum
  double H = 0.0;
  for (int i = 0; i < 8; ++i)
    H += dispersion(sys, lat.wavevector(i)) * std::norm(f.a[i]);
  const Complex a1 = f.a[lat.flat_index(IndexVec(1, 0, 0))];
  const Complex a2 = f.a[lat.flat_index(IndexVec(2, 0, 0))];
  const Complex a3 = f.a[lat.flat_index(IndexVec(3, 0, 0))];
  const Complex ph = std::polar(1.0, (9.0 - 1.0 - 4.0) * f.time);
  H += sys.epsilon * 4.0 * std::real(v0 * std::conj(a3) * a1 * a2 * ph);
  CHECK(hamiltonian(f, sys, set) == doctest::Approx(H).epsilon(1e-13));

  // eps = 0 leaves the quadratic part only
  WaveSystem lin = sys;
  lin.epsilon = 0.0;
  double H2 = 0.0;
  for (int i = 0; i < 8; ++i)
    H2 += dispersion(sys, lat.wavevector(i)) * std::norm(f.a[i]);
  CHECK(hamiltonian(f, lin, set) == doctest::Approx(H2).epsilon(1e-13));
}

TEST_CASE("integration blow-up is reported, not silent") {
  // strongly resonant system pushed far beyond the weakly nonlinear regime
  const FourierLattice lat = build_lattice(1, 16, 2.0 * pi);
  const WaveSystem sys = WaveSystem::acoustic(1.0, 5.0, 5.0);
  const TriadSet set = build_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  const AmplitudeLaw law =
      AmplitudeLaw::deterministic(ArrayXd::Constant(16, 50.0));
  WaveField f = generate_rpa_field(lat, law, 2, 0);
  IntegrateOptions opts;
  opts.dt = (2.0 * pi / max_dispersion(lat, sys)) / 20.0;
  CHECK_THROWS_AS(integrate_three_wave(std::move(f), sys, set, 50.0, opts),
                  std::runtime_error);
}

TEST_CASE("trajectory sampling") {
  const FourierLattice lat = build_lattice(1, 8, 2.0 * pi);
  const WaveSystem sys = single_triad_system(0.1);
  const TriadSet set = build_triad_set(
      lat, sys, std::numeric_limits<double>::infinity());
  WaveField f = make_field(lat);
  f.a[lat.flat_index(IndexVec(1, 0, 0))] = Complex(0.5, 0.0);
  f.a[lat.flat_index(IndexVec(2, 0, 0))] = Complex(0.5, 0.0);
  IntegrateOptions opts;
  opts.dt = 0.01;
  opts.sample_every = 10;
  Trajectory traj;
  integrate_three_wave(std::move(f), sys, set, 1.0, opts, &traj);
  REQUIRE(traj.times.size() == traj.states.size());
  CHECK(traj.times.size() == 11); // t=0 plus every 10th of 100 steps
  CHECK(traj.times.front() == 0.0);
  CHECK(traj.times.back() == doctest::Approx(1.0));
}

TEST_SUITE_END();
