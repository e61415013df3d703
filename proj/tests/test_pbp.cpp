#include <doctest.h>

#include <cmath>

#include "wt/experiments.hpp"
#include "wt/pbp.hpp"

using namespace wt;

TEST_SUITE_BEGIN("pbp");

namespace {

WaveSystem dummy3(double eps) {
  return WaveSystem::custom3(
      [](const KVec&) { return 1.0; },
      [](const KVec&, const KVec&, const KVec&) { return Complex(1, 0); },
      eps);
}

TriadSet exact_triad(double w0, double w1, Complex V) {
  return synthetic_triad_set({w0, w1, w0 + w1}, {{2, 0, 1}}, V);
}

MultiModePdf product_pdf(const std::vector<double>& n, int cells,
                         double span = 8.0) {
  std::vector<int> modes(n.size());
  std::vector<SGrid> grids;
  for (std::size_t i = 0; i < n.size(); ++i) {
    modes[i] = static_cast<int>(i);
    grids.push_back(uniform_grid(span * n[i], cells));
  }
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

TEST_CASE("tensor bookkeeping and marginals") {
  MultiModePdf pdf = product_pdf({0.5, 1.0, 2.0}, 24, 10.0);
  CHECK(pdf.slots() == 3);
  CHECK(pdf.cell_count() == 24 * 24 * 24);
  CHECK(total_probability(pdf) == doctest::Approx(1.0).epsilon(1e-12));
  // marginal means approximate the levels (truncated exponential)
  for (int d = 0; d < 3; ++d) {
    const double n = marginal_mean(pdf, d);
    CHECK(n == doctest::Approx(std::vector<double>{0.5, 1.0, 2.0}[d])
                   .epsilon(0.01));
    const ArrayXd m = marginal_density(pdf, d);
    CHECK((m * pdf.grids[d].width).sum() == doctest::Approx(1.0));
  }
  CHECK(pdf.slot_of_mode(2) == 2);
  CHECK(pdf.slot_of_mode(9) == -1);
}

TEST_CASE("zero coupling freezes the density") {
  const TriadSet set = exact_triad(0.9, 1.3, Complex(0, 0));
  const WaveSystem sys = dummy3(0.2);
  MultiModePdf pdf = product_pdf({1.0, 1.0, 1.0}, 12);
  const FluxField flux = pbp_flux_3w(pdf, sys, set, DeltaKernel::unit());
  for (const ArrayXd& F : flux.F) CHECK(F.abs().maxCoeff() == 0.0);
  const ArrayXd before = pdf.P;
  EvolveOptions opts;
  opts.dt = 0.01;
  opts.steps = 5;
  evolve_pbp(pdf, sys, set, DeltaKernel::unit(), opts);
  CHECK((pdf.P - before).abs().maxCoeff() == 0.0);
}

TEST_CASE("uniform density: flux by hand on a tiny grid") {
  const double w0 = 1.0, w1 = 1.0;
  const TriadSet set = exact_triad(w0, w1, Complex(1, 0));
  const WaveSystem sys = dummy3(0.5);
  std::vector<SGrid> grids = {uniform_grid(3.0, 3), uniform_grid(3.0, 3),
                              uniform_grid(3.0, 3)};
  MultiModePdf pdf = make_multimode_pdf(
      {0, 1, 2}, grids, [](const std::vector<double>&) { return 1.0; });
  const FluxField flux = pbp_flux_3w(pdf, sys, set, DeltaKernel::unit());
  // constant density kills every derivative; only the P-terms survive:
  // direction of mode 2 (the sum mode j): bracket = -2 P (s_m + s_n),
  // F = -4 pi eps^2 s_face * bracket
  const double pre = 4.0 * pi * sys.epsilon * sys.epsilon;
  // face between cells (1,1,0) and (1,1,1) in slot 2: s_face = 1.0,
  // s_0 = s_1 = 1.5 (cell centers)
  const auto dims = std::vector<int>{3, 3, 3};
  // slot-2 face tensor: dims {3,3,4}; index (1,1,1)
  const long fidx = (1 * 3 + 1) * 4 + 1;
  const double expected_sum_dir = -pre * 1.0 * (-2.0 * 1.0 * (1.5 + 1.5));
  CHECK(flux.F[2][fidx] == doctest::Approx(expected_sum_dir).epsilon(1e-12));
  // direction of leg mode 0: bracket = +2 P s_n with (j=2 read as leg):
  // s_n is the other leg (slot 1)
  const long fidx0 = (1 * 3 + 1) * 3 + 1; // face tensor dims {4,3,3}, idx (1,1,1)
  const double expected_leg_dir = -pre * 1.0 * (2.0 * 1.0 * 1.5);
  CHECK(flux.F[0][fidx0] == doctest::Approx(expected_leg_dir).epsilon(1e-12));
}

TEST_CASE("a manufactured constant flux is divergence free") {
  MultiModePdf pdf = product_pdf({1.0, 1.0}, 16);
  FluxField flux;
  flux.F.resize(2);
  // constant along each direction, varying across it: exact zero divergence
  flux.F[0] = ArrayXd::Zero(17 * 16);
  flux.F[1] = ArrayXd::Zero(16 * 17);
  for (int f = 0; f < 17; ++f)
    for (int c = 0; c < 16; ++c) {
      flux.F[0][f * 16 + c] = 0.3 + 0.1 * c;
      flux.F[1][c * 17 + f] = -0.2 + 0.05 * c;
    }
  const ArrayXd div = pbp_divergence(flux, pdf);
  CHECK(div.abs().maxCoeff() < 1e-14);
}

TEST_CASE("thermodynamic product is steady: residual shrinks at 2nd order") {
  const double r24 = pbp_thermo_residual(0.9, 1.3, 24);
  const double r48 = pbp_thermo_residual(0.9, 1.3, 48);
  CHECK(r24 / r48 > 3.4);
  CHECK(r24 / r48 < 4.6);
}

TEST_CASE("probability is conserved under evolution") {
  const TriadSet set = exact_triad(0.9, 1.3, Complex(1, 0));
  const WaveSystem sys = dummy3(0.25);
  // start away from equilibrium
  MultiModePdf pdf = product_pdf({1.1, 0.5, 0.8}, 20);
  const double mass0 = total_probability(pdf);
  FluxField probe = pbp_flux_3w(pdf, sys, set, DeltaKernel::unit());
  EvolveOptions opts;
  opts.dt = 0.5 * probe.stable_dt;
  opts.steps = 40;
  evolve_pbp(pdf, sys, set, DeltaKernel::unit(), opts);
  CHECK(total_probability(pdf) == doctest::Approx(mass0).epsilon(1e-10));
  CHECK(pdf.P.minCoeff() >= 0.0);
}

TEST_CASE("thermodynamic start stays put under evolution") {
  const double w0 = 0.9, w1 = 1.3;
  const TriadSet set = exact_triad(w0, w1, Complex(1, 0));
  const WaveSystem sys = dummy3(0.25);
  MultiModePdf pdf =
      product_pdf({1.0 / w0, 1.0 / w1, 1.0 / (w0 + w1)}, 24);
  const ArrayXd before = pdf.P;
  FluxField probe = pbp_flux_3w(pdf, sys, set, DeltaKernel::unit());
  EvolveOptions opts;
  opts.dt = 0.5 * probe.stable_dt;
  opts.steps = 60;
  evolve_pbp(pdf, sys, set, DeltaKernel::unit(), opts);
  const double drift =
      (pdf.P - before).abs().maxCoeff() / before.maxCoeff();
  CHECK(drift < 5e-3); // discretization-level drift only
}

TEST_CASE("marginal flux agrees with the one-mode module") {
  CHECK(pbp_marginal_gap(0.9, 1.3, 48) < 0.05);
}

TEST_CASE("through-flux product beats the thermodynamic residual by 10x") {
  const PbpKzStudy study = pbp_kz_study(16);
  CHECK(study.ratio >= 10.0);
  // the forced steady spectrum really carries a flux: it is not thermodynamic
  CHECK(study.flux_residual > 0.0);
}

TEST_CASE("four-wave flux: equal-temperature divergence vanishes on "
          "refinement") {
  // the 4-bracket kills the thermodynamic product in the continuum; the
  // mixed face/cell differencing leaves an O(h^2) remainder
  const std::vector<double> omega = {1.0, 1.0, 1.0, 1.0};
  const QuartetSet set =
      synthetic_quartet_set(omega, {{0, 1, 2, 3}}, Complex(1, 0));
  const WaveSystem sys = WaveSystem::nls(0.2);
  auto residual = [&](int cells) {
    MultiModePdf pdf = product_pdf({1.0, 1.0, 1.0, 1.0}, cells);
    const FluxField flux = pbp_flux_4w(pdf, sys, set, DeltaKernel::unit());
    return interior_divergence_max(pbp_divergence(flux, pdf), pdf);
  };
  const double r10 = residual(10), r20 = residual(20);
  CHECK(r10 / r20 > 3.3);
  CHECK(r10 / r20 < 5.0);
}

TEST_CASE("four-wave flux: kinetically steady multi-quartet product is not") {
  // two exact quartets sharing modes (dyadic frequencies)
  const std::vector<double> omega = {1.0, 2.0, 1.25, 1.75, 0.5};
  const QuartetSet set = synthetic_quartet_set(
      omega, {{0, 1, 2, 3}, {0, 2, 3, 4}}, Complex(1, 0));
  const WaveSystem sys = WaveSystem::nls(0.3);
  // thermodynamic: equipartition of energy, n = T/omega, zero residual up to
  // discretization
  std::vector<double> n_thermo(5);
  for (int i = 0; i < 5; ++i) n_thermo[i] = 1.0 / omega[i];
  MultiModePdf thermo = product_pdf(n_thermo, 10, 6.0);
  const double r_thermo = interior_divergence_max(
      pbp_divergence(pbp_flux_4w(thermo, sys, set, DeltaKernel::unit()),
                     thermo),
      thermo);
  // force/damp to a through-flux kinetic steady state
  KineticState st = make_kinetic_state(ArrayXd::Constant(5, 1.0));
  st.gamma_tilde = ArrayXd::Zero(5);
  st.gamma_tilde[1] = 0.3;
  st.gamma_tilde[4] = -0.5;
  for (int it = 0; it < 4000; ++it) {
    refresh_rates_4w(st, sys, set, DeltaKernel::unit());
    const double dmax =
        std::max((st.gamma - st.gamma_tilde).maxCoeff(), 1e-6);
    advance(st, 0.09 / dmax);
  }
  std::vector<double> n_flux(5);
  for (int i = 0; i < 5; ++i) n_flux[i] = st.n[i];
  MultiModePdf fluxp = product_pdf(n_flux, 10, 6.0);
  const double r_flux = interior_divergence_max(
      pbp_divergence(pbp_flux_4w(fluxp, sys, set, DeltaKernel::unit()), fluxp),
      fluxp);
  CHECK(r_flux > 5.0 * r_thermo);
}

TEST_CASE("vortex projection: errors, steady null field, circulation") {
  const TriadSet set = exact_triad(0.9, 1.3, Complex(1, 0));
  const WaveSystem sys = dummy3(0.3);
  // strongly out of equilibrium: one-mode fluxes at modes 0 and 2 carry
  // opposite signs for these levels
  MultiModePdf pdf = product_pdf({0.4, 0.4, 0.6}, 20);
  const FluxField flux = pbp_flux_3w(pdf, sys, set, DeltaKernel::unit());
  CHECK_THROWS_AS(vortex_projection(flux, pdf, 1, 1), std::invalid_argument);

  // thermodynamic state: the projected components integrate to vanishing
  // one-mode fluxes (the continuity-form flux itself is only divergence
  // free, carrying a solenoidal gauge part)
  MultiModePdf thermo =
      product_pdf({1.0 / 0.9, 1.0 / 1.3, 1.0 / (0.9 + 1.3)}, 24);
  const FluxField tflux = pbp_flux_3w(thermo, sys, set, DeltaKernel::unit());
  const VortexProjection tv = vortex_projection(tflux, thermo, 0, 2);
  const VortexProjection nv = vortex_projection(flux, pdf, 0, 2);
  const ArrayXd tmarg1 =
      (tv.F1.matrix() * thermo.grids[2].width.matrix()).array();
  const ArrayXd nmarg1 =
      (nv.F1.matrix() * pdf.grids[2].width.matrix()).array();
  CHECK(tmarg1.abs().maxCoeff() < 0.05 * nmarg1.abs().maxCoeff());

  // non-equilibrium: nonzero circulation and opposite-sign one-mode fluxes
  double circ = 0.0;
  const int M1 = static_cast<int>(nv.s1.size());
  const int M2 = static_cast<int>(nv.s2.size());
  // discrete curl integrated over the core quarter of the plane
  for (int i = 1; i < M1 / 2; ++i)
    for (int j = 1; j < M2 / 2; ++j) {
      const double dF2 = nv.F2(i, j) - nv.F2(i - 1, j);
      const double dF1 = nv.F1(i, j) - nv.F1(i, j - 1);
      circ += dF2 / (nv.s1[i] - nv.s1[i - 1]) - dF1 / (nv.s2[j] - nv.s2[j - 1]);
    }
  CHECK(std::abs(circ) > 0.0);

  // marginal one-mode fluxes at the two projected modes have opposite signs
  auto marginal_sign = [&](int dir) {
    double acc = 0.0;
    auto dims = std::vector<int>{20, 20, 20};
    auto fdims = dims;
    fdims[dir] += 1;
    std::vector<int> idx(3, 0);
    for (long flat = 0; flat < flux.F[dir].size(); ++flat) {
      long rem = flat;
      for (int d = 2; d >= 0; --d) {
        idx[d] = static_cast<int>(rem % fdims[d]);
        rem /= fdims[d];
      }
      if (idx[dir] != fdims[dir] / 2) continue; // one interior face sheet
      double vol = 1.0;
      for (int d = 0; d < 3; ++d)
        if (d != dir) vol *= pdf.grids[d].width[idx[d]];
      acc += flux.F[dir][flat] * vol;
    }
    return acc;
  };
  CHECK(marginal_sign(0) * marginal_sign(2) < 0.0);
}

TEST_CASE("input validation") {
  const TriadSet set = exact_triad(0.9, 1.3, Complex(1, 0));
  const WaveSystem sys = dummy3(0.2);
  // resonance set referencing modes outside the pdf
  MultiModePdf pdf2 = product_pdf({1.0, 1.0}, 8);
  CHECK_THROWS_AS(pbp_flux_3w(pdf2, sys, set, DeltaKernel::unit()),
                  std::invalid_argument);
  // tensor grids beyond the memory budget are rejected up front
  std::vector<SGrid> big(6, uniform_grid(1.0, 32));
  CHECK_THROWS_AS(
      make_multimode_pdf({0, 1, 2, 3, 4, 5}, big,
                         [](const std::vector<double>&) { return 1.0; }),
      std::invalid_argument);
  // non-uniform grids are rejected
  std::vector<SGrid> grids = {geometric_grid(8.0, 8, 10.0),
                              uniform_grid(8.0, 8), uniform_grid(8.0, 8)};
  CHECK_THROWS_AS(
      make_multimode_pdf({0, 1, 2}, grids,
                         [](const std::vector<double>&) { return 1.0; }),
      std::invalid_argument);
}

TEST_SUITE_END();
