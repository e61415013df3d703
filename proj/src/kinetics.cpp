#include "wt/kinetics.hpp"

#include <cmath>
#include <stdexcept>

namespace wt {

double DeltaKernel::operator()(double x) const {
  switch (kind) {
    case DeltaKernelKind::triangular: {
      const double u = std::abs(x) / scale;
      return u < 1.0 ? (1.0 - u) / scale : 0.0;
    }
    case DeltaKernelKind::lorentzian:
      return (scale / pi) / (x * x + scale * scale);
    case DeltaKernelKind::window_sinc2: {
      const double u = x * scale; // scale is the window length T
      if (std::abs(u) < 1e-4)
        return scale * (0.5 - u * u / 24.0 + u * u * u * u / 720.0) / pi;
      return (1.0 - std::cos(u)) / (pi * scale * x * x);
    }
    case DeltaKernelKind::unit:
      return 1.0;
  }
  return 0.0;
}

DeltaKernel DeltaKernel::triangular(double half_width) {
  if (!(half_width > 0.0))
    throw std::invalid_argument("DeltaKernel: half_width must be > 0");
  return {DeltaKernelKind::triangular, half_width};
}

DeltaKernel DeltaKernel::lorentzian(double half_width) {
  if (!(half_width > 0.0))
    throw std::invalid_argument("DeltaKernel: half_width must be > 0");
  return {DeltaKernelKind::lorentzian, half_width};
}

DeltaKernel DeltaKernel::window(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("DeltaKernel: T must be > 0");
  return {DeltaKernelKind::window_sinc2, T};
}

DeltaKernel DeltaKernel::unit() { return {DeltaKernelKind::unit, 1.0}; }

CollisionRates collision_rates_3w(const ArrayXd& n, const WaveSystem& sys,
                                  const TriadSet& triads,
                                  const DeltaKernel& kernel) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("collision_rates_3w: system is not three-wave");
  if (n.size() != triads.mode_count)
    throw std::invalid_argument("collision_rates_3w: spectrum size mismatch");
  CollisionRates r;
  r.eta = ArrayXd::Zero(n.size());
  r.gamma = ArrayXd::Zero(n.size());
  const double pre = 4.0 * pi * sys.epsilon * sys.epsilon;
  for (const TriadTerm& e : triads.terms) {
    const double w = pre * std::norm(e.V) * kernel(e.detuning);
    if (w == 0.0) continue;
    ++r.active_terms;
    // k_j = k_m + k_n with j as the decaying mode
    r.eta[e.j] += w * n[e.m] * n[e.n];
    r.gamma[e.j] += 2.0 * w * n[e.n];
    // the same tuple read with e.m as the output mode
    r.eta[e.m] += 2.0 * w * n[e.n] * n[e.j];
    r.gamma[e.m] += 2.0 * w * (n[e.n] - n[e.j]);
  }
  return r;
}

CollisionRates collision_rates_4w(const ArrayXd& n, const WaveSystem& sys,
                                  const QuartetSet& quartets,
                                  const DeltaKernel& kernel,
                                  const ArrayXd* shift) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("collision_rates_4w: system is not four-wave");
  if (n.size() != quartets.mode_count)
    throw std::invalid_argument("collision_rates_4w: spectrum size mismatch");
  CollisionRates r;
  r.eta = ArrayXd::Zero(n.size());
  r.gamma = ArrayXd::Zero(n.size());
  const double pre = 4.0 * pi * sys.epsilon * sys.epsilon;
  for (const QuartetTerm& e : quartets.terms) {
    double det = e.detuning;
    if (shift)
      det += (*shift)[e.j] + (*shift)[e.l] - (*shift)[e.m] - (*shift)[e.n];
    const double w = pre * std::norm(e.W) * kernel(det);
    if (w == 0.0) continue;
    ++r.active_terms;
    r.eta[e.j] += w * n[e.l] * n[e.m] * n[e.n];
    r.gamma[e.j] += w * (n[e.l] * (n[e.m] + n[e.n]) - n[e.m] * n[e.n]);
  }
  return r;
}

KineticState make_kinetic_state(ArrayXd n0) {
  if ((n0 < 0.0).any())
    throw std::invalid_argument("make_kinetic_state: negative spectrum");
  KineticState s;
  const auto N = n0.size();
  s.n = std::move(n0);
  s.eta = ArrayXd::Zero(N);
  s.gamma = ArrayXd::Zero(N);
  s.gamma_tilde = ArrayXd::Zero(N);
  return s;
}

void refresh_rates_3w(KineticState& state, const WaveSystem& sys,
                      const TriadSet& triads, const DeltaKernel& kernel) {
  const CollisionRates r = collision_rates_3w(state.n, sys, triads, kernel);
  state.eta = r.eta;
  state.gamma = r.gamma;
}

void refresh_rates_4w(KineticState& state, const WaveSystem& sys,
                      const QuartetSet& quartets, const DeltaKernel& kernel) {
  const CollisionRates r = collision_rates_4w(state.n, sys, quartets, kernel);
  state.eta = r.eta;
  state.gamma = r.gamma;
}

void advance(KineticState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("advance: dt must be > 0");
  const ArrayXd damping = state.gamma - state.gamma_tilde;
  const double dmax = damping.maxCoeff();
  if (dmax > 0.0 && dt > 0.1 / dmax * (1.0 + 1e-12))
    throw std::invalid_argument(
        "advance: dt exceeds 0.1 / max(gamma - gamma_tilde)");
  state.n += dt * (state.eta - damping * state.n);
  const double scale = state.n.abs().maxCoeff();
  const double tol = 1e-10 * (scale > 0.0 ? scale : 1.0);
  for (Eigen::Index k = 0; k < state.n.size(); ++k) {
    if (state.n[k] < 0.0) {
      if (state.n[k] < -tol)
        throw std::runtime_error(
            "advance: spectrum went negative beyond solver tolerance");
      state.n[k] = 0.0;
    }
  }
  state.time += dt;
}

void step_kinetic_3w(KineticState& state, const WaveSystem& sys,
                     const TriadSet& triads, const DeltaKernel& kernel,
                     double dt) {
  refresh_rates_3w(state, sys, triads, kernel);
  advance(state, dt);
}

void step_kinetic_4w(KineticState& state, const WaveSystem& sys,
                     const QuartetSet& quartets, const DeltaKernel& kernel,
                     double dt) {
  refresh_rates_4w(state, sys, quartets, kernel);
  advance(state, dt);
}

ArrayXd frequency_shift_spectrum(const ArrayXd& n, const WaveSystem& sys,
                                 const QuartetSet& quartets) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument(
        "frequency_shift_spectrum: system is not four-wave");
  if (n.size() != quartets.self_coupling.rows())
    throw std::invalid_argument("frequency_shift_spectrum: size mismatch");
  return 2.0 * sys.epsilon * (quartets.self_coupling * n.matrix()).array();
}

} // namespace wt
