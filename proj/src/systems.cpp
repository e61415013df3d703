#include "wt/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace wt {

namespace {

bool is_zero(const KVec& k) { return k.isZero(); }

// L_{a,b} = (a . b) + |a||b|
double capillary_L(const KVec& a, const KVec& b) {
  return a.dot(b) + a.norm() * b.norm();
}

double capillary_omega(double sigma, const KVec& k) {
  const double kk = k.norm();
  return std::sqrt(sigma * kk * kk * kk);
}

Complex capillary_V(double sigma, const KVec& kl, const KVec& km,
                    const KVec& kn) {
  const double wl = capillary_omega(sigma, kl);
  const double wm = capillary_omega(sigma, km);
  const double wn = capillary_omega(sigma, kn);
  const double l = kl.norm(), m = km.norm(), n = kn.norm();
  const double bracket = capillary_L(km, kn) / (std::sqrt(m * n) * l) -
                         capillary_L(kl, -km) / (std::sqrt(l * m) * n) -
                         capillary_L(kl, -kn) / (std::sqrt(l * n) * m);
  return std::sqrt(wl * wm * wn) * bracket / (8.0 * pi * std::sqrt(2.0 * sigma));
}

double rossby_omega(double beta, double rho, const KVec& k) {
  return beta * k.x() / (1.0 + rho * rho * k.squaredNorm());
}

Complex rossby_V(double beta, double rho, const KVec& kl, const KVec& km,
                 const KVec& kn) {
  const double pre = std::sqrt(std::abs(kl.x() * km.x() * kn.x()));
  const double bracket = kl.y() / (1.0 + rho * rho * kl.squaredNorm()) -
                         km.y() / (1.0 + rho * rho * km.squaredNorm()) -
                         kn.y() / (1.0 + rho * rho * kn.squaredNorm());
  return Complex(0.0, -beta / (4.0 * pi)) * pre * bracket;
}

} // namespace

WaveSystem WaveSystem::capillary(double sigma, double epsilon) {
  WaveSystem s;
  s.kind = SystemKind::capillary;
  s.order = InteractionOrder::three_wave;
  s.sigma = sigma;
  s.epsilon = epsilon;
  if (!(sigma > 0.0))
    throw std::invalid_argument("capillary: sigma must be positive");
  return s;
}

WaveSystem WaveSystem::rossby(double beta, double rho, double epsilon) {
  WaveSystem s;
  s.kind = SystemKind::rossby;
  s.order = InteractionOrder::three_wave;
  s.beta = beta;
  s.rho = rho;
  s.epsilon = epsilon;
  if (!(rho > 0.0))
    throw std::invalid_argument("rossby: rho must be positive");
  return s;
}

WaveSystem WaveSystem::nls(double epsilon) {
  WaveSystem s;
  s.kind = SystemKind::nls;
  s.order = InteractionOrder::four_wave;
  s.epsilon = epsilon;
  return s;
}

WaveSystem WaveSystem::gravity(double g, double epsilon) {
  WaveSystem s;
  s.kind = SystemKind::gravity;
  s.order = InteractionOrder::three_wave;
  s.g = g;
  s.epsilon = epsilon;
  if (!(g > 0.0)) throw std::invalid_argument("gravity: g must be positive");
  return s;
}

WaveSystem WaveSystem::acoustic(double c, double v0, double epsilon) {
  WaveSystem s;
  s.kind = SystemKind::acoustic;
  s.order = InteractionOrder::three_wave;
  s.c = c;
  s.v0 = v0;
  s.epsilon = epsilon;
  if (!(c > 0.0)) throw std::invalid_argument("acoustic: c must be positive");
  return s;
}

WaveSystem WaveSystem::custom3(DispersionHook w, Coupling3Hook v,
                               double epsilon) {
  WaveSystem s;
  s.kind = SystemKind::custom;
  s.order = InteractionOrder::three_wave;
  s.custom_dispersion = std::move(w);
  s.custom_coupling3 = std::move(v);
  s.epsilon = epsilon;
  return s;
}

WaveSystem WaveSystem::custom4(DispersionHook w, Coupling4Hook w4,
                               double epsilon) {
  WaveSystem s;
  s.kind = SystemKind::custom;
  s.order = InteractionOrder::four_wave;
  s.custom_dispersion = std::move(w);
  s.custom_coupling4 = std::move(w4);
  s.epsilon = epsilon;
  return s;
}

double dispersion(const WaveSystem& sys, const KVec& k) {
  switch (sys.kind) {
    case SystemKind::capillary:
      return capillary_omega(sys.sigma, k);
    case SystemKind::rossby:
      return rossby_omega(sys.beta, sys.rho, k);
    case SystemKind::nls:
      return k.squaredNorm();
    case SystemKind::gravity:
      return std::sqrt(sys.g * k.norm());
    case SystemKind::acoustic:
      return sys.c * k.norm();
    case SystemKind::custom:
      if (!sys.custom_dispersion)
        throw std::invalid_argument("dispersion: custom hook missing");
      return sys.custom_dispersion(k);
  }
  throw std::invalid_argument("dispersion: unknown system kind");
}

Complex coupling3(const WaveSystem& sys, const KVec& kl, const KVec& km,
                  const KVec& kn) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("coupling3: system is not three-wave");
  if (is_zero(kl) || is_zero(km) || is_zero(kn)) return Complex(0.0, 0.0);
  switch (sys.kind) {
    case SystemKind::capillary:
      return capillary_V(sys.sigma, kl, km, kn);
    case SystemKind::rossby:
      return rossby_V(sys.beta, sys.rho, kl, km, kn);
    case SystemKind::acoustic:
      return Complex(sys.v0, 0.0);
    case SystemKind::custom: {
      if (!sys.custom_coupling3)
        throw std::invalid_argument("coupling3: custom hook missing");
      return 0.5 * (sys.custom_coupling3(kl, km, kn) +
                    sys.custom_coupling3(kl, kn, km));
    }
    case SystemKind::gravity:
      throw std::invalid_argument(
          "coupling3: gravity system is dispersion-only");
    default:
      throw std::invalid_argument("coupling3: unknown system kind");
  }
}

Complex coupling4(const WaveSystem& sys, const KVec& kl, const KVec& km,
                  const KVec& kmu, const KVec& knu) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("coupling4: system is not four-wave");
  if (is_zero(kl) || is_zero(km) || is_zero(kmu) || is_zero(knu))
    return Complex(0.0, 0.0);
  if (sys.kind == SystemKind::nls) return Complex(1.0, 0.0);
  if (sys.kind == SystemKind::custom) {
    if (!sys.custom_coupling4)
      throw std::invalid_argument("coupling4: custom hook missing");
    return 0.25 * (sys.custom_coupling4(kl, km, kmu, knu) +
                   sys.custom_coupling4(km, kl, kmu, knu) +
                   sys.custom_coupling4(kl, km, knu, kmu) +
                   sys.custom_coupling4(km, kl, knu, kmu));
  }
  throw std::invalid_argument("coupling4: unknown system kind");
}

std::vector<std::string> system_warnings(const WaveSystem& sys) {
  std::vector<std::string> w;
  if (!(sys.epsilon > 0.0))
    w.push_back("epsilon must be positive for a weakly nonlinear run");
  else if (sys.epsilon > 0.3)
    w.push_back("epsilon > 0.3 is outside the weakly nonlinear regime");
  return w;
}

DispersionHook dispersion_fn(const WaveSystem& sys) {
  WaveSystem copy = sys;
  return [copy](const KVec& k) { return dispersion(copy, k); };
}

} // namespace wt
