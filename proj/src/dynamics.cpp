#include "wt/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace wt {

WaveField make_field(const FourierLattice& lattice) {
  WaveField f;
  f.lattice = lattice;
  f.a = ArrayXcd::Zero(lattice.mode_count());
  return f;
}

FrequencyShift frequency_shift(const ArrayXcd& a, const WaveSystem& sys,
                               const QuartetSet& quartets) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("frequency_shift: system is not four-wave");
  const ArrayXd intensity = a.abs2();
  return 2.0 * sys.epsilon *
         (quartets.self_coupling * intensity.matrix()).array();
}

namespace {

ArrayXcd rhs_three_wave_at(const ArrayXcd& a, double t, double eps,
                           const TriadSet& triads) {
  ArrayXcd d = ArrayXcd::Zero(a.size());
  const Complex minus_i_eps(0.0, -eps);
  for (const TriadTerm& e : triads.terms) {
    const Complex ph = std::polar(1.0, e.detuning * t);
    d[e.j] += minus_i_eps * e.V * a[e.m] * a[e.n] * ph;
    d[e.m] += minus_i_eps * 2.0 * std::conj(e.V) * std::conj(a[e.n]) * a[e.j] *
              std::conj(ph);
  }
  return d;
}

ArrayXcd rhs_four_wave_at(const ArrayXcd& a, double t, double eps,
                          const QuartetSet& quartets,
                          const FrequencyShift& shift) {
  ArrayXcd d = ArrayXcd::Zero(a.size());
  const Complex minus_i_eps(0.0, -eps);
  for (const QuartetTerm& e : quartets.terms) {
    const double det =
        e.detuning + shift[e.j] + shift[e.l] - shift[e.m] - shift[e.n];
    const Complex ph = std::polar(1.0, det * t);
    d[e.j] += minus_i_eps * e.W * std::conj(a[e.l]) * a[e.m] * a[e.n] * ph;
  }
  d += Complex(0.0, 1.0) * shift.cast<Complex>() * a;
  return d;
}

void check_step(const FourierLattice& lattice, const WaveSystem& sys,
                double dt) {
  const double wmax = max_dispersion(lattice, sys);
  if (wmax > 0.0 && dt > (2.0 * pi / wmax) / 20.0 * (1.0 + 1e-12))
    throw std::invalid_argument(
        "integrate: dt exceeds (2*pi/omega_max)/20; linear oscillations "
        "would be under-resolved");
}

template <typename Rhs>
WaveField run_rk4(WaveField field, double T, double dt, int sample_every,
                  Trajectory* trajectory, Rhs&& rhs_at, auto&& on_step_start) {
  if (T < 0.0) throw std::invalid_argument("integrate: T must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be > 0");
  if (T == 0.0) return field;
  const long nsteps = static_cast<long>(std::ceil(T / dt * (1.0 - 1e-12)));
  const double h = T / static_cast<double>(nsteps);
  if (trajectory) {
    trajectory->times.push_back(field.time);
    trajectory->states.push_back(field.a);
  }
  for (long s = 0; s < nsteps; ++s) {
    on_step_start(field.a);
    const double t = field.time;
    const ArrayXcd k1 = rhs_at(field.a, t);
    const ArrayXcd k2 = rhs_at(field.a + 0.5 * h * k1, t + 0.5 * h);
    const ArrayXcd k3 = rhs_at(field.a + 0.5 * h * k2, t + 0.5 * h);
    const ArrayXcd k4 = rhs_at(field.a + h * k3, t + h);
    field.a += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    field.time = t + h;
    if (!field.a.allFinite())
      throw std::runtime_error("integrate: amplitudes blew up at t = " +
                               std::to_string(field.time));
    if (trajectory && sample_every > 0 &&
        ((s + 1) % sample_every == 0 || s + 1 == nsteps)) {
      trajectory->times.push_back(field.time);
      trajectory->states.push_back(field.a);
    }
  }
  return field;
}

} // namespace

ArrayXcd rhs_three_wave(const WaveField& field, const WaveSystem& sys,
                        const TriadSet& triads) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("rhs_three_wave: system is not three-wave");
  if (!std::isinf(triads.delta_omega))
    throw std::invalid_argument(
        "rhs_three_wave: dynamics needs the full momentum-conserving triad "
        "list (delta_omega = inf); the oscillating factors carry detuning");
  return rhs_three_wave_at(field.a, field.time, sys.epsilon, triads);
}

ArrayXcd rhs_four_wave(const WaveField& field, const WaveSystem& sys,
                       const QuartetSet& quartets,
                       const FrequencyShift& shift) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("rhs_four_wave: system is not four-wave");
  if (!std::isinf(quartets.delta_omega))
    throw std::invalid_argument(
        "rhs_four_wave: dynamics needs the full quartet list");
  return rhs_four_wave_at(field.a, field.time, sys.epsilon, quartets, shift);
}

WaveField integrate_three_wave(WaveField field, const WaveSystem& sys,
                               const TriadSet& triads, double T,
                               const IntegrateOptions& opts,
                               Trajectory* trajectory) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("integrate_three_wave: order mismatch");
  check_step(field.lattice, sys, opts.dt);
  const double eps = sys.epsilon;
  return run_rk4(
      std::move(field), T, opts.dt, opts.sample_every, trajectory,
      [&](const ArrayXcd& a, double t) {
        return rhs_three_wave_at(a, t, eps, triads);
      },
      [](const ArrayXcd&) {});
}

WaveField integrate_four_wave(WaveField field, const WaveSystem& sys,
                              const QuartetSet& quartets, double T,
                              const IntegrateOptions& opts,
                              Trajectory* trajectory) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("integrate_four_wave: order mismatch");
  check_step(field.lattice, sys, opts.dt);
  const double eps = sys.epsilon;
  FrequencyShift shift = frequency_shift(field.a, sys, quartets);
  const bool refresh = opts.shift_policy == ShiftPolicy::refresh_each_step;
  return run_rk4(
      std::move(field), T, opts.dt, opts.sample_every, trajectory,
      [&](const ArrayXcd& a, double t) {
        return rhs_four_wave_at(a, t, eps, quartets, shift);
      },
      [&](const ArrayXcd& a) {
        if (refresh) shift = frequency_shift(a, sys, quartets);
      });
}

double hamiltonian(const WaveField& field, const WaveSystem& sys,
                   const TriadSet& triads) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("hamiltonian: order mismatch");
  const ArrayXcd& a = field.a;
  double H = 0.0;
  for (int i = 0; i < a.size(); ++i)
    H += dispersion(sys, field.lattice.wavevector(i)) * std::norm(a[i]);
  double H3 = 0.0;
  for (const TriadTerm& e : triads.terms) {
    const Complex ph = std::polar(1.0, e.detuning * field.time);
    H3 += 2.0 * std::real(e.V * std::conj(a[e.j]) * a[e.m] * a[e.n] * ph);
  }
  return H + sys.epsilon * H3;
}

double hamiltonian(const WaveField& field, const WaveSystem& sys,
                   const QuartetSet& quartets, const FrequencyShift* shift) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("hamiltonian: order mismatch");
  const ArrayXcd& a = field.a;
  double H = 0.0;
  for (int i = 0; i < a.size(); ++i)
    H += dispersion(sys, field.lattice.wavevector(i)) * std::norm(a[i]);
  FrequencyShift local;
  if (!shift) {
    local = frequency_shift(field.a, sys, quartets);
    shift = &local;
  }
  double H4 = 0.0;
  for (const QuartetTerm& e : quartets.terms) {
    const double det = e.detuning + (*shift)[e.j] + (*shift)[e.l] -
                       (*shift)[e.m] - (*shift)[e.n];
    const Complex ph = std::polar(1.0, det * field.time);
    H4 += std::real(e.W * std::conj(a[e.j]) * std::conj(a[e.l]) * a[e.m] *
                    a[e.n] * ph);
  }
  return H + 0.5 * sys.epsilon * H4;
}

double max_dispersion(const FourierLattice& lattice, const WaveSystem& sys) {
  double wmax = 0.0;
  for (int i = 0; i < lattice.mode_count(); ++i)
    wmax = std::max(wmax, std::abs(dispersion(sys, lattice.wavevector(i))));
  return wmax;
}

} // namespace wt
