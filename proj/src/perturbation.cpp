#include "wt/perturbation.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wt {

namespace {

constexpr double series_threshold = 1e-4; // on |arg| * T
const Complex I(0.0, 1.0);

// R_m(y, T) = int_0^T t^m exp(i y t) dt.
// Series in (i y T) for small |y T|, upward recurrence otherwise.
Complex moment_kernel(int m, double y, double T) {
  const double yT = y * T;
  if (std::abs(yT) < 4.0) {
    Complex sum(0.0, 0.0);
    Complex term(1.0 / (m + 1), 0.0); // k = 0
    sum += term;
    Complex iyT = I * yT;
    Complex pow(1.0, 0.0);
    double factorial = 1.0;
    for (int k = 1; k < 64; ++k) {
      pow *= iyT;
      factorial *= k;
      const Complex add = pow / (factorial * (k + m + 1));
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum) && k > 4) break;
    }
    return std::pow(T, m + 1) * sum;
  }
  Complex r = delta_kernel(y, T);
  const Complex eiyT = std::polar(1.0, yT);
  double Tm = 1.0;
  for (int k = 1; k <= m; ++k) {
    Tm *= T;
    r = (Tm * eiyT - static_cast<double>(k) * r) / (I * y);
  }
  return r;
}

} // namespace

Complex delta_kernel(double x, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("delta_kernel: T must be > 0");
  const double xT = x * T;
  if (std::abs(xT) < series_threshold) {
    const Complex ixT = I * xT;
    return T * (1.0 + ixT / 2.0 + ixT * ixT / 6.0 + ixT * ixT * ixT / 24.0 +
                ixT * ixT * ixT * ixT / 120.0);
  }
  // exp(i x T) - 1 with the real part written as -2 sin^2(xT/2): no
  // cancellation for small arguments
  const double half = std::sin(0.5 * xT);
  const Complex num(-2.0 * half * half, std::sin(xT));
  return num / (I * x);
}

Complex ramp_kernel(double x, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("ramp_kernel: T must be > 0");
  return moment_kernel(1, x, T);
}

Complex e_kernel(double x, double y, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("e_kernel: T must be > 0");
  const double z = x - y;
  if (std::abs(z * T) < series_threshold) {
    // E = sum_k (i z)^k / (k+1)! * R_{k+1}(y, T), truncated at 4th order
    Complex sum(0.0, 0.0);
    Complex coeff(1.0, 0.0);
    double factorial = 1.0;
    for (int k = 0; k <= 4; ++k) {
      factorial *= (k + 1);
      sum += coeff / factorial * moment_kernel(k + 1, y, T);
      coeff *= I * z;
    }
    return sum;
  }
  return (delta_kernel(x, T) - delta_kernel(y, T)) / (I * z);
}

bool timescale_separated(double T, double omega_max) {
  return omega_max > 0.0 && T * omega_max >= 10.0 * 2.0 * pi;
}

namespace {

struct Term {
  Complex c;
  double x;
};

// a^(1)_l(t) = sum over the mode's term list of c * Delta_t(x)
// (plus i*(Omega_l/eps)*a_l*t in the four-wave case, kept separately).
std::vector<std::vector<Term>> first_order_terms_3w(const ArrayXcd& a,
                                                    const TriadSet& triads) {
  std::vector<std::vector<Term>> terms(a.size());
  for (const TriadTerm& e : triads.terms) {
    terms[e.j].push_back({-I * e.V * a[e.m] * a[e.n], e.detuning});
    terms[e.m].push_back(
        {-I * 2.0 * std::conj(e.V) * a[e.j] * std::conj(a[e.n]), -e.detuning});
  }
  return terms;
}

} // namespace

ArrayXcd first_iterate_3w(const WaveField& field0, const WaveSystem& sys,
                          const TriadSet& triads, double T) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("first_iterate_3w: order mismatch");
  const ArrayXcd& a = field0.a;
  ArrayXcd a1 = ArrayXcd::Zero(a.size());
  for (const TriadTerm& e : triads.terms) {
    const Complex D = delta_kernel(e.detuning, T);
    a1[e.j] += -I * e.V * a[e.m] * a[e.n] * D;
    a1[e.m] += -I * 2.0 * std::conj(e.V) * a[e.j] * std::conj(a[e.n]) *
               std::conj(D);
  }
  return a1;
}

ArrayXcd second_iterate_3w(const WaveField& field0, const WaveSystem& sys,
                           const TriadSet& triads, double T) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("second_iterate_3w: order mismatch");
  const ArrayXcd& a = field0.a;
  const auto terms = first_order_terms_3w(a, triads);
  ArrayXcd a2 = ArrayXcd::Zero(a.size());
  for (const TriadTerm& e : triads.terms) {
    // output e.j: V e^{i det t} (a_m a^(1)_n + a^(1)_m a_n)
    {
      const double y = e.detuning;
      for (const Term& t : terms[e.n])
        a2[e.j] += -I * e.V * a[e.m] * t.c * e_kernel(t.x + y, y, T);
      for (const Term& t : terms[e.m])
        a2[e.j] += -I * e.V * t.c * a[e.n] * e_kernel(t.x + y, y, T);
    }
    // output e.m: 2 conj(V) e^{-i det t} (a^(1)_j conj(a_n) + a_j conj(a^(1)_n))
    {
      const double y = -e.detuning;
      const Complex c2 = -I * 2.0 * std::conj(e.V);
      for (const Term& t : terms[e.j])
        a2[e.m] += c2 * t.c * std::conj(a[e.n]) * e_kernel(t.x + y, y, T);
      for (const Term& t : terms[e.n])
        a2[e.m] += c2 * a[e.j] * std::conj(t.c) * e_kernel(-t.x + y, y, T);
    }
  }
  return a2;
}

ArrayXcd first_iterate_4w(const WaveField& field0, const WaveSystem& sys,
                          const QuartetSet& quartets,
                          const FrequencyShift& shift, double T) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("first_iterate_4w: order mismatch");
  if (!(sys.epsilon > 0.0))
    throw std::invalid_argument("first_iterate_4w: epsilon must be positive");
  const ArrayXcd& a = field0.a;
  ArrayXcd a1 = ArrayXcd::Zero(a.size());
  for (const QuartetTerm& e : quartets.terms) {
    const double det =
        e.detuning + shift[e.j] + shift[e.l] - shift[e.m] - shift[e.n];
    a1[e.j] += -I * e.W * std::conj(a[e.l]) * a[e.m] * a[e.n] *
               delta_kernel(det, T);
  }
  // counter-term +i (Omega_l / eps) a_l T; the expansion carries the shift
  // at order one because Omega itself is O(eps)
  a1 += I * (shift / sys.epsilon).cast<Complex>() * a * T;
  return a1;
}

ArrayXcd second_iterate_4w(const WaveField& field0, const WaveSystem& sys,
                           const QuartetSet& quartets,
                           const FrequencyShift& shift, double T) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("second_iterate_4w: order mismatch");
  if (!(sys.epsilon > 0.0))
    throw std::invalid_argument("second_iterate_4w: epsilon must be positive");
  const ArrayXcd& a = field0.a;
  const ArrayXd omega_hat = shift / sys.epsilon;

  std::vector<std::vector<Term>> terms(a.size());
  for (const QuartetTerm& e : quartets.terms) {
    const double det =
        e.detuning + shift[e.j] + shift[e.l] - shift[e.m] - shift[e.n];
    terms[e.j].push_back(
        {-I * e.W * std::conj(a[e.l]) * a[e.m] * a[e.n], det});
  }
  // t-linear part of a^(1)_l(t): lin_l * t with lin_l = i (Omega_l/eps) a_l
  ArrayXcd lin = I * omega_hat.cast<Complex>() * a;

  ArrayXcd a2 = ArrayXcd::Zero(a.size());
  for (const QuartetTerm& e : quartets.terms) {
    const double y =
        e.detuning + shift[e.j] + shift[e.l] - shift[e.m] - shift[e.n];
    const Complex base = -I * e.W;
    const Complex ramp = moment_kernel(1, y, T);
    // conj(a^(1)_l) a_m a_n
    for (const Term& t : terms[e.l])
      a2[e.j] += base * std::conj(t.c) * a[e.m] * a[e.n] *
                 e_kernel(-t.x + y, y, T);
    a2[e.j] += base * std::conj(lin[e.l]) * a[e.m] * a[e.n] * ramp;
    // conj(a_l) a^(1)_m a_n
    for (const Term& t : terms[e.m])
      a2[e.j] += base * std::conj(a[e.l]) * t.c * a[e.n] *
                 e_kernel(t.x + y, y, T);
    a2[e.j] += base * std::conj(a[e.l]) * lin[e.m] * a[e.n] * ramp;
    // conj(a_l) a_m a^(1)_n
    for (const Term& t : terms[e.n])
      a2[e.j] += base * std::conj(a[e.l]) * a[e.m] * t.c *
                 e_kernel(t.x + y, y, T);
    a2[e.j] += base * std::conj(a[e.l]) * a[e.m] * lin[e.n] * ramp;
  }
  // counter-term +i (Omega_l/eps) int_0^T a^(1)_l(t) dt
  for (int l = 0; l < a.size(); ++l) {
    Complex integral(0.0, 0.0);
    for (const Term& t : terms[l]) integral += t.c * e_kernel(t.x, 0.0, T);
    integral += lin[l] * (T * T / 2.0);
    a2[l] += I * omega_hat[l] * integral;
  }
  return a2;
}

} // namespace wt
