#include "wt/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wt {

namespace {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Power series Ei(x) = gamma + ln x + sum_k x^k / (k k!).  All terms are
// positive for x > 0, so there is no cancellation; convergence is fast for
// x up to a few tens.
double ei_series(double x) {
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 400; ++k) {
    term *= x / k;
    const double add = term / k;
    sum += add;
    if (add < sum * 1e-18) break;
  }
  return euler_gamma + std::log(x) + sum;
}

// Asymptotic series exp(-x) Ei(x) ~ (1/x) sum_k k! / x^k, truncated at the
// smallest term.  Attains full double precision for x >= 40.
double ei_asymptotic_scaled(double x) {
  double sum = 1.0;
  double term = 1.0;
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 200; ++k) {
    term *= k / x;
    if (term >= prev) break; // terms started growing; stop at the minimum
    sum += term;
    prev = term;
    if (term < 1e-18 * sum) break;
  }
  return sum / x;
}

} // namespace

double expint_ei(double x) {
  if (!(x > 0.0))
    throw std::invalid_argument("expint_ei: argument must be positive");
  if (x <= 40.0) return ei_series(x);
  if (x >= 710.0) return std::numeric_limits<double>::infinity();
  return std::exp(x) * ei_asymptotic_scaled(x);
}

double expint_ei_scaled(double x) {
  if (!(x > 0.0))
    throw std::invalid_argument("expint_ei_scaled: argument must be positive");
  if (x <= 40.0) return std::exp(-x) * ei_series(x);
  return ei_asymptotic_scaled(x);
}

} // namespace wt
