#pragma once

namespace wt {

// Exponential integral Ei(x) for x > 0.
double expint_ei(double x);

// exp(-x) * Ei(x) for x > 0, evaluated without overflow for large x.
double expint_ei_scaled(double x);

} // namespace wt
