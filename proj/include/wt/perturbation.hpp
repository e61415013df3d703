#pragma once

#include "wt/dynamics.hpp"

namespace wt {

// Delta(x, T) = int_0^T exp(i x t) dt = (exp(i x T) - 1)/(i x), with the
// removable singularity at x = 0 handled by series expansion.
Complex delta_kernel(double x, double T);

// int_0^T t exp(i x t) dt.
Complex ramp_kernel(double x, double T);

// E(x, y, T) = int_0^T Delta_t(x - y) exp(i y t) dt, where Delta_t is the
// inner kernel with running upper limit t.  Equals
// (Delta(x,T) - Delta(y,T)) / (i (x - y)) away from the diagonal.
Complex e_kernel(double x, double y, double T);

// Weak-nonlinearity iterates a^(p) of the expansion
// a(T) = a^(0) + eps a^(1) + eps^2 a^(2) + ...
// taken at the t = 0 amplitudes of field0.  The returned fields are the bare
// coefficients a^(p); the caller applies the powers of epsilon.
ArrayXcd first_iterate_3w(const WaveField& field0, const WaveSystem& sys,
                          const TriadSet& triads, double T);
ArrayXcd second_iterate_3w(const WaveField& field0, const WaveSystem& sys,
                           const TriadSet& triads, double T);

// Four-wave iterates include the frequency-renormalization counter-terms;
// shift must be the FrequencyShift of field0 (Omega with the epsilon factor
// included, as used by the dynamics).
ArrayXcd first_iterate_4w(const WaveField& field0, const WaveSystem& sys,
                          const QuartetSet& quartets,
                          const FrequencyShift& shift, double T);
ArrayXcd second_iterate_4w(const WaveField& field0, const WaveSystem& sys,
                           const QuartetSet& quartets,
                           const FrequencyShift& shift, double T);

// Timescale separation check 2*pi/omega_max << T for the intermediate time.
bool timescale_separated(double T, double omega_max);

} // namespace wt
