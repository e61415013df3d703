#pragma once

#include <limits>

#include "wt/grid.hpp"
#include "wt/special.hpp"

namespace wt {

// One-mode amplitude statistics: the moment hierarchy, the s-space
// continuity equation dP/dt + dF/ds = 0 with flux
// F = -s (gamma P + eta dP/ds), and its finite-flux steady states.

// dM^(p)/dt = -p gamma M^(p) + p^2 eta M^(p-1), with M^(0) = 1.
double moment_rhs(int p, double Mp, double Mp_minus_1, double eta,
                  double gamma);

struct OneModePdf {
  SGrid grid;
  ArrayXd P; // density at cell centers
  ArrayXd F; // flux at cell faces (size cells+1)
  double n = 0.0, eta = 0.0, gamma = 0.0;
};

OneModePdf make_one_mode_pdf(SGrid grid, const ArrayXd& P, double n,
                             double eta, double gamma);

// Conservative finite-volume update with exponentially fitted face weights:
// the discrete flux vanishes identically on the equilibrium exp(-gamma s /
// eta), the advective part upwinds and the diffusive part stays centered.
// Total probability is conserved exactly under the zero-flux boundaries.
// Throws when dt violates the explicit stability bound.
void evolve_pdf(OneModePdf& pdf, double dt, int steps);

// Upper bound on a stable explicit step for this pdf.
double pdf_stable_dt(const OneModePdf& pdf);

// Steady solution with constant flux F:
//   P(s) = C exp(-s/n) - (F/eta) Ei(s/n) exp(-s/n),
// gamma = eta / n, C fixed by normalization over [0, s_cut]; P = 0 beyond
// s_cut (wavebreaking cutoff).  Throws, naming the positivity bound, when F
// makes P negative inside the domain.
OneModePdf steady_pdf(SGrid grid, double n, double F, double eta,
                      double s_cut = std::numeric_limits<double>::infinity());

// Large-s expansion of the finite-flux part: -F/(s gamma) - eta F/(gamma s)^2.
double tail_series(double s, double F, double gamma, double eta, int terms);

// Wavebreaking intensity s_nl = omega / (eps W k^2); the one-mode PDF is cut
// off there.
double breaking_amplitude(double omega, double eps, double W, double k);

} // namespace wt
