#include "wt/onemode.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wt {

double moment_rhs(int p, double Mp, double Mp_minus_1, double eta,
                  double gamma) {
  if (p < 1) throw std::invalid_argument("moment_rhs: p must be >= 1");
  return -p * gamma * Mp + static_cast<double>(p) * p * eta * Mp_minus_1;
}

namespace {

// Exponential-fitting face weight: theta weights the left cell so that the
// discrete flux vanishes on the exp(-gamma s / eta) equilibrium.
double face_theta(double w) {
  if (std::abs(w) < 1e-5) return 0.5 - w / 12.0 + w * w * w / 720.0;
  return 1.0 / w - 1.0 / std::expm1(w);
}

struct FaceCoeffs {
  ArrayXd A; // coefficient of the left cell in the face flux
  ArrayXd B; // coefficient of the right cell
};

FaceCoeffs face_coeffs(const OneModePdf& pdf) {
  const int M = pdf.grid.cells();
  FaceCoeffs c;
  c.A = ArrayXd::Zero(M + 1);
  c.B = ArrayXd::Zero(M + 1);
  for (int f = 1; f < M; ++f) {
    const double s = pdf.grid.edges[f];
    const double h = pdf.grid.center[f] - pdf.grid.center[f - 1];
    const double w = pdf.gamma * h / pdf.eta;
    const double theta = face_theta(w);
    c.A[f] = -s * (pdf.gamma * theta - pdf.eta / h);
    c.B[f] = -s * (pdf.gamma * (1.0 - theta) + pdf.eta / h);
  }
  return c;
}

void compute_flux(const OneModePdf& pdf, const FaceCoeffs& c, ArrayXd& F) {
  const int M = pdf.grid.cells();
  F.setZero(M + 1);
  for (int f = 1; f < M; ++f)
    F[f] = c.A[f] * pdf.P[f - 1] + c.B[f] * pdf.P[f];
}

} // namespace

OneModePdf make_one_mode_pdf(SGrid grid, const ArrayXd& P, double n,
                             double eta, double gamma) {
  if (P.size() != grid.cells())
    throw std::invalid_argument("make_one_mode_pdf: P size mismatch");
  OneModePdf pdf;
  pdf.grid = std::move(grid);
  pdf.P = P;
  pdf.F = ArrayXd::Zero(pdf.grid.cells() + 1);
  pdf.n = n;
  pdf.eta = eta;
  pdf.gamma = gamma;
  return pdf;
}

double pdf_stable_dt(const OneModePdf& pdf) {
  const FaceCoeffs c = face_coeffs(pdf);
  const int M = pdf.grid.cells();
  double bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < M; ++i) {
    const double diag = (-c.B[i] + c.A[i + 1]) / pdf.grid.width[i];
    if (diag > 0.0) bound = std::min(bound, 1.0 / diag);
  }
  return bound;
}

void evolve_pdf(OneModePdf& pdf, double dt, int steps) {
  if (!(dt > 0.0) || steps < 0)
    throw std::invalid_argument("evolve_pdf: bad dt or steps");
  if (!(pdf.eta > 0.0) || !(pdf.gamma > 0.0))
    throw std::invalid_argument("evolve_pdf: eta and gamma must be positive");
  const double bound = pdf_stable_dt(pdf);
  if (dt > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "evolve_pdf: dt = " << dt << " violates the stability bound "
       << bound;
    throw std::invalid_argument(os.str());
  }
  const FaceCoeffs c = face_coeffs(pdf);
  const int M = pdf.grid.cells();
  ArrayXd F(M + 1);
  for (int s = 0; s < steps; ++s) {
    compute_flux(pdf, c, F);
    for (int i = 0; i < M; ++i)
      pdf.P[i] -= dt * (F[i + 1] - F[i]) / pdf.grid.width[i];
  }
  compute_flux(pdf, c, pdf.F);
}

OneModePdf steady_pdf(SGrid grid, double n, double F, double eta,
                      double s_cut) {
  if (!(n > 0.0) || !(eta > 0.0))
    throw std::invalid_argument("steady_pdf: n and eta must be positive");
  const int M = grid.cells();
  const double gamma = eta / n;
  ArrayXd base(M), lin(M);
  double I_exp = 0.0, I_lin = 0.0;
  for (int i = 0; i < M; ++i) {
    const double s = grid.center[i];
    if (s > s_cut) {
      base[i] = 0.0;
      lin[i] = 0.0;
      continue;
    }
    const double x = s / n;
    base[i] = std::exp(-x);
    lin[i] = -expint_ei_scaled(x) / eta; // coefficient of F in P_part
    I_exp += base[i] * grid.width[i];
    I_lin += lin[i] * grid.width[i];
  }
  if (I_exp <= 0.0)
    throw std::invalid_argument("steady_pdf: cutoff below the whole grid");
  // P = C exp(-s/n) + F * lin with C fixed by sum(P * ds) = 1
  const double C = (1.0 - F * I_lin) / I_exp;
  ArrayXd P = C * base + F * lin;

  // positivity: P is affine in F, so report the largest admissible |F|
  for (int i = 0; i < M; ++i) {
    if (P[i] < 0.0 && grid.center[i] <= s_cut) {
      double fbound = std::numeric_limits<double>::infinity();
      for (int k = 0; k < M; ++k) {
        if (grid.center[k] > s_cut) continue;
        const double b = base[k] / I_exp;
        const double l = lin[k] - I_lin * base[k] / I_exp;
        if (l * F < 0.0) fbound = std::min(fbound, b / std::abs(l));
      }
      std::ostringstream os;
      os << "steady_pdf: P < 0 at s = " << grid.center[i]
         << "; positivity requires |F| <= " << fbound << " (got " << std::abs(F)
         << ")";
      throw std::invalid_argument(os.str());
    }
  }
  OneModePdf pdf = make_one_mode_pdf(std::move(grid), P, n, eta, gamma);
  for (int f = 0; f <= M; ++f)
    pdf.F[f] = pdf.grid.edges[f] <= s_cut ? F : 0.0;
  return pdf;
}

double tail_series(double s, double F, double gamma, double eta, int terms) {
  if (terms < 1 || terms > 2)
    throw std::invalid_argument("tail_series: terms must be 1 or 2");
  if (!(s > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("tail_series: s and gamma must be positive");
  double val = -F / (s * gamma);
  if (terms == 2) val += -eta * F / (gamma * s * gamma * s);
  return val;
}

double breaking_amplitude(double omega, double eps, double W, double k) {
  if (!(omega > 0.0) || !(eps > 0.0) || !(W > 0.0) || !(k > 0.0))
    throw std::invalid_argument("breaking_amplitude: inputs must be positive");
  return omega / (eps * W * k * k);
}

} // namespace wt
