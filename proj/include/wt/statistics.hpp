#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wt/dynamics.hpp"
#include "wt/rng.hpp"

namespace wt {

// Amplitude law of an RPA field.  Phases are always i.i.d. uniform on the
// unit circle and independent of the amplitudes; the law only fixes the
// per-mode intensity distribution.
enum class AmplitudeLawKind { deterministic_level, rayleigh, tabulated };

struct AmplitudeLaw {
  AmplitudeLawKind kind = AmplitudeLawKind::rayleigh;
  ArrayXd level; // per-mode spectrum n_l = <A_l^2>

  // kind == tabulated: discrete intensity atoms, s = atom_s[i] * n_l with
  // probability atom_p[i].  atom_p must sum to 1 and sum(atom_s * atom_p)
  // should be 1 so that level stays the mean intensity.
  std::vector<double> atom_s;
  std::vector<double> atom_p;

  static AmplitudeLaw deterministic(ArrayXd level);
  static AmplitudeLaw rayleigh_law(ArrayXd level);
  static AmplitudeLaw tabulated_law(ArrayXd level, std::vector<double> s,
                                    std::vector<double> p);
};

ArrayXcd rpa_sample(const AmplitudeLaw& law, std::uint64_t seed,
                    std::uint64_t realization);
WaveField generate_rpa_field(const FourierLattice& lattice,
                             const AmplitudeLaw& law, std::uint64_t seed,
                             std::uint64_t realization);

using Ensemble = std::vector<ArrayXcd>;

struct EnsembleStats {
  int realizations = 0;
  ArrayXd n;          // waveaction spectrum, = M^(1)
  ArrayXXd M;         // moments M^(p), column p (column 0 is identically 1)
  ArrayXXd M_stderr;  // standard error of the mean per moment
  ArrayXd sigma;      // rms waveaction fluctuation sqrt(M^(2) - n^2)
};

EnsembleStats estimate_moments(const Ensemble& ensemble, int p_max);

struct OneModeHistogram {
  ArrayXd s_edges;   // bin edges, strictly increasing, size bins+1
  ArrayXd density;   // normalized so that sum(density * ds) = 1
  ArrayXd density_stderr;
  int samples = 0;
  int outside = 0; // samples falling outside the grid
  std::vector<std::string> warnings;
};

OneModeHistogram estimate_one_mode_pdf(const Ensemble& ensemble, int mode,
                                       const ArrayXd& s_edges);

struct PairPhaseStat {
  int l, m;
  Complex psi_psi;    // <psi_l psi_m>
  Complex psi_psibar; // <psi_l conj(psi_m)>
};

struct PhaseDiagnostics {
  int realizations = 0;
  double threshold = 0.0; // 3/sqrt(R)
  ArrayXcd psi_mean;
  ArrayXd rayleigh_p; // angle-uniformity p-value per mode
  std::vector<PairPhaseStat> pairs;
  int mean_violations = 0;       // modes with |<psi>| above threshold
  int pair_violations = 0;       // off-diagonal pair stats above threshold
  int uniformity_violations = 0; // modes with Rayleigh p <= 0.01
};

// Pair statistics use the full pair matrix for N <= 128 modes and a seeded
// random subsample of max_pairs pairs above that.
PhaseDiagnostics phase_diagnostics(const Ensemble& ensemble,
                                   std::uint64_t pair_seed = 1,
                                   int max_pairs = 10000);

// Q_k = <A^4> - 2 <A^2>^2, the diagonal correction to Wick splitting of the
// fourth-order correlator; zero for Gaussian fields.
struct SingularCumulant {
  ArrayXd Q;
  ArrayXd Q_stderr;
};
SingularCumulant singular_cumulant(const Ensemble& ensemble);

// Distance correlation between two scalar samples; O(R^2), intended for
// desk-scale independence checks.
double distance_correlation(const std::vector<double>& x,
                            const std::vector<double>& y);

} // namespace wt
