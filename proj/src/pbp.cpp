#include "wt/pbp.hpp"

#include <cmath>
#include <stdexcept>

namespace wt {

namespace {

constexpr long cell_budget = 40'000'000;

std::vector<int> dims_of(const MultiModePdf& pdf) {
  std::vector<int> d(pdf.slots());
  for (int i = 0; i < pdf.slots(); ++i) d[i] = pdf.grids[i].cells();
  return d;
}

long product(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

long stride_of(const std::vector<int>& dims, int slot) {
  long s = 1;
  for (std::size_t i = slot + 1; i < dims.size(); ++i) s *= dims[i];
  return s;
}

// Row-major multi-index walker.
struct Walker {
  std::vector<int> dims;
  std::vector<int> idx;
  explicit Walker(std::vector<int> d) : dims(std::move(d)), idx(dims.size(), 0) {}
  bool next() {
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      if (++idx[i] < dims[i]) return true;
      idx[i] = 0;
    }
    return false;
  }
};

// Cell-centered dP/ds along one slot, second order with one-sided edges.
ArrayXd centered_derivative(const MultiModePdf& pdf, int slot) {
  const auto dims = dims_of(pdf);
  const long str = stride_of(dims, slot);
  const int M = dims[slot];
  const double h = pdf.grids[slot].width[0];
  ArrayXd D(pdf.P.size());
  Walker w(dims);
  long flat = 0;
  do {
    const int i = w.idx[slot];
    if (i == 0)
      D[flat] = (-3.0 * pdf.P[flat] + 4.0 * pdf.P[flat + str] -
                 pdf.P[flat + 2 * str]) /
                (2.0 * h);
    else if (i == M - 1)
      D[flat] = (3.0 * pdf.P[flat] - 4.0 * pdf.P[flat - str] +
                 pdf.P[flat - 2 * str]) /
                (2.0 * h);
    else
      D[flat] = (pdf.P[flat + str] - pdf.P[flat - str]) / (2.0 * h);
    ++flat;
  } while (w.next());
  return D;
}

} // namespace

long MultiModePdf::cell_count() const { return product(dims_of(*this)); }

long MultiModePdf::stride(int slot) const {
  return stride_of(dims_of(*this), slot);
}

int MultiModePdf::slot_of_mode(int mode) const {
  for (int i = 0; i < slots(); ++i)
    if (modes[i] == mode) return i;
  return -1;
}

MultiModePdf make_multimode_pdf(
    std::vector<int> modes, std::vector<SGrid> grids,
    const std::function<double(const std::vector<double>&)>& init) {
  if (modes.empty() || modes.size() > 6)
    throw std::invalid_argument("make_multimode_pdf: need 1..6 modes");
  if (grids.size() != modes.size())
    throw std::invalid_argument("make_multimode_pdf: one grid per mode");
  for (const SGrid& g : grids)
    if (g.cells() < 3)
      throw std::invalid_argument(
          "make_multimode_pdf: need at least 3 cells per mode");
  for (const SGrid& g : grids) {
    const double w0 = g.width[0];
    if (((g.width - w0).abs() > 1e-12 * w0).any())
      throw std::invalid_argument(
          "make_multimode_pdf: tensor grids must be uniform per mode");
  }
  MultiModePdf pdf;
  pdf.modes = std::move(modes);
  pdf.grids = std::move(grids);
  const auto dims = dims_of(pdf);
  const long cells = product(dims);
  if (cells > cell_budget)
    throw std::invalid_argument("make_multimode_pdf: tensor grid exceeds the "
                                "memory budget");
  pdf.P.resize(cells);
  Walker w(dims);
  std::vector<double> s(pdf.slots());
  long flat = 0;
  do {
    for (int d = 0; d < pdf.slots(); ++d) s[d] = pdf.grids[d].center[w.idx[d]];
    pdf.P[flat] = init(s);
    ++flat;
  } while (w.next());
  return pdf;
}

double total_probability(const MultiModePdf& pdf) {
  const auto dims = dims_of(pdf);
  Walker w(dims);
  double total = 0.0;
  long flat = 0;
  do {
    double vol = 1.0;
    for (int d = 0; d < pdf.slots(); ++d) vol *= pdf.grids[d].width[w.idx[d]];
    total += pdf.P[flat] * vol;
    ++flat;
  } while (w.next());
  return total;
}

void normalize(MultiModePdf& pdf) {
  const double z = total_probability(pdf);
  if (!(z > 0.0))
    throw std::invalid_argument("normalize: total probability is not positive");
  pdf.P /= z;
}

ArrayXd marginal_density(const MultiModePdf& pdf, int slot) {
  const auto dims = dims_of(pdf);
  ArrayXd m = ArrayXd::Zero(dims[slot]);
  Walker w(dims);
  long flat = 0;
  do {
    double vol = 1.0;
    for (int d = 0; d < pdf.slots(); ++d)
      if (d != slot) vol *= pdf.grids[d].width[w.idx[d]];
    m[w.idx[slot]] += pdf.P[flat] * vol;
    ++flat;
  } while (w.next());
  return m;
}

double marginal_mean(const MultiModePdf& pdf, int slot) {
  const ArrayXd m = marginal_density(pdf, slot);
  return (m * pdf.grids[slot].center * pdf.grids[slot].width).sum();
}

namespace {

// Per-direction contribution descriptors.  A triad (J; M, N) acts on the
// flux component of J's slot (the decaying-mode reading) and on the flux
// component of M's slot (the same tuple read with M as the output mode).
struct TriadAsSum {
  int slot_m, slot_n;
  double w;
};
struct TriadAsLeg {
  int slot_j, slot_n;
  double w;
};

struct QuartetContribution {
  int slot_l, slot_m, slot_n;            // leg slots (s product)
  std::vector<std::pair<int, double>> bracket; // (slot, +/-1) derivative bracket
  double w;
};

struct FluxBuild {
  FluxField flux;
  double max_row_sum = 0.0; // Gershgorin accumulator
};

template <typename PerFace>
void for_each_direction_face(const MultiModePdf& pdf, int d, PerFace&& body) {
  auto dims = dims_of(pdf);
  const auto cell_dims = dims;
  dims[d] += 1; // face tensor shape
  Walker w(dims);
  long face_flat = 0;
  do {
    body(face_flat, w.idx, cell_dims);
    ++face_flat;
  } while (w.next());
}

long flat_cell(const std::vector<int>& idx, const std::vector<int>& dims) {
  long f = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) f = f * dims[i] + idx[i];
  return f;
}

} // namespace

static FluxField build_flux(
    const MultiModePdf& pdf, double epsilon,
    const std::vector<std::vector<TriadAsSum>>& as_sum,
    const std::vector<std::vector<TriadAsLeg>>& as_leg,
    const std::vector<std::vector<QuartetContribution>>& quartic,
    const ArrayXd* gamma_tilde) {
  const int S = pdf.slots();
  const auto dims = dims_of(pdf);
  std::vector<ArrayXd> D(S);
  for (int d = 0; d < S; ++d) D[d] = centered_derivative(pdf, d);

  FluxField out;
  out.F.resize(S);
  const double pre = 4.0 * pi * epsilon * epsilon;
  ArrayXd row_sum = ArrayXd::Zero(pdf.P.size());

  for (int d = 0; d < S; ++d) {
    auto fdims = dims;
    fdims[d] += 1;
    out.F[d] = ArrayXd::Zero(product(fdims));
    const double h = pdf.grids[d].width[0];

    for_each_direction_face(
        pdf, d, [&](long face_flat, const std::vector<int>& idx,
                    const std::vector<int>& cell_dims) {
          const int fd = idx[d];
          if (fd == 0 || fd == cell_dims[d]) return; // closed boundaries
          std::vector<int> ci = idx;
          ci[d] = fd;
          const long R = flat_cell(ci, cell_dims);
          ci[d] = fd - 1;
          const long L = flat_cell(ci, cell_dims);
          const double s_face = pdf.grids[d].edges[fd];

          const double Pf = 0.5 * (pdf.P[L] + pdf.P[R]);
          const double dPd = (pdf.P[R] - pdf.P[L]) / h;
          auto s_at = [&](int slot) {
            return pdf.grids[slot].center[idx[slot]];
          };
          auto deriv_at = [&](int slot) {
            return slot == d ? dPd : 0.5 * (D[slot][L] + D[slot][R]);
          };

          double bracket = 0.0;
          double abs_coeff = 0.0; // sum |dF/dP| for the stability bound
          for (const TriadAsSum& t : as_sum[d]) {
            const double sm = s_at(t.slot_m), sn = s_at(t.slot_n);
            bracket += t.w * (sm * sn * dPd - 2.0 * Pf * sm -
                              4.0 * sm * sn * deriv_at(t.slot_m));
            abs_coeff +=
                std::abs(t.w) *
                (sm * sn * 2.0 / h + 2.0 +
                 4.0 * sm * sn * 2.5 / pdf.grids[t.slot_m].width[0]);
          }
          for (const TriadAsLeg& t : as_leg[d]) {
            const double sj = s_at(t.slot_j), sn = s_at(t.slot_n);
            bracket += t.w * (2.0 * sj * sn * dPd + 2.0 * Pf * sn +
                              2.0 * sj * sn * deriv_at(t.slot_n));
            abs_coeff +=
                std::abs(t.w) *
                (2.0 * sj * sn * 2.0 / h + 2.0 +
                 2.0 * sj * sn * 2.5 / pdf.grids[t.slot_n].width[0]);
          }
          for (const QuartetContribution& q : quartic[d]) {
            const double sprod = s_at(q.slot_l) * s_at(q.slot_m) * s_at(q.slot_n);
            double der = 0.0, der_abs = 0.0;
            for (const auto& [slot, sign] : q.bracket) {
              der += sign * deriv_at(slot);
              der_abs += (slot == d ? 2.0 / h : 2.5 / pdf.grids[slot].width[0]);
            }
            bracket += q.w * sprod * der;
            abs_coeff += std::abs(q.w) * sprod * der_abs;
          }

          double F = -pre * s_face * bracket;
          double abs_F = pre * s_face * abs_coeff;
          if (gamma_tilde) {
            F += -(*gamma_tilde)[d] * s_face * Pf;
            abs_F += std::abs((*gamma_tilde)[d]) * s_face;
          }
          out.F[d][face_flat] = F;
          row_sum[L] += abs_F / pdf.grids[d].width[0];
          row_sum[R] += abs_F / pdf.grids[d].width[0];
        });
  }
  const double m = row_sum.maxCoeff();
  out.stable_dt = m > 0.0 ? 1.0 / m : std::numeric_limits<double>::infinity();
  return out;
}

FluxField pbp_flux_3w(const MultiModePdf& pdf, const WaveSystem& sys,
                      const TriadSet& triads, const DeltaKernel& kernel,
                      const ArrayXd* gamma_tilde) {
  if (sys.order != InteractionOrder::three_wave)
    throw std::invalid_argument("pbp_flux_3w: system is not three-wave");
  const int S = pdf.slots();
  std::vector<std::vector<TriadAsSum>> as_sum(S);
  std::vector<std::vector<TriadAsLeg>> as_leg(S);
  std::vector<std::vector<QuartetContribution>> quartic(S);
  for (const TriadTerm& e : triads.terms) {
    const int sj = pdf.slot_of_mode(e.j);
    const int sm = pdf.slot_of_mode(e.m);
    const int sn = pdf.slot_of_mode(e.n);
    if (sj < 0 || sm < 0 || sn < 0)
      throw std::invalid_argument(
          "pbp_flux_3w: resonance set references a mode outside the PDF");
    const double w = std::norm(e.V) * kernel(e.detuning);
    if (w == 0.0) continue;
    as_sum[sj].push_back({sm, sn, w});
    as_leg[sm].push_back({sj, sn, w});
  }
  if (gamma_tilde && gamma_tilde->size() != S)
    throw std::invalid_argument("pbp_flux_3w: gamma_tilde size mismatch");
  return build_flux(pdf, sys.epsilon, as_sum, as_leg, quartic, gamma_tilde);
}

FluxField pbp_flux_4w(const MultiModePdf& pdf, const WaveSystem& sys,
                      const QuartetSet& quartets, const DeltaKernel& kernel,
                      const ArrayXd* gamma_tilde) {
  if (sys.order != InteractionOrder::four_wave)
    throw std::invalid_argument("pbp_flux_4w: system is not four-wave");
  const int S = pdf.slots();
  std::vector<std::vector<TriadAsSum>> as_sum(S);
  std::vector<std::vector<TriadAsLeg>> as_leg(S);
  std::vector<std::vector<QuartetContribution>> quartic(S);
  for (const QuartetTerm& e : quartets.terms) {
    const int sj = pdf.slot_of_mode(e.j);
    const int sl = pdf.slot_of_mode(e.l);
    const int sm = pdf.slot_of_mode(e.m);
    const int sn = pdf.slot_of_mode(e.n);
    if (sj < 0 || sl < 0 || sm < 0 || sn < 0)
      throw std::invalid_argument(
          "pbp_flux_4w: resonance set references a mode outside the PDF");
    const double w = std::norm(e.W) * kernel(e.detuning);
    if (w == 0.0) continue;
    // derivative bracket d_j + d_l - d_m - d_n collapsed per slot
    std::vector<double> coeff(S, 0.0);
    coeff[sj] += 1.0;
    coeff[sl] += 1.0;
    coeff[sm] -= 1.0;
    coeff[sn] -= 1.0;
    QuartetContribution q;
    q.slot_l = sl;
    q.slot_m = sm;
    q.slot_n = sn;
    q.w = w;
    for (int s = 0; s < S; ++s)
      if (coeff[s] != 0.0) q.bracket.push_back({s, coeff[s]});
    if (q.bracket.empty()) continue; // trivial pairings carry no flux
    quartic[sj].push_back(std::move(q));
  }
  if (gamma_tilde && gamma_tilde->size() != S)
    throw std::invalid_argument("pbp_flux_4w: gamma_tilde size mismatch");
  return build_flux(pdf, sys.epsilon, as_sum, as_leg, quartic, gamma_tilde);
}

ArrayXd pbp_divergence(const FluxField& flux, const MultiModePdf& pdf) {
  const int S = pdf.slots();
  if (static_cast<int>(flux.F.size()) != S)
    throw std::invalid_argument("pbp_divergence: flux/grid mismatch");
  const auto dims = dims_of(pdf);
  ArrayXd dPdt = ArrayXd::Zero(pdf.P.size());
  for (int d = 0; d < S; ++d) {
    auto fdims = dims;
    fdims[d] += 1;
    if (flux.F[d].size() != product(fdims))
      throw std::invalid_argument("pbp_divergence: flux tensor shape mismatch");
    const long fstr = stride_of(fdims, d);
    Walker w(dims);
    long flat = 0;
    do {
      // face tensor flat index of the cell's left face
      long left = 0;
      for (int i = 0; i < S; ++i) left = left * fdims[i] + w.idx[i];
      dPdt[flat] -= (flux.F[d][left + fstr] - flux.F[d][left]) /
                    pdf.grids[d].width[w.idx[d]];
      ++flat;
    } while (w.next());
  }
  return dPdt;
}

double interior_divergence_max(const ArrayXd& dPdt, const MultiModePdf& pdf) {
  const auto dims = dims_of(pdf);
  Walker w(dims);
  long flat = 0;
  double m = 0.0;
  do {
    bool interior = true;
    for (int d = 0; d < pdf.slots(); ++d)
      if (w.idx[d] >= dims[d] - 1) interior = false;
    if (interior) m = std::max(m, std::abs(dPdt[flat]));
    ++flat;
  } while (w.next());
  return m;
}

namespace {

template <typename FluxFn>
void evolve_impl(MultiModePdf& pdf, const EvolveOptions& opts, FluxFn&& fluxer) {
  if (!(opts.dt > 0.0) || opts.steps < 0)
    throw std::invalid_argument("evolve_pbp: bad dt or steps");
  for (int s = 0; s < opts.steps; ++s) {
    const FluxField flux = fluxer(pdf);
    if (opts.dt > flux.stable_dt * (1.0 + 1e-12))
      throw std::invalid_argument("evolve_pbp: dt violates the stability bound " +
                                  std::to_string(flux.stable_dt));
    pdf.P += opts.dt * pbp_divergence(flux, pdf);
    const double floor = -1e-6 * pdf.P.maxCoeff();
    if ((pdf.P < floor).any())
      throw std::runtime_error("evolve_pbp: density went negative beyond "
                               "tolerance");
    pdf.P = pdf.P.max(0.0);
  }
}

} // namespace

void evolve_pbp(MultiModePdf& pdf, const WaveSystem& sys,
                const TriadSet& triads, const DeltaKernel& kernel,
                const EvolveOptions& opts) {
  evolve_impl(pdf, opts, [&](const MultiModePdf& p) {
    return pbp_flux_3w(p, sys, triads, kernel, opts.gamma_tilde);
  });
}

void evolve_pbp(MultiModePdf& pdf, const WaveSystem& sys,
                const QuartetSet& quartets, const DeltaKernel& kernel,
                const EvolveOptions& opts) {
  evolve_impl(pdf, opts, [&](const MultiModePdf& p) {
    return pbp_flux_4w(p, sys, quartets, kernel, opts.gamma_tilde);
  });
}

VortexProjection vortex_projection(const FluxField& flux,
                                   const MultiModePdf& pdf, int slot1,
                                   int slot2) {
  const int S = pdf.slots();
  if (slot1 == slot2)
    throw std::invalid_argument("vortex_projection: slots must differ");
  if (slot1 < 0 || slot2 < 0 || slot1 >= S || slot2 >= S)
    throw std::invalid_argument("vortex_projection: slot out of range");
  const auto dims = dims_of(pdf);
  const int M1 = dims[slot1], M2 = dims[slot2];

  auto project = [&](int dir, int other) {
    // integrate F[dir] over every coordinate except dir (faces) and other
    auto fdims = dims;
    fdims[dir] += 1;
    ArrayXXd acc = ArrayXXd::Zero(fdims[dir], dims[other]);
    Walker w(fdims);
    long flat = 0;
    do {
      double vol = 1.0;
      for (int d = 0; d < S; ++d)
        if (d != dir && d != other) vol *= pdf.grids[d].width[w.idx[d]];
      acc(w.idx[dir], w.idx[other]) += flux.F[dir][flat] * vol;
      ++flat;
    } while (w.next());
    return acc;
  };

  const ArrayXXd f1_faces = project(slot1, slot2); // (M1+1) x M2
  const ArrayXXd f2_faces = project(slot2, slot1); // (M2+1) x M1

  VortexProjection vp;
  vp.s1 = pdf.grids[slot1].center;
  vp.s2 = pdf.grids[slot2].center;
  vp.F1 = 0.5 * (f1_faces.topRows(M1) + f1_faces.bottomRows(M1));
  ArrayXXd f2c = 0.5 * (f2_faces.topRows(M2) + f2_faces.bottomRows(M2));
  vp.F2 = f2c.transpose();
  return vp;
}

} // namespace wt
