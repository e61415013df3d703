#pragma once

#include <functional>
#include <vector>

#include "wt/grid.hpp"
#include "wt/kinetics.hpp"

namespace wt {

// Desk-scale multi-mode amplitude PDF on a tensor grid: the discrete-N form
// of the joint continuity equation in intensity space, whose one-mode
// marginals reproduce the s-space flux of the onemode module for product
// densities.

struct MultiModePdf {
  std::vector<int> modes;  // participating global mode ids
  std::vector<SGrid> grids; // one grid per participating mode (slot)
  ArrayXd P;                // cell-centered joint density, row-major, slot 0 slowest

  int slots() const { return static_cast<int>(modes.size()); }
  long cell_count() const;
  long stride(int slot) const; // flat-index stride of slot
  int slot_of_mode(int mode) const; // -1 when absent
};

// init is evaluated at the per-slot cell centers.
MultiModePdf make_multimode_pdf(
    std::vector<int> modes, std::vector<SGrid> grids,
    const std::function<double(const std::vector<double>&)>& init);

double total_probability(const MultiModePdf& pdf);
void normalize(MultiModePdf& pdf);

// One-mode marginal density on the slot's grid, and its mean intensity.
ArrayXd marginal_density(const MultiModePdf& pdf, int slot);
double marginal_mean(const MultiModePdf& pdf, int slot);

// Face-centered probability flux: F[d] lives on the faces in direction d
// (one extra entry along that slot).  Boundary faces carry zero flux: the
// s = 0 face vanishes with the s_j prefactor and the outer face closes the
// truncated domain.
struct FluxField {
  std::vector<ArrayXd> F;
  // Gershgorin bound on a stable explicit step for the operator that
  // produced this flux (filled by the flux builders).
  double stable_dt = 0.0;
};

// Optional per-slot source/sink rates shift the flux by -gamma_tilde_j s_j P.
FluxField pbp_flux_3w(const MultiModePdf& pdf, const WaveSystem& sys,
                      const TriadSet& triads, const DeltaKernel& kernel,
                      const ArrayXd* gamma_tilde = nullptr);
FluxField pbp_flux_4w(const MultiModePdf& pdf, const WaveSystem& sys,
                      const QuartetSet& quartets, const DeltaKernel& kernel,
                      const ArrayXd* gamma_tilde = nullptr);

// dP/dt = -sum_d dF_d/ds_d by conservative differencing.
ArrayXd pbp_divergence(const FluxField& flux, const MultiModePdf& pdf);

// Max |dP/dt| over cells whose full stencil stays away from the outer
// boundary; the metric used by steady-state and refinement diagnostics.
double interior_divergence_max(const ArrayXd& dPdt, const MultiModePdf& pdf);

struct EvolveOptions {
  double dt = 0.0;
  int steps = 0;
  const ArrayXd* gamma_tilde = nullptr;
};

void evolve_pbp(MultiModePdf& pdf, const WaveSystem& sys,
                const TriadSet& triads, const DeltaKernel& kernel,
                const EvolveOptions& opts);
void evolve_pbp(MultiModePdf& pdf, const WaveSystem& sys,
                const QuartetSet& quartets, const DeltaKernel& kernel,
                const EvolveOptions& opts);

// Projection of the flux onto the (s_{slot1}, s_{slot2}) plane: the two flux
// components integrated over all other coordinates, interpolated to cell
// centers (quiver-ready).
struct VortexProjection {
  ArrayXd s1, s2;
  ArrayXXd F1, F2; // indexed (slot1 cell, slot2 cell)
};
VortexProjection vortex_projection(const FluxField& flux,
                                   const MultiModePdf& pdf, int slot1,
                                   int slot2);

} // namespace wt
