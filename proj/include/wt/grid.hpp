#pragma once

#include "wt/types.hpp"

namespace wt {

// Cell-centered grid on [0, s_max] for intensity space.
struct SGrid {
  ArrayXd edges;  // size cells+1, edges[0] == 0
  ArrayXd center; // size cells
  ArrayXd width;  // size cells

  int cells() const { return static_cast<int>(center.size()); }
  double s_max() const { return edges[edges.size() - 1]; }
};

SGrid uniform_grid(double s_max, int cells);

// Cell widths grow geometrically by a total factor `growth` from the first
// to the last cell; resolves the core near s = 0 together with the tail.
SGrid geometric_grid(double s_max, int cells, double growth = 100.0);

SGrid grid_from_edges(ArrayXd edges);

} // namespace wt
