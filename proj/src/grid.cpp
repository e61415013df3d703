#include "wt/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace wt {

namespace {

SGrid finish(ArrayXd edges) {
  SGrid g;
  const int M = static_cast<int>(edges.size()) - 1;
  g.center = 0.5 * (edges.head(M) + edges.tail(M));
  g.width = edges.tail(M) - edges.head(M);
  g.edges = std::move(edges);
  return g;
}

} // namespace

SGrid uniform_grid(double s_max, int cells) {
  if (!(s_max > 0.0) || cells < 2)
    throw std::invalid_argument("uniform_grid: need s_max > 0 and cells >= 2");
  ArrayXd edges = ArrayXd::LinSpaced(cells + 1, 0.0, s_max);
  edges[0] = 0.0;
  edges[cells] = s_max;
  return finish(std::move(edges));
}

SGrid geometric_grid(double s_max, int cells, double growth) {
  if (!(s_max > 0.0) || cells < 2 || !(growth >= 1.0))
    throw std::invalid_argument("geometric_grid: bad parameters");
  const double q = std::pow(growth, 1.0 / (cells - 1));
  ArrayXd w(cells);
  double wi = 1.0;
  for (int i = 0; i < cells; ++i) {
    w[i] = wi;
    wi *= q;
  }
  w *= s_max / w.sum();
  ArrayXd edges(cells + 1);
  edges[0] = 0.0;
  for (int i = 0; i < cells; ++i) edges[i + 1] = edges[i] + w[i];
  edges[cells] = s_max;
  return finish(std::move(edges));
}

SGrid grid_from_edges(ArrayXd edges) {
  const int M = static_cast<int>(edges.size()) - 1;
  if (M < 1) throw std::invalid_argument("grid_from_edges: too few edges");
  if (edges[0] != 0.0)
    throw std::invalid_argument("grid_from_edges: first edge must be 0");
  for (int i = 0; i < M; ++i)
    if (!(edges[i + 1] > edges[i]))
      throw std::invalid_argument(
          "grid_from_edges: edges must be strictly increasing");
  return finish(std::move(edges));
}

} // namespace wt
