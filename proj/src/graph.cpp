#include "uaflow/graph.hpp"

#include <cmath>

namespace uaflow {

NeighborhoodGraph NeighborhoodGraph::square_window(GridShape grid, int window) {
  if (window < 1 || window % 2 == 0)
    throw InvalidArgument("neighborhood window must be odd and >= 1");
  if (grid.pixels() < 1) throw InvalidArgument("empty grid");
  NeighborhoodGraph g;
  g.window_ = window;
  int r = window / 2;
  g.offsets_.reserve(grid.pixels() + 1);
  g.nbr_.reserve(static_cast<size_t>(grid.pixels()) * window * window);
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      int y0 = std::max(0, y - r), y1 = std::min(grid.height - 1, y + r);
      int x0 = std::max(0, x - r), x1 = std::min(grid.width - 1, x + r);
      int count = (y1 - y0 + 1) * (x1 - x0 + 1);
      double w = 1.0 / count;
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) {
          g.nbr_.push_back(yy * grid.width + xx);
          g.w_.push_back(w);
        }
      g.offsets_.push_back(static_cast<int>(g.nbr_.size()));
    }
  }
  return g;
}

void NeighborhoodGraph::validate() const {
  for (int i = 0; i < num_pixels(); ++i) {
    auto ns = neighbors(i);
    auto ws = weights(i);
    bool self = false;
    double s = 0.0, c = 0.0;
    for (size_t k = 0; k < ns.size(); ++k) {
      if (ns[k] == i) self = true;
      if (ws[k] <= 0.0) throw InvalidArgument("neighborhood weights must be positive");
      double y = ws[k] - c;
      double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    if (!self) throw InvalidArgument("pixel " + std::to_string(i) + " missing from its own neighborhood");
    if (std::abs(s - 1.0) > 1e-12)
      throw InvalidArgument("neighborhood weights of pixel " + std::to_string(i) + " do not sum to 1");
  }
}

}  // namespace uaflow
