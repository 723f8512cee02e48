#pragma once

#include "uaflow/common.hpp"
#include "uaflow/field.hpp"

#include <span>
#include <vector>

namespace uaflow {

/// Per-pixel neighborhoods N_i (always containing i) with positive weights
/// summing to 1. Stored in CSR form.
class NeighborhoodGraph {
 public:
  /// Square n x n window centered at each pixel, n odd. Windows are
  /// truncated at the image border and the uniform weights renormalized so
  /// they keep unit sum.
  static NeighborhoodGraph square_window(GridShape grid, int window);

  int num_pixels() const { return static_cast<int>(offsets_.size()) - 1; }

  std::span<const int> neighbors(int i) const {
    return {nbr_.data() + offsets_[i], static_cast<size_t>(offsets_[i + 1] - offsets_[i])};
  }
  std::span<const double> weights(int i) const {
    return {w_.data() + offsets_[i], static_cast<size_t>(offsets_[i + 1] - offsets_[i])};
  }

  int window() const { return window_; }

  void validate() const;

 private:
  std::vector<int> offsets_{0};
  std::vector<int> nbr_;
  std::vector<double> w_;
  int window_ = 1;
};

}  // namespace uaflow
