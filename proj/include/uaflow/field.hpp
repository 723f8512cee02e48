#pragma once

#include "uaflow/manifold.hpp"

namespace uaflow {

struct GridShape {
  int width = 0;
  int height = 0;
  int pixels() const { return width * height; }
  bool operator==(const GridShape&) const = default;
};

/// Per-pixel manifold-valued data; one packed point per row.
struct FeatureField {
  FeatureManifold manifold;
  GridShape grid;
  RowMat points;  // |I| x packed

  Index size() const { return points.rows(); }

  void validate() const {
    if (points.cols() != manifold.packed_size())
      throw InvalidArgument("feature field: packed width does not match the manifold");
    if (grid.pixels() != points.rows())
      throw InvalidArgument("feature field: grid does not match the point count");
    for (Index i = 0; i < points.rows(); ++i)
      manifold.validate_point(points.row(i), "feature " + std::to_string(i));
  }
};

/// Ordered set of labels (prototypes) on one feature manifold.
struct LabelDictionary {
  FeatureManifold manifold;
  RowMat labels;  // |J| x packed

  Index size() const { return labels.rows(); }

  void validate() const {
    if (labels.rows() < 1) throw InvalidArgument("label dictionary is empty");
    if (labels.cols() != manifold.packed_size())
      throw InvalidArgument("label dictionary: packed width does not match the manifold");
    for (Index j = 0; j < labels.rows(); ++j)
      manifold.validate_point(labels.row(j), "label " + std::to_string(j));
  }
};

}  // namespace uaflow
