#pragma once

#include "uaflow/field.hpp"

#include <array>
#include <vector>

namespace uaflow {

/// Multi-channel image with intensities in [0, 1], stored as planar
/// channels: data[c * w * h + y * w + x].
struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<double> data;

  static RawImage zero(int w, int h, int c) {
    return {w, h, c, std::vector<double>(static_cast<size_t>(w) * h * c, 0.0)};
  }
  double& at(int c, int x, int y) { return data[(static_cast<size_t>(c) * height + y) * width + x]; }
  double at(int c, int x, int y) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
  GridShape grid() const { return {width, height}; }
};

/// Derivative feature vectors f = (u, u_x, u_y, u_xx, sqrt2 u_xy, u_yy),
/// channel-wise: six derivative groups of `channels` entries each, so the
/// rotation subgroup of RotationBlocks applies. Central differences inside,
/// replicate padding at the border.
RowMat feature_map(const RawImage& u);

/// Covariance region descriptors over square windows (uniform weights),
/// regularized with eps * Id: an spd field with s = 6 * channels.
FeatureField covariance_field(const RawImage& u, int window, double eps);

struct OrientationField {
  FeatureField field;            // orientation manifold, theta in [0, pi)
  std::vector<uint8_t> flat;     // 1 where the gradient scatter matrix vanished
};

/// Orientation of local image structure: angle of the eigenvector belonging
/// to the smaller eigenvalue of the gradient scatter matrix over a square
/// window. Grayscale input only.
OrientationField orientation_field(const RawImage& u, int window);

/// Per-pixel noise on an SO(3) field: draws n ~ N(0, scale^2 I_3) from a
/// per-pixel stream and replaces R by R expm(hat(n)).
FeatureField so3_synthetic(const FeatureField& truth, double noise_scale, uint64_t seed);

struct ColorSynthetic {
  RawImage image;
  std::vector<int> truth;  // region id per pixel
};

/// Region-colored RGB image with i.i.d. Gaussian channel noise, clamped to
/// [0, 1]. regions holds one palette index per pixel.
ColorSynthetic color_synthetic(const std::vector<int>& regions, GridShape grid,
                               const std::vector<std::array<double, 3>>& palette,
                               double noise_sigma, uint64_t seed);

/// Image channels as a euclidean feature field in R^c.
FeatureField euclidean_field(const RawImage& u);

}  // namespace uaflow
