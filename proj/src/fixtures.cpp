#include "uaflow/fixtures.hpp"

#include "uaflow/manifold.hpp"

#include <cmath>

namespace uaflow {
namespace fixtures {

RawImage gradient_image(int width, int height) {
  RawImage img = RawImage::zero(width, height, 3);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double fx = (width > 1) ? static_cast<double>(x) / (width - 1) : 0.0;
      double fy = (height > 1) ? static_cast<double>(y) / (height - 1) : 0.0;
      img.at(0, x, y) = fx;
      img.at(1, x, y) = fy;
      img.at(2, x, y) = 1.0 - fx;
    }
  return img;
}

std::vector<int> quadrant_regions(GridShape grid, int regions) {
  if (regions < 2 || regions > 4) throw InvalidArgument("quadrant_regions supports 2..4 regions");
  std::vector<int> r(static_cast<size_t>(grid.pixels()));
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x) {
      int right = x >= grid.width / 2;
      int bottom = y >= grid.height / 2;
      int q = bottom * 2 + right;
      if (regions == 2) q = right;
      if (regions == 3 && q == 3) q = 2;
      r[static_cast<size_t>(y) * grid.width + x] = q;
    }
  return r;
}

std::vector<int> disk_bar_regions(GridShape grid) {
  std::vector<int> r(static_cast<size_t>(grid.pixels()), 0);
  double cx = grid.width * 0.38, cy = grid.height * 0.42;
  double rad = std::min(grid.width, grid.height) * 0.22;
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x) {
      size_t i = static_cast<size_t>(y) * grid.width + x;
      double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy <= rad * rad)
        r[i] = 1;
      else if (x >= grid.width * 3 / 4)
        r[i] = 2;
    }
  return r;
}

std::vector<std::array<double, 3>> default_palette(int regions) {
  // entries stay >= 2 sigma away from [0, 1] at the default noise 0.1, so
  // clamping does not bias the per-region means
  static const std::vector<std::array<double, 3>> base = {
      {0.80, 0.25, 0.25}, {0.22, 0.48, 0.80}, {0.75, 0.72, 0.25}, {0.25, 0.68, 0.32},
      {0.55, 0.28, 0.72}, {0.78, 0.55, 0.22},
  };
  if (regions < 1 || regions > static_cast<int>(base.size()))
    throw InvalidArgument("default_palette supports 1..6 regions");
  return {base.begin(), base.begin() + regions};
}

ColorSynthetic color_scene(const std::vector<int>& regions, GridShape grid, double noise_sigma,
                           uint64_t seed) {
  int count = 0;
  for (int r : regions) count = std::max(count, r + 1);
  return color_synthetic(regions, grid, default_palette(count), noise_sigma, seed);
}

LabelDictionary so3_truth_frames(int count) {
  if (count < 1 || count > 4) throw InvalidArgument("so3_truth_frames supports 1..4 frames");
  LabelDictionary d;
  d.manifold = FeatureManifold::rotation3();
  d.labels.resize(count, 9);
  // identity and the three half turns: pairwise rotation angles of pi, the
  // maximally separated 4-frame configuration
  const Eigen::Vector3d axes[3] = {
      Eigen::Vector3d(1, 0, 0),
      Eigen::Vector3d(0, 1, 0),
      Eigen::Vector3d(0, 0, 1),
  };
  for (int j = 0; j < count; ++j) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    if (j > 0) r = so3_expm(so3_hat(axes[j - 1] * M_PI));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) d.labels(j, 3 * a + b) = r(a, b);
  }
  return d;
}

FeatureField so3_truth(GridShape grid, const std::vector<int>& regions) {
  int count = 0;
  for (int r : regions) count = std::max(count, r + 1);
  LabelDictionary frames = so3_truth_frames(count);
  FeatureField f;
  f.manifold = FeatureManifold::rotation3();
  f.grid = grid;
  f.points.resize(grid.pixels(), 9);
  for (int i = 0; i < grid.pixels(); ++i) f.points.row(i) = frames.labels.row(regions[i]);
  return f;
}

RawImage rings_image(int width, int height) {
  RawImage img = RawImage::zero(width, height, 1);
  double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double r = std::hypot(x - cx, y - cy);
      img.at(0, x, y) = 0.5 + 0.5 * std::sin(2.0 * M_PI * r / 7.0);
    }
  return img;
}

RawImage rotated_texture_image(int tile, const std::vector<double>& angles) {
  std::vector<double> a = angles;
  if (a.empty()) a = {0.0, M_PI / 6.0, M_PI / 3.0, M_PI / 2.0};
  if (a.size() != 4) throw InvalidArgument("rotated_texture_image expects 4 tile angles");
  RawImage img = RawImage::zero(2 * tile, 2 * tile, 1);
  // stripe period long enough that the derivative stencils stay nearly
  // rotation-equivariant; tiles then really are rotated copies of each other
  const double period = 10.0;
  for (int y = 0; y < 2 * tile; ++y)
    for (int x = 0; x < 2 * tile; ++x) {
      int t = (y / tile) * 2 + (x / tile);
      double ct = std::cos(a[t]), st = std::sin(a[t]);
      double u = ct * (x % tile) + st * (y % tile);
      img.at(0, x, y) = 0.5 + 0.45 * std::sin(2.0 * M_PI * u / period);
    }
  return img;
}

}  // namespace fixtures
}  // namespace uaflow
