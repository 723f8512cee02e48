#include "uaflow/features.hpp"

#include <algorithm>
#include <cmath>

namespace uaflow {

namespace {

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// replicate padding
inline double px(const RawImage& u, int c, int x, int y) {
  return u.at(c, clampi(x, 0, u.width - 1), clampi(y, 0, u.height - 1));
}

}  // namespace

RowMat feature_map(const RawImage& u) {
  if (u.channels < 1) throw InvalidArgument("feature_map: image needs at least one channel");
  const int c = u.channels;
  const int n = u.width * u.height;
  RowMat f(n, 6 * c);
  const double sqrt2 = std::sqrt(2.0);
  for (int y = 0; y < u.height; ++y) {
    for (int x = 0; x < u.width; ++x) {
      int i = y * u.width + x;
      for (int ch = 0; ch < c; ++ch) {
        double v = u.at(ch, x, y);
        double xm = px(u, ch, x - 1, y), xp = px(u, ch, x + 1, y);
        double ym = px(u, ch, x, y - 1), yp = px(u, ch, x, y + 1);
        double ux = (xp - xm) / 2.0;
        double uy = (yp - ym) / 2.0;
        double uxx = xp - 2.0 * v + xm;
        double uyy = yp - 2.0 * v + ym;
        double uxy = (px(u, ch, x + 1, y + 1) - px(u, ch, x + 1, y - 1) -
                      px(u, ch, x - 1, y + 1) + px(u, ch, x - 1, y - 1)) /
                     4.0;
        f(i, ch) = v;
        f(i, c + ch) = ux;
        f(i, 2 * c + ch) = uy;
        f(i, 3 * c + ch) = uxx;
        f(i, 4 * c + ch) = sqrt2 * uxy;
        f(i, 5 * c + ch) = uyy;
      }
    }
  }
  return f;
}

FeatureField covariance_field(const RawImage& u, int window, double eps) {
  if (window < 1 || window % 2 == 0) throw InvalidArgument("covariance window must be odd");
  if (eps <= 0.0) throw InvalidArgument("covariance eps must be positive");
  RowMat f = feature_map(u);
  const int s = static_cast<int>(f.cols());
  const int r = window / 2;
  FeatureField field;
  field.manifold = FeatureManifold::spd(s);
  field.grid = u.grid();
  field.points.resize(u.width * u.height, s * s);
  Mat cov(s, s);
  Vec mean(s);
  for (int y = 0; y < u.height; ++y) {
    for (int x = 0; x < u.width; ++x) {
      int y0 = std::max(0, y - r), y1 = std::min(u.height - 1, y + r);
      int x0 = std::max(0, x - r), x1 = std::min(u.width - 1, x + r);
      double w = 1.0 / ((y1 - y0 + 1) * (x1 - x0 + 1));
      mean.setZero();
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) mean += w * f.row(yy * u.width + xx);
      cov.setZero();
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) {
          Vec d = f.row(yy * u.width + xx).transpose() - mean;
          cov.noalias() += w * (d * d.transpose());
        }
      cov.diagonal().array() += eps;
      int i = y * u.width + x;
      for (int a = 0; a < s; ++a)
        for (int b = 0; b < s; ++b) field.points(i, a * s + b) = cov(a, b);
    }
  }
  return field;
}

OrientationField orientation_field(const RawImage& u, int window) {
  if (u.channels != 1) throw InvalidArgument("orientation_field expects a grayscale image");
  if (window < 1 || window % 2 == 0) throw InvalidArgument("orientation window must be odd");
  const int n = u.width * u.height;
  // gradient per pixel
  std::vector<double> gx(n), gy(n);
  for (int y = 0; y < u.height; ++y)
    for (int x = 0; x < u.width; ++x) {
      gx[y * u.width + x] = (px(u, 0, x + 1, y) - px(u, 0, x - 1, y)) / 2.0;
      gy[y * u.width + x] = (px(u, 0, x, y + 1) - px(u, 0, x, y - 1)) / 2.0;
    }
  OrientationField out;
  out.field.manifold = FeatureManifold::orientation();
  out.field.grid = u.grid();
  out.field.points.resize(n, 1);
  out.flat.assign(n, 0);
  const int r = window / 2;
  for (int y = 0; y < u.height; ++y) {
    for (int x = 0; x < u.width; ++x) {
      double a = 0.0, b = 0.0, c = 0.0;  // scatter [a b; b c]
      for (int yy = std::max(0, y - r); yy <= std::min(u.height - 1, y + r); ++yy)
        for (int xx = std::max(0, x - r); xx <= std::min(u.width - 1, x + r); ++xx) {
          double dx = gx[yy * u.width + xx], dy = gy[yy * u.width + xx];
          a += dx * dx;
          b += dx * dy;
          c += dy * dy;
        }
      int i = y * u.width + x;
      if (a + c <= 0.0) {
        out.field.points(i, 0) = 0.0;
        out.flat[i] = 1;
        continue;
      }
      // eigenvector of the smaller eigenvalue of [a b; b c]
      double half_diff = (a - c) / 2.0;
      double root = std::sqrt(half_diff * half_diff + b * b);
      double lo = (a + c) / 2.0 - root;
      double vx, vy;
      // pick the better conditioned expression
      if (std::abs(lo - a) >= std::abs(lo - c)) {
        vx = b;
        vy = lo - a;
      } else {
        vx = lo - c;
        vy = b;
      }
      if (vx == 0.0 && vy == 0.0) {  // isotropic scatter: any direction
        vx = 1.0;
        vy = 0.0;
      }
      out.field.points(i, 0) = s1_wrap(std::atan2(vy, vx));
    }
  }
  return out;
}

FeatureField so3_synthetic(const FeatureField& truth, double noise_scale, uint64_t seed) {
  if (truth.manifold.kind() != ManifoldKind::Rotation3)
    throw InvalidArgument("so3_synthetic expects an so3 field");
  if (noise_scale < 0.0) throw InvalidArgument("noise scale must be nonnegative");
  FeatureField out = truth;
  if (noise_scale == 0.0) return out;
  for (Index i = 0; i < truth.size(); ++i) {
    Rng rng = Rng::stream(seed, static_cast<uint64_t>(i));
    Eigen::Vector3d n(rng.gaussian(), rng.gaussian(), rng.gaussian());
    n *= noise_scale;
    Eigen::Matrix3d r;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) r(a, b) = truth.points(i, 3 * a + b);
    Eigen::Matrix3d rn = r * so3_expm(so3_hat(n));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) out.points(i, 3 * a + b) = rn(a, b);
  }
  return out;
}

ColorSynthetic color_synthetic(const std::vector<int>& regions, GridShape grid,
                               const std::vector<std::array<double, 3>>& palette,
                               double noise_sigma, uint64_t seed) {
  if (static_cast<int>(regions.size()) != grid.pixels())
    throw InvalidArgument("color_synthetic: region map size mismatch");
  ColorSynthetic out;
  out.image = RawImage::zero(grid.width, grid.height, 3);
  out.truth = regions;
  for (int i = 0; i < grid.pixels(); ++i) {
    int rg = regions[i];
    if (rg < 0 || rg >= static_cast<int>(palette.size()))
      throw InvalidArgument("color_synthetic: region id outside the palette");
    Rng rng = Rng::stream(seed, static_cast<uint64_t>(i));
    int x = i % grid.width, y = i / grid.width;
    for (int c = 0; c < 3; ++c) {
      double v = palette[rg][c] + noise_sigma * rng.gaussian();
      out.image.at(c, x, y) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

FeatureField euclidean_field(const RawImage& u) {
  FeatureField field;
  field.manifold = FeatureManifold::euclidean(u.channels);
  field.grid = u.grid();
  field.points.resize(u.width * u.height, u.channels);
  for (int y = 0; y < u.height; ++y)
    for (int x = 0; x < u.width; ++x)
      for (int c = 0; c < u.channels; ++c) field.points(y * u.width + x, c) = u.at(c, x, y);
  return field;
}

}  // namespace uaflow
