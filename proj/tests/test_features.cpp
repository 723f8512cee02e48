#include "uaflow/features.hpp"

#include "uaflow/fixtures.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace uaflow;
using namespace testutil;

namespace {

RawImage rotate90(const RawImage& u) {
  // (x, y) -> (y, w-1-x): exact grid rotation
  RawImage r = RawImage::zero(u.height, u.width, u.channels);
  for (int c = 0; c < u.channels; ++c)
    for (int y = 0; y < u.height; ++y)
      for (int x = 0; x < u.width; ++x) r.at(c, u.height - 1 - y, x) = u.at(c, x, y);
  return r;
}

}  // namespace

TEST_CASE("feature map derivatives") {
  // constant image: value channel only
  RawImage flat = RawImage::zero(8, 8, 1);
  for (double& v : flat.data) v = 0.7;
  RowMat f = feature_map(flat);
  for (int i = 0; i < 64; ++i) {
    CHECK(f(i, 0) == 0.7);
    CHECK(f.row(i).tail(5).cwiseAbs().maxCoeff() == 0.0);
  }

  // linear ramp: unit x-derivative in the interior, no second derivatives
  RawImage ramp = RawImage::zero(8, 8, 1);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) ramp.at(0, x, y) = x / 255.0;
  f = feature_map(ramp);
  for (int y = 1; y < 7; ++y)
    for (int x = 1; x < 7; ++x) {
      int i = y * 8 + x;
      CHECK(f(i, 1) == doctest::Approx(1.0 / 255.0).epsilon(1e-12));
      CHECK(std::abs(f(i, 2)) <= 1e-18);
      CHECK(std::abs(f(i, 3)) <= 1e-18);
      CHECK(std::abs(f(i, 4)) <= 1e-18);
      CHECK(std::abs(f(i, 5)) <= 1e-18);
    }

  // bilinear ramp u = xy: unit mixed derivative, sqrt2 entry
  RawImage bil = RawImage::zero(8, 8, 1);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) bil.at(0, x, y) = x * y / 255.0;
  f = feature_map(bil);
  for (int y = 1; y < 7; ++y)
    for (int x = 1; x < 7; ++x)
      CHECK(f(y * 8 + x, 4) == doctest::Approx(std::sqrt(2.0) / 255.0).epsilon(1e-12));
}

TEST_CASE("covariance descriptors") {
  // constant image: eps * Id everywhere
  RawImage flat = RawImage::zero(6, 6, 1);
  for (double& v : flat.data) v = 0.3;
  FeatureField field = covariance_field(flat, 3, 1e-5);
  CHECK(field.manifold.kind() == ManifoldKind::Spd);
  CHECK(field.manifold.dim() == 6);
  for (Index i = 0; i < field.size(); ++i) {
    Mat c = unpack_matrix(field.points.row(i), 6);
    CHECK((c - 1e-5 * Mat::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
  }

  // checkerboard, spot-checked against a direct summation oracle
  RawImage board = RawImage::zero(12, 12, 1);
  for (int y = 0; y < 12; ++y)
    for (int x = 0; x < 12; ++x) board.at(0, x, y) = ((x + y) % 2) ? 1.0 : 0.0;
  field = covariance_field(board, 5, 1e-5);
  RowMat f = feature_map(board);
  auto gen = make_gen(89);
  std::uniform_int_distribution<int> pick(3, 8);
  for (int trial = 0; trial < 5; ++trial) {
    int x = pick(gen), y = pick(gen);
    int i = y * 12 + x;
    Mat c = unpack_matrix(field.points.row(i), 6);
    CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    Vec mean = Vec::Zero(6);
    int cnt = 0;
    for (int yy = y - 2; yy <= y + 2; ++yy)
      for (int xx = x - 2; xx <= x + 2; ++xx) {
        mean += f.row(yy * 12 + xx);
        ++cnt;
      }
    mean /= cnt;
    Mat oracle = Mat::Zero(6, 6);
    for (int yy = y - 2; yy <= y + 2; ++yy)
      for (int xx = x - 2; xx <= x + 2; ++xx) {
        Vec d = f.row(yy * 12 + xx).transpose() - mean;
        oracle += (d * d.transpose()) / cnt;
      }
    oracle.diagonal().array() += 1e-5;
    CHECK((c - oracle).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(field.manifold.is_valid_point(field.points.row(i)));
  }
}

TEST_CASE("covariance descriptors transform by the rotation subgroup under 90-degree rotation") {
  RawImage tex = fixtures::rotated_texture_image();
  RawImage rot = rotate90(tex);
  FeatureField a = covariance_field(tex, 5, 1e-5);
  FeatureField b = covariance_field(rot, 5, 1e-5);
  RotationBlocks blocks{1};
  int w = tex.width, h = tex.height;
  int checked = 0;
  for (int y = 8; y < h - 8; y += 7) {
    for (int x = 8; x < w - 8; x += 7) {
      // pixel (x, y) maps to (h-1-y, x) in the rotated image
      Mat cx = unpack_matrix(a.points.row(y * w + x), 6);
      Mat cy = unpack_matrix(b.points.row(x * h + (h - 1 - y)), 6);
      double ds = stein_divergence(cx, cy);
      auto inv = stein_rotation_invariant(cx, cy, blocks);
      CHECK(inv.value <= ds + 1e-12);
      CHECK(inv.value <= 1e-3);
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("orientation field") {
  // vertical stripes: intensity varies along x, structure is vertical
  RawImage stripes = RawImage::zero(16, 16, 1);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) stripes.at(0, x, y) = 0.5 + 0.5 * std::sin(x * 1.1);
  OrientationField of = orientation_field(stripes, 5);
  for (int y = 4; y < 12; ++y)
    for (int x = 4; x < 12; ++x)
      CHECK(std::abs(s1_diff(of.field.points(y * 16 + x, 0), M_PI / 2.0)) <= 1e-10);

  // horizontal stripes
  RawImage hstripes = RawImage::zero(16, 16, 1);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) hstripes.at(0, x, y) = 0.5 + 0.5 * std::sin(y * 1.1);
  of = orientation_field(hstripes, 5);
  for (int y = 4; y < 12; ++y)
    for (int x = 4; x < 12; ++x)
      CHECK(std::abs(s1_diff(of.field.points(y * 16 + x, 0), 0.0)) <= 1e-10);

  // flat image: flagged, angle 0
  RawImage flat = RawImage::zero(8, 8, 1);
  of = orientation_field(flat, 3);
  CHECK(of.flat[0] == 1);
  CHECK(of.field.points(0, 0) == 0.0);

  // rotating the image rotates the angles by pi/2 (mod pi)
  RawImage rings = fixtures::rings_image(32, 32);
  OrientationField orig = orientation_field(rings, 5);
  OrientationField rotd = orientation_field(rotate90(rings), 5);
  double worst = 0.0;
  for (int y = 6; y < 26; ++y)
    for (int x = 6; x < 26; ++x) {
      double t0 = orig.field.points(y * 32 + x, 0);
      double t1 = rotd.field.points(x * 32 + (31 - y), 0);
      worst = std::max(worst, std::abs(s1_diff(t1, t0 + M_PI / 2.0)));
    }
  CHECK(worst <= 0.05);
}

TEST_CASE("so3 synthetic noise") {
  GridShape grid{100, 100};  // 10^4 samples for the Monte-Carlo comparison
  auto regions = fixtures::quadrant_regions(grid, 4);
  FeatureField truth = fixtures::so3_truth(grid, regions);
  truth.validate();

  // zero noise: bitwise copy
  FeatureField same = so3_synthetic(truth, 0.0, 5);
  CHECK((same.points - truth.points).cwiseAbs().maxCoeff() == 0.0);

  FeatureField noisy = so3_synthetic(truth, std::sqrt(0.5), 5);
  noisy.validate();  // orthogonality within tolerance

  // mean distance to the truth matches a direct sampling oracle within 2%
  double mean_d = 0.0;
  for (Index i = 0; i < noisy.size(); ++i)
    mean_d += truth.manifold.distance(truth.points.row(i), noisy.points.row(i));
  mean_d /= static_cast<double>(noisy.size());
  auto gen = make_gen(97);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  double oracle = 0.0;
  const int samples = 100000;
  for (int t = 0; t < samples; ++t) {
    Eigen::Vector3d n(g(gen), g(gen), g(gen));
    oracle += std::sqrt(2.0) * n.norm();  // d(R, R expm(hat n)) = sqrt2 |n|
  }
  oracle /= samples;
  CHECK(std::abs(mean_d - oracle) / oracle <= 0.02);
}

TEST_CASE("color synthetic") {
  GridShape grid{64, 64};
  auto regions = fixtures::quadrant_regions(grid, 3);
  auto palette = fixtures::default_palette(3);

  ColorSynthetic clean = color_synthetic(regions, grid, palette, 0.0, 1);
  for (int i = 0; i < grid.pixels(); ++i)
    for (int c = 0; c < 3; ++c)
      CHECK(clean.image.at(c, i % 64, i / 64) == palette[regions[i]][c]);

  ColorSynthetic noisy = color_synthetic(regions, grid, palette, 0.1, 1);
  for (double v : noisy.image.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  // per-region channel means near the palette (law of large numbers)
  for (int r = 0; r < 3; ++r) {
    double mean[3] = {0, 0, 0};
    int count = 0;
    for (int i = 0; i < grid.pixels(); ++i) {
      if (regions[i] != r) continue;
      ++count;
      for (int c = 0; c < 3; ++c) mean[c] += noisy.image.at(c, i % 64, i / 64);
    }
    for (int c = 0; c < 3; ++c) CHECK(std::abs(mean[c] / count - palette[r][c]) <= 0.02);
  }

  // deterministic in the seed
  ColorSynthetic again = color_synthetic(regions, grid, palette, 0.1, 1);
  CHECK(again.image.data == noisy.image.data);
}
