#pragma once

// Shared test utilities: independent oracles and random instance
// generators. Everything here stays independent of the library paths it is
// used to check.

#include "uaflow/clustering.hpp"
#include "uaflow/divergence.hpp"
#include "uaflow/manifold.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testutil {

using namespace uaflow;

inline std::mt19937_64 make_gen(uint64_t seed) { return std::mt19937_64(seed); }

inline Vec random_prob_vector(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vec p(n);
  for (int i = 0; i < n; ++i) p[i] = u(gen);
  return p / p.sum();
}

/// Dyadic probability vector (entries k/2^m, exact sum 1.0) for bitwise
/// identity checks.
inline Vec random_dyadic_prob_vector(std::mt19937_64& gen, int n) {
  const int denom_bits = 20;
  const int64_t denom = int64_t(1) << denom_bits;
  std::uniform_int_distribution<int64_t> u(1, denom / n);
  std::vector<int64_t> parts(n);
  int64_t total = 0;
  for (int i = 0; i + 1 < n; ++i) {
    parts[i] = u(gen);
    total += parts[i];
  }
  parts[n - 1] = denom - total;  // positive since parts are small
  Vec p(n);
  for (int i = 0; i < n; ++i) p[i] = static_cast<double>(parts[i]) / denom;
  return p;
}

inline Vec random_tangent(std::mt19937_64& gen, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(gen);
  v.array() -= v.mean();
  return v;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& gen, double max_angle = 3.0) {
  std::normal_distribution<double> g;
  Eigen::Vector3d axis(g(gen), g(gen), g(gen));
  axis.normalize();
  std::uniform_real_distribution<double> u(0.0, max_angle);
  return so3_expm(so3_hat(axis * u(gen)));
}

inline Mat random_spd(std::mt19937_64& gen, int s, double jitter = 0.5) {
  std::normal_distribution<double> g;
  Mat a(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) a(i, j) = g(gen);
  Mat x = a * a.transpose() + jitter * Mat::Identity(s, s);
  return 0.5 * (x + x.transpose());
}

inline Vec pack_matrix(const Mat& m) {
  Vec v(m.rows() * m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v[i * m.cols() + j] = m(i, j);
  return v;
}

inline Mat unpack_matrix(ConstVecRef v, int s) {
  Mat m(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) m(i, j) = v[i * s + j];
  return m;
}

/// Random point on the given manifold.
inline Vec random_point(std::mt19937_64& gen, const FeatureManifold& m) {
  switch (m.kind()) {
    case ManifoldKind::Euclidean: {
      std::normal_distribution<double> g;
      Vec p(m.dim());
      for (int i = 0; i < m.dim(); ++i) p[i] = g(gen);
      return p;
    }
    case ManifoldKind::Orientation: {
      std::uniform_real_distribution<double> u(0.0, M_PI);
      Vec p(1);
      p[0] = u(gen);
      return p;
    }
    case ManifoldKind::Rotation3:
      return pack_matrix(random_rotation(gen));
    case ManifoldKind::Spd:
      return pack_matrix(random_spd(gen, m.dim()));
  }
  return {};
}

/// Random unit tangent at p (unit in the packed Euclidean sense; only the
/// direction matters for the directional-derivative checks).
inline Vec random_unit_tangent(std::mt19937_64& gen, const FeatureManifold& m, ConstVecRef p) {
  std::normal_distribution<double> g;
  switch (m.kind()) {
    case ManifoldKind::Euclidean:
    case ManifoldKind::Orientation: {
      Vec v(m.packed_size());
      for (Index i = 0; i < v.size(); ++i) v[i] = g(gen);
      return v / v.norm();
    }
    case ManifoldKind::Rotation3: {
      Eigen::Vector3d n(g(gen), g(gen), g(gen));
      Mat r = unpack_matrix(p, 3);
      Mat v = r * so3_hat(n);
      Vec out = pack_matrix(v);
      return out / out.norm();
    }
    case ManifoldKind::Spd: {
      Mat u(m.dim(), m.dim());
      for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) u(i, j) = g(gen);
      u = 0.5 * (u + u.transpose()).eval();
      Vec out = pack_matrix(u);
      return out / out.norm();
    }
  }
  return {};
}

/// Central finite difference of t -> D(z, exp_m(t v)) at t = 0; the oracle
/// for Riemannian gradients through the metric pairing.
inline double directional_derivative_fd(const DivergenceSpec& spec, const FeatureManifold& m,
                                        ConstVecRef z, ConstVecRef label, ConstVecRef v,
                                        double step = 1e-4) {
  Vec plus(label.size()), minus(label.size());
  m.exp(label, Vec(step * v), plus);
  m.exp(label, Vec(-step * v), minus);
  return (divergence(spec, m, z, plus) - divergence(spec, m, z, minus)) / (2.0 * step);
}

/// Distance between two angles modulo 2 pi.
inline double angle_dist_2pi(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * M_PI);
  return std::min(d, 2.0 * M_PI - d);
}

/// Canonical divergence on spd via generalized eigenvalues,
/// (1/2) sum_k log^2 lambda_k(X, Y); test oracle only.
inline double spd_canonical_divergence(const Mat& x, const Mat& y) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(x, y);
  double s = 0.0;
  for (Index k = 0; k < es.eigenvalues().size(); ++k) {
    double l = std::log(es.eigenvalues()[k]);
    s += l * l;
  }
  return 0.5 * s;
}

/// Exhaustive k-center optimum over all size-k subsets.
inline double brute_force_k_center(int n, int k,
                                   const std::function<double(int, int)>& metric) {
  std::vector<int> subset(k);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      double obj = k_center_objective(n, subset, metric);
      best = std::min(best, obj);
      return;
    }
    for (int i = start; i < n; ++i) {
      subset[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

}  // namespace testutil
