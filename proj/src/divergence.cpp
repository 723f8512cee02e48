#include "uaflow/divergence.hpp"

#include <cmath>
#include <functional>

namespace uaflow {

namespace {

Mat unpack_sym(ConstVecRef p, int s) {
  Mat x(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) x(i, j) = p[s * i + j];
  return x;
}

void pack_sym(const Mat& x, VecRef out) {
  int s = static_cast<int>(x.rows());
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) out[s * i + j] = x(i, j);
}

/// Euclidean gradient of Y -> D_S(X, Y).
Mat stein_grad2(const Mat& x, const Mat& y) {
  Mat mid = 0.5 * (x + y);
  Index s = x.rows();
  Mat g = 0.5 * (spd_solve(mid, Mat::Identity(s, s)) - spd_solve(y, Mat::Identity(s, s)));
  return 0.5 * (g + g.transpose().eval());
}

// Golden-section minimization on [a, b]; f is assumed unimodal there.
// Returns the best (x, f(x)) among all evaluated points.
std::pair<double, double> golden_min(const std::function<double(double)>& f, double a, double b,
                                     double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return (f1 <= f2) ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

std::string to_string(DivergenceKind k) {
  switch (k) {
    case DivergenceKind::CanonicalSquaredDistance: return "canonical";
    case DivergenceKind::Stein: return "stein";
    case DivergenceKind::SteinRotationInvariant: return "stein-rot";
  }
  return "?";
}

void RotationBlocks::rotation_into(double theta, Mat& r) const {
  int s = size();
  r = Mat::Identity(s, s);
  double ct = std::cos(theta), st = std::sin(theta);
  int c = channels;
  for (int g = 0; g < c; ++g) {
    // gradient pair (u_x, u_y)
    int ix = c + g, iy = 2 * c + g;
    r(ix, ix) = ct;  r(ix, iy) = -st;
    r(iy, ix) = st;  r(iy, iy) = ct;
    // second-derivative triple (u_xx, sqrt2 u_xy, u_yy)
    int a = 3 * c + g, b = 4 * c + g, d = 5 * c + g;
    double s2 = std::sqrt(2.0) * ct * st;
    r(a, a) = ct * ct;  r(a, b) = -s2;           r(a, d) = st * st;
    r(b, a) = s2;       r(b, b) = ct * ct - st * st;  r(b, d) = -s2;
    r(d, a) = st * st;  r(d, b) = s2;            r(d, d) = ct * ct;
  }
}

Mat RotationBlocks::rotation(double theta) const {
  Mat r;
  rotation_into(theta, r);
  return r;
}

Mat RotationBlocks::conjugate(double theta, const Mat& x) const {
  Mat r = rotation(theta);
  Mat y = r * x * r.transpose();
  return 0.5 * (y + y.transpose().eval());
}

DivergenceSpec DivergenceSpec::canonical() {
  return DivergenceSpec{DivergenceKind::CanonicalSquaredDistance, {}, 64, 1e-8};
}
DivergenceSpec DivergenceSpec::stein() {
  return DivergenceSpec{DivergenceKind::Stein, {}, 64, 1e-8};
}
DivergenceSpec DivergenceSpec::stein_rotation_invariant(RotationBlocks blocks) {
  return DivergenceSpec{DivergenceKind::SteinRotationInvariant, blocks, 64, 1e-8};
}

double stein_divergence(const Mat& x, const Mat& y) {
  return spd_logdet(0.5 * (x + y)) - 0.5 * (spd_logdet(x) + spd_logdet(y));
}

SteinRotationResult stein_rotation_invariant(const Mat& x, const Mat& y,
                                             const RotationBlocks& blocks, int grid, double tol) {
  if (x.rows() != blocks.size() || y.rows() != blocks.size())
    throw InvalidArgument("stein_rotation_invariant: descriptor size does not match the block structure");
  double half_ld = 0.5 * (spd_logdet(x) + spd_logdet(y));
  auto f = [&](double theta) {
    // conjugation preserves logdet, so the cross term is the only one that moves
    return spd_logdet(0.5 * (blocks.conjugate(theta, x) + y)) - half_ld;
  };
  const double two_pi = 2.0 * M_PI;
  double step = two_pi / grid;
  int best = 0;
  double best_val = f(0.0);
  for (int g = 1; g < grid; ++g) {
    double v = f(step * g);
    if (v < best_val) {
      best_val = v;
      best = g;
    }
  }
  auto [theta, val] = golden_min(f, step * (best - 1), step * (best + 1), tol);
  if (best_val < val) {
    val = best_val;
    theta = step * best;
  }
  theta = std::fmod(theta, two_pi);
  if (theta < 0.0) theta += two_pi;
  return {val, theta};
}

void stein_rotation_pairwise(const RowMat& data, const RowMat& labels,
                             const RotationBlocks& blocks, int grid, double tol, RowMat& d,
                             RowMat& angle) {
  const int s = blocks.size();
  if (data.cols() != s * s || labels.cols() != s * s)
    throw InvalidArgument("stein_rotation_pairwise: packed size mismatch");
  const Index n = data.rows(), k = labels.rows();
  d.resize(n, k);
  angle.resize(n, k);
  const double two_pi = 2.0 * M_PI;
  const double step = two_pi / grid;

  // Evaluating D_S(R(theta) X R(theta)^T, Y) as D_S(X, R(-theta) Y R(-theta)^T)
  // lets the grid conjugations be hoisted per label.
  Mat rot(s, s), tmp(s, s), mid(s, s);
  Eigen::LLT<Mat> llt(s);
  auto half_logdet_of = [&](const Mat& x) {
    llt.compute(x);
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefinite("Cholesky factorization failed");
    double acc = 0.0;
    for (int i = 0; i < s; ++i) acc += std::log(llt.matrixLLT()(i, i));
    return acc;  // (1/2) logdet
  };

  Vec data_half_ld(n);
  for (Index i = 0; i < n; ++i)
    data_half_ld[i] = half_logdet_of(Eigen::Map<const Mat>(data.row(i).data(), s, s));

  std::vector<Mat> conj(static_cast<size_t>(grid), Mat(s, s));
  Vec grid_vals(grid);
  for (Index j = 0; j < k; ++j) {
    Eigen::Map<const Mat> lam(labels.row(j).data(), s, s);
    double lam_half_ld = half_logdet_of(lam);
    for (int g = 0; g < grid; ++g) {
      blocks.rotation_into(-step * g, rot);
      tmp.noalias() = rot * lam;
      conj[static_cast<size_t>(g)].noalias() = tmp * rot.transpose();
    }
    for (Index i = 0; i < n; ++i) {
      Eigen::Map<const Mat> x(data.row(i).data(), s, s);
      double base = data_half_ld[i] + lam_half_ld;
      int best = 0;
      double best_val = std::numeric_limits<double>::infinity();
      for (int g = 0; g < grid; ++g) {
        mid = 0.5 * (x + conj[static_cast<size_t>(g)]);
        grid_vals[g] = 2.0 * half_logdet_of(mid) - base;
        if (grid_vals[g] < best_val) {
          best_val = grid_vals[g];
          best = g;
        }
      }
      auto f = [&](double theta) {
        blocks.rotation_into(-theta, rot);
        tmp.noalias() = rot * lam;
        mid.noalias() = tmp * rot.transpose();
        mid = 0.5 * (x + mid);
        return 2.0 * half_logdet_of(mid) - base;
      };
      auto [theta, val] = golden_min(f, step * (best - 1), step * (best + 1), tol);
      if (best_val < val) {
        val = best_val;
        theta = step * best;
      }
      theta = std::fmod(theta, two_pi);
      if (theta < 0.0) theta += two_pi;
      d(i, j) = val;
      angle(i, j) = theta;
    }
  }
}

double divergence(const DivergenceSpec& spec, const FeatureManifold& m, ConstVecRef z,
                  ConstVecRef label) {
  switch (spec.kind) {
    case DivergenceKind::CanonicalSquaredDistance: {
      if (m.kind() == ManifoldKind::Spd)
        throw InvalidArgument("canonical divergence is not provided on spd; use stein");
      double d = m.distance(z, label);
      return 0.5 * d * d;
    }
    case DivergenceKind::Stein: {
      if (m.kind() != ManifoldKind::Spd) throw InvalidArgument("stein divergence requires spd");
      return stein_divergence(unpack_sym(z, m.dim()), unpack_sym(label, m.dim()));
    }
    case DivergenceKind::SteinRotationInvariant: {
      if (m.kind() != ManifoldKind::Spd) throw InvalidArgument("stein divergence requires spd");
      if (spec.blocks.size() != m.dim())
        throw InvalidArgument("rotation block structure does not match the spd size");
      return stein_rotation_invariant(unpack_sym(z, m.dim()), unpack_sym(label, m.dim()),
                                      spec.blocks, spec.angle_grid, spec.angle_tol)
          .value;
    }
  }
  return 0.0;
}

void divergence_rgrad2(const DivergenceSpec& spec, const FeatureManifold& m, ConstVecRef z,
                       ConstVecRef label, VecRef out, const double* known_angle) {
  switch (spec.kind) {
    case DivergenceKind::CanonicalSquaredDistance: {
      if (m.kind() == ManifoldKind::Spd)
        throw InvalidArgument("canonical divergence is not provided on spd; use stein");
      m.log(label, z, out);
      out = -out;
      return;
    }
    case DivergenceKind::Stein: {
      Mat x = unpack_sym(z, m.dim());
      Mat y = unpack_sym(label, m.dim());
      Mat g = y * stein_grad2(x, y) * y;  // grad F(Y) = Y dF(Y) Y
      pack_sym(0.5 * (g + g.transpose().eval()), out);
      return;
    }
    case DivergenceKind::SteinRotationInvariant: {
      Mat x = unpack_sym(z, m.dim());
      Mat y = unpack_sym(label, m.dim());
      double theta = known_angle
                         ? *known_angle
                         : stein_rotation_invariant(x, y, spec.blocks, spec.angle_grid,
                                                    spec.angle_tol)
                               .angle;
      Mat xr = spec.blocks.conjugate(theta, x);
      Mat g = y * stein_grad2(xr, y) * y;
      pack_sym(0.5 * (g + g.transpose().eval()), out);
      return;
    }
  }
}

}  // namespace uaflow
