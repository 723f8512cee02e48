#include "uaflow/manifold.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace uaflow {

namespace {

using Matrix3 = Eigen::Matrix3d;

Matrix3 unpack3(ConstVecRef p) {
  Matrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = p[3 * i + j];
  return r;
}

void pack3(const Matrix3& r, VecRef out) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[3 * i + j] = r(i, j);
}

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

}  // namespace

std::string to_string(ManifoldKind k) {
  switch (k) {
    case ManifoldKind::Euclidean: return "euclidean";
    case ManifoldKind::Orientation: return "orientation";
    case ManifoldKind::Rotation3: return "so3";
    case ManifoldKind::Spd: return "spd";
  }
  return "?";
}

FeatureManifold FeatureManifold::euclidean(int d) {
  if (d < 1) throw InvalidArgument("euclidean manifold needs dimension >= 1");
  return {ManifoldKind::Euclidean, d};
}
FeatureManifold FeatureManifold::orientation() { return {ManifoldKind::Orientation, 1}; }
FeatureManifold FeatureManifold::rotation3() { return {ManifoldKind::Rotation3, 3}; }
FeatureManifold FeatureManifold::spd(int s) {
  if (s < 1) throw InvalidArgument("spd manifold needs size >= 1");
  return {ManifoldKind::Spd, s};
}

int FeatureManifold::packed_size() const {
  switch (kind_) {
    case ManifoldKind::Euclidean: return dim_;
    case ManifoldKind::Orientation: return 1;
    case ManifoldKind::Rotation3: return 9;
    case ManifoldKind::Spd: return dim_ * dim_;
  }
  return 0;
}

double sinc(double x) {
  double ax = std::abs(x);
  if (ax < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

Eigen::Matrix3d so3_hat(const Eigen::Vector3d& n) {
  Matrix3 a;
  a << 0, -n.z(), n.y(), n.z(), 0, -n.x(), -n.y(), n.x(), 0;
  return a;
}

Eigen::Matrix3d so3_expm(const Eigen::Matrix3d& omega) {
  double a = std::sqrt(0.5 * (omega.transpose() * omega).trace());
  Matrix3 r = Matrix3::Identity() + sinc(a) * omega;
  double sh = sinc(0.5 * a);
  r += 0.5 * sh * sh * (omega * omega);
  return r;
}

Eigen::Matrix3d so3_logm(const Eigen::Matrix3d& r) {
  double c = (r.trace() - 1.0) / 2.0;
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  Eigen::Vector3d skew((r(2, 1) - r(1, 2)) / 2.0, (r(0, 2) - r(2, 0)) / 2.0,
                       (r(1, 0) - r(0, 1)) / 2.0);
  if (c == -1.0) {
    // the trace has no resolution left this close to pi; the skew part
    // (= sin(theta) times the axis) is the only sign information
    if (skew.norm() <= 1e-14)
      throw NotInDomain("so3 log undefined at rotation angle pi");
  }
  double theta = (c == -1.0) ? M_PI - std::asin(std::min(1.0, skew.norm())) : std::acos(c);
  if (theta > M_PI - 1e-2) {
    // Near pi the skew part nearly vanishes; recover the axis from the
    // symmetric part and its sign from the residual skew part.
    double one_minus_cos = 1.0 - c;
    Eigen::Vector3d n;
    for (int i = 0; i < 3; ++i) {
      double v = 1.0 + (r(i, i) - 1.0) / one_minus_cos;
      n[i] = std::sqrt(std::max(0.0, v));
    }
    int k = 0;
    if (n[1] > n[k]) k = 1;
    if (n[2] > n[k]) k = 2;
    // off-diagonal products fix the relative signs
    auto sym = [&](int i, int j) { return (r(i, j) + r(j, i)) / (2.0 * one_minus_cos); };
    for (int i = 0; i < 3; ++i) {
      if (i == k) continue;
      n[i] = (n[k] > 0.0) ? sym(i, k) / n[k] : 0.0;
    }
    if (skew.dot(n) < 0.0) n = -n;
    n.normalize();
    return so3_hat(theta * n);
  }
  return (r - r.transpose()) / (2.0 * sinc(theta));
}

double so3_rotation_angle(const Eigen::Matrix3d& r1, const Eigen::Matrix3d& r2) {
  double c = ((r1.transpose() * r2).trace() - 1.0) / 2.0;
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

double s1_wrap(double theta) {
  double t = theta - M_PI * std::floor(theta / M_PI);
  if (t >= M_PI) t -= M_PI;  // guard against floor rounding at the seam
  return t;
}

double s1_diff(double a, double b) {
  double d = a - b;
  return d - M_PI * std::round(d / M_PI);
}

double spd_logdet(const Mat& x) {
  Eigen::LLT<Mat> llt(x);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("Cholesky factorization failed");
  double s = 0.0;
  for (Index i = 0; i < x.rows(); ++i) s += std::log(llt.matrixL()(i, i));
  return 2.0 * s;
}

Mat spd_solve(const Mat& x, const Mat& b) {
  Eigen::LLT<Mat> llt(x);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("Cholesky factorization failed");
  return llt.solve(b);
}

Mat sym_expm(const Mat& s) {
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  if (es.info() != Eigen::Success) throw NumericalFailure("symmetric eigendecomposition failed");
  Mat r = es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
          es.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

Mat spd_exp(const Mat& x, const Mat& u) {
  Eigen::SelfAdjointEigenSolver<Mat> es(x);
  if (es.info() != Eigen::Success) throw NumericalFailure("symmetric eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotPositiveDefinite("spd_exp: base point is not positive definite");
  Vec sq = es.eigenvalues().array().sqrt();
  Mat root = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().transpose();
  Mat inv_root = es.eigenvectors() * sq.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  Mat mid = inv_root * u * inv_root;
  mid = 0.5 * (mid + mid.transpose());
  Mat r = root * sym_expm(mid) * root;
  return 0.5 * (r + r.transpose());
}

void FeatureManifold::exp(ConstVecRef p, ConstVecRef v, VecRef out) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      out = p + v;
      return;
    case ManifoldKind::Orientation:
      out[0] = s1_wrap(p[0] + v[0]);
      return;
    case ManifoldKind::Rotation3: {
      Matrix3 r = unpack3(p);
      Matrix3 omega = r.transpose() * unpack3(v);
      omega = 0.5 * (omega - omega.transpose().eval());
      pack3(r * so3_expm(omega), out);
      return;
    }
    case ManifoldKind::Spd: {
      Mat x = unpack_sym(p, dim_);
      Mat u = unpack_sym(v, dim_);
      u = 0.5 * (u + u.transpose().eval());
      pack_sym(spd_exp(x, u), out);
      return;
    }
  }
}

void FeatureManifold::log(ConstVecRef p, ConstVecRef q, VecRef out) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      out = q - p;
      return;
    case ManifoldKind::Orientation:
      out[0] = s1_diff(q[0], p[0]);
      return;
    case ManifoldKind::Rotation3: {
      Matrix3 r1 = unpack3(p);
      Matrix3 r2 = unpack3(q);
      pack3(r1 * so3_logm((r1.transpose() * r2).eval()), out);
      return;
    }
    case ManifoldKind::Spd:
      throw InvalidArgument("log map is not provided on spd");
  }
}

double FeatureManifold::distance(ConstVecRef p, ConstVecRef q) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return (q - p).norm();
    case ManifoldKind::Orientation:
      return std::abs(s1_diff(p[0], q[0]));
    case ManifoldKind::Rotation3:
      return std::sqrt(2.0) * so3_rotation_angle(unpack3(p), unpack3(q));
    case ManifoldKind::Spd:
      throw InvalidArgument("Riemannian distance is not provided on spd");
  }
  return 0.0;
}

double FeatureManifold::metric(ConstVecRef p, ConstVecRef u, ConstVecRef v) const {
  switch (kind_) {
    case ManifoldKind::Euclidean:
    case ManifoldKind::Orientation:
    case ManifoldKind::Rotation3:
      // Frobenius / Euclidean inner product (bi-invariant on SO(3))
      return u.dot(v);
    case ManifoldKind::Spd: {
      Mat x = unpack_sym(p, dim_);
      Mat a = spd_solve(x, unpack_sym(u, dim_));
      Mat b = spd_solve(x, unpack_sym(v, dim_));
      return (a * b).trace();
    }
  }
  return 0.0;
}

bool FeatureManifold::is_valid_point(ConstVecRef p) const {
  if (p.size() != packed_size() || !p.allFinite()) return false;
  switch (kind_) {
    case ManifoldKind::Euclidean:
      return true;
    case ManifoldKind::Orientation:
      return true;
    case ManifoldKind::Rotation3: {
      Matrix3 r = unpack3(p);
      if ((r.transpose() * r - Matrix3::Identity()).norm() > 1e-10) return false;
      return r.determinant() > 0.0;
    }
    case ManifoldKind::Spd: {
      Mat x = unpack_sym(p, dim_);
      if ((x - x.transpose()).cwiseAbs().maxCoeff() > 1e-12) return false;
      Eigen::LLT<Mat> llt(x);
      return llt.info() == Eigen::Success;
    }
  }
  return false;
}

void FeatureManifold::validate_point(ConstVecRef p, const std::string& what) const {
  if (!is_valid_point(p))
    throw NumericalFailure(what + " violates " + to_string(kind_) + " manifold invariants");
}

}  // namespace uaflow
