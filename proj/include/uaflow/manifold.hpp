#pragma once

#include "uaflow/common.hpp"

#include <string>

namespace uaflow {

// Feature manifolds. Points and tangents are packed into flat double
// vectors so that fields of them live in contiguous |I| x packed matrices:
//   euclidean   d entries
//   orientation 1 entry, a representative of R / pi Z kept in [0, pi)
//   rotation3   9 entries, row-major 3x3 rotation matrix
//   spd         s*s entries, row-major symmetric positive definite matrix

enum class ManifoldKind { Euclidean, Orientation, Rotation3, Spd };

std::string to_string(ManifoldKind k);

class FeatureManifold {
 public:
  FeatureManifold() : kind_(ManifoldKind::Euclidean), dim_(1) {}

  static FeatureManifold euclidean(int d);
  static FeatureManifold orientation();
  static FeatureManifold rotation3();
  static FeatureManifold spd(int s);

  ManifoldKind kind() const { return kind_; }

  /// Intrinsic size parameter: d, 1, 3 or s.
  int dim() const { return dim_; }

  /// Packed length of one point (and of one tangent vector).
  int packed_size() const;

  bool operator==(const FeatureManifold& o) const { return kind_ == o.kind_ && dim_ == o.dim_; }

  /// Exponential map at p applied to tangent v. exp(p, 0) = p bitwise.
  void exp(ConstVecRef p, ConstVecRef v, VecRef out) const;

  /// Logarithmic map: tangent at p pointing to q. Throws NotInDomain for
  /// antipodal rotation pairs and InvalidArgument on spd (no log needed
  /// for the Stein pipeline).
  void log(ConstVecRef p, ConstVecRef q, VecRef out) const;

  bool has_log() const { return kind_ != ManifoldKind::Spd; }

  /// Riemannian distance. Unsupported on spd (the Stein divergence is used
  /// there instead).
  double distance(ConstVecRef p, ConstVecRef q) const;

  /// Metric inner product of two tangents at p.
  double metric(ConstVecRef p, ConstVecRef u, ConstVecRef v) const;

  /// Throws unless p satisfies the manifold invariants.
  void validate_point(ConstVecRef p, const std::string& what = "point") const;
  bool is_valid_point(ConstVecRef p) const;

 private:
  FeatureManifold(ManifoldKind k, int d) : kind_(k), dim_(d) {}
  ManifoldKind kind_;
  int dim_;
};

// SO(3) kernels (Rodrigues forms, closed-form log).

/// Hat operator: n -> skew matrix with (hat n) v = n x v.
Eigen::Matrix3d so3_hat(const Eigen::Vector3d& n);

/// sinc with the removable singularity at 0 and a Taylor guard for |x| < 1e-4.
double sinc(double x);

/// Matrix exponential of a skew-symmetric 3x3 matrix (Rodrigues).
Eigen::Matrix3d so3_expm(const Eigen::Matrix3d& omega);

/// Matrix logarithm of a rotation; throws NotInDomain at rotation angle pi.
Eigen::Matrix3d so3_logm(const Eigen::Matrix3d& r);

/// Rotation angle between two rotations, sqrt(1/2)*Frobenius of the log:
/// theta = arccos((tr(r1^T r2) - 1)/2), argument clamped to [-1, 1].
double so3_rotation_angle(const Eigen::Matrix3d& r1, const Eigen::Matrix3d& r2);

// Orientation (R / pi Z) kernels.

/// Canonical representative in [0, pi).
double s1_wrap(double theta);

/// Signed representative difference a - b shifted by the optimal multiple of
/// pi, in [-pi/2, pi/2]. |s1_diff| is the quotient distance.
double s1_diff(double a, double b);

// SPD kernels (Cholesky based; the eigendecomposition appears only in the
// matrix exponential).

/// log det X via Cholesky; throws NotPositiveDefinite.
double spd_logdet(const Mat& x);

/// Solve X Z = B via Cholesky.
Mat spd_solve(const Mat& x, const Mat& b);

/// Matrix exponential of a symmetric matrix by symmetric eigendecomposition.
Mat sym_expm(const Mat& s);

/// exp_X(U) = X^{1/2} expm(X^{-1/2} U X^{-1/2}) X^{1/2}.
Mat spd_exp(const Mat& x, const Mat& u);

}  // namespace uaflow
