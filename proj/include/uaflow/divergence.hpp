#pragma once

#include "uaflow/manifold.hpp"

namespace uaflow {

enum class DivergenceKind { CanonicalSquaredDistance, Stein, SteinRotationInvariant };

std::string to_string(DivergenceKind k);

/// One-parameter rotation subgroup acting on covariance descriptors of the
/// derivative feature map (value, gradient, second derivatives with the
/// sqrt(2) normalization of the mixed term), per channel. The descriptor
/// layout is six derivative groups of `channels` entries each, so
/// R(theta) = blkdiag(I_c, R1(theta) (x) I_c, R2(theta) (x) I_c) in SO(6c).
struct RotationBlocks {
  int channels = 1;

  int size() const { return 6 * channels; }

  /// Dense R(theta). Satisfies R(a + b) = R(a) R(b).
  Mat rotation(double theta) const;
  void rotation_into(double theta, Mat& out) const;

  /// R(theta) X R(theta)^T.
  Mat conjugate(double theta, const Mat& x) const;
};

struct DivergenceSpec {
  DivergenceKind kind = DivergenceKind::CanonicalSquaredDistance;
  RotationBlocks blocks;   // used only by SteinRotationInvariant
  int angle_grid = 64;     // coarse grid size over [0, 2pi)
  double angle_tol = 1e-8; // golden-section refinement tolerance in theta

  static DivergenceSpec canonical();
  static DivergenceSpec stein();
  static DivergenceSpec stein_rotation_invariant(RotationBlocks blocks);
};

/// Stein divergence logdet((X+Y)/2) - (logdet X + logdet Y)/2 on spd.
double stein_divergence(const Mat& x, const Mat& y);

struct SteinRotationResult {
  double value;
  double angle;  // theta* in [0, 2pi) with value = D_S(R(theta*) X R(theta*)^T, Y)
};

/// min over theta of D_S(R(theta) X R(theta)^T, Y): coarse grid scan
/// followed by golden-section refinement on the best bracket. Ties on the
/// grid keep the smallest index.
SteinRotationResult stein_rotation_invariant(const Mat& x, const Mat& y,
                                             const RotationBlocks& blocks,
                                             int grid = 64, double tol = 1e-8);

/// Batched variant for whole distance matrices: same grid + refinement per
/// pair, with the grid conjugations hoisted to one pass over the labels.
/// data and labels hold packed s x s matrices per row.
void stein_rotation_pairwise(const RowMat& data, const RowMat& labels,
                             const RotationBlocks& blocks, int grid, double tol, RowMat& d,
                             RowMat& angle);

/// D(z, m) for the pair of packed points. Canonical kind is 1/2 d_g^2 on
/// euclidean, orientation and so3; Stein kinds require spd.
double divergence(const DivergenceSpec& spec, const FeatureManifold& m,
                  ConstVecRef z, ConstVecRef label);

/// Riemannian gradient of label -> D(z, label), a tangent at label.
/// Canonical kind: -log_label(z). Stein kind: Y d2(D_S) Y with
/// d2 = ((X+Y)/2)^{-1}/2 - Y^{-1}/2. The rotation-invariant kind evaluates
/// the Stein gradient at the optimally rotated first argument; if the
/// optimal angle is already known (from a distance pass) it can be supplied.
void divergence_rgrad2(const DivergenceSpec& spec, const FeatureManifold& m,
                       ConstVecRef z, ConstVecRef label, VecRef out,
                       const double* known_angle = nullptr);

}  // namespace uaflow
