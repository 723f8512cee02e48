#pragma once

#include "uaflow/common.hpp"

#include <vector>

namespace uaflow {

// Geometry of the open probability simplex S and the assignment manifold
// W = S x ... x S (one factor per pixel). Assignment matrices are stored as
// row-major |I| x |J| matrices whose rows are points of S.

constexpr double kSimplexTol = 1e-12;

/// Throws InvalidArgument unless p is strictly positive and sums to 1
/// within tol (compensated sum).
void check_prob_vector(ConstVecRef p, double tol = kSimplexTol);

/// Throws InvalidArgument unless the entries sum to 0 within tol.
void check_tangent_vector(ConstVecRef v, double tol = kSimplexTol);

/// Throws InvalidArgument unless every row of w is a valid probability vector.
void check_assignment_state(const RowMat& w, double tol = kSimplexTol);

/// Replicator map R_p: d -> p (d - <p,d> 1), the linear projection onto the
/// tangent space T_0 parameterized by p.
Vec replicator(ConstVecRef p, ConstVecRef d);

/// e-exponential map Exp_p(v) = p e^{v/p} / <p, e^{v/p}>, defined on all of
/// T_0. Exponentials subtract their max entry first, which leaves the value
/// unchanged and prevents overflow.
Vec exp_map(ConstVecRef p, ConstVecRef v);

/// Inverse of exp_map: Exp_p^{-1}(q) = R_p log(q/p).
Vec exp_inverse(ConstVecRef p, ConstVecRef q);

/// Lifting map exp_p(z) = p e^z / <p, e^z> for arbitrary z in R^J.
/// Invariant under z -> z + c 1.
Vec lift(ConstVecRef p, ConstVecRef z);

/// Weighted geometric mean of probability vectors, normalized to S.
/// Accumulates log-ratios relative to the first point so that identical
/// arguments reproduce the input without rounding.
Vec geometric_mean(const std::vector<Vec>& points, ConstVecRef weights);

/// (1/|I|) sum_i ( -sum_j W_ij ln W_ij ), in [0, ln |J|].
double average_entropy(const RowMat& w);

/// Clamp entries below eps to eps, then rescale each row to sum 1.
/// A row of all zeros is a degenerate input.
void renormalize_rows(RowMat& w, double eps);

/// Uninformative barycenter state: every row uniform.
RowMat barycenter_state(Index pixels, Index labels);

// Row-wise kernels used by the flow integrators. They share the exact
// arithmetic of the vector-level maps above.

/// out.row(i) = replicator(w.row(i), s.row(i))
void replicator_rows(const RowMat& w, const RowMat& s, RowMat& out);

/// out.row(i) = lift(w.row(i), v.row(i))
void lift_rows(const RowMat& w, const RowMat& v, RowMat& out);

}  // namespace uaflow
