#include "uaflow/simplex.hpp"

#include <cmath>

namespace uaflow {

// The kernels below use explicit scalar loops: exponentials and reductions
// then hit the same instructions with the same association order from every
// call site, so the vector-level maps and the row-wise variants agree
// bitwise and runs are reproducible.

namespace {

inline double seq_sum(const double* x, Index n) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += x[i];
  return s;
}

inline double seq_dot(const double* a, const double* b, Index n) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// q_j = p_j e^{t_j - max t} / sum, written into out
inline void lift_kernel(const double* p, const double* t, double* out, Index n) {
  double hi = t[0];
  for (Index j = 1; j < n; ++j) hi = std::max(hi, t[j]);
  for (Index j = 0; j < n; ++j) out[j] = p[j] * std::exp(t[j] - hi);
  double s = seq_sum(out, n);
  for (Index j = 0; j < n; ++j) out[j] /= s;
}

inline void replicator_kernel(const double* p, const double* d, double* out, Index n) {
  double pd = seq_dot(p, d, n);
  for (Index j = 0; j < n; ++j) out[j] = p[j] * (d[j] - pd);
}

}  // namespace

void check_prob_vector(ConstVecRef p, double tol) {
  if (p.size() == 0) throw InvalidArgument("probability vector is empty");
  if (!p.allFinite()) throw InvalidArgument("probability vector has non-finite entries");
  if ((p.array() <= 0.0).any()) throw InvalidArgument("probability vector must be strictly positive");
  double s = kahan_sum(std::span<const double>(p.data(), static_cast<size_t>(p.size())));
  if (std::abs(s - 1.0) > tol)
    throw InvalidArgument("probability vector sums to " + std::to_string(s) + ", not 1");
}

void check_tangent_vector(ConstVecRef v, double tol) {
  if (!v.allFinite()) throw InvalidArgument("tangent vector has non-finite entries");
  double s = kahan_sum(std::span<const double>(v.data(), static_cast<size_t>(v.size())));
  if (std::abs(s) > tol)
    throw InvalidArgument("tangent vector sums to " + std::to_string(s) + ", not 0");
}

void check_assignment_state(const RowMat& w, double tol) {
  for (Index i = 0; i < w.rows(); ++i) {
    ConstVecRef row(w.row(i));
    if (!row.allFinite() || (row.array() <= 0.0).any() ||
        std::abs(kahan_sum(std::span<const double>(row.data(), static_cast<size_t>(row.size()))) - 1.0) > tol)
      throw InvalidArgument("assignment state row " + std::to_string(i) + " is not on the simplex");
  }
}

Vec replicator(ConstVecRef p, ConstVecRef d) {
  if (p.size() != d.size()) throw InvalidArgument("replicator: size mismatch");
  if (!d.allFinite() || !p.allFinite()) throw InvalidArgument("replicator: non-finite input");
  Vec out(p.size());
  replicator_kernel(p.data(), d.data(), out.data(), p.size());
  return out;
}

Vec exp_map(ConstVecRef p, ConstVecRef v) {
  if (p.size() != v.size()) throw InvalidArgument("exp_map: size mismatch");
  Vec t(p.size());
  for (Index j = 0; j < p.size(); ++j) t[j] = v[j] / p[j];
  Vec out(p.size());
  lift_kernel(p.data(), t.data(), out.data(), p.size());
  return out;
}

Vec exp_inverse(ConstVecRef p, ConstVecRef q) {
  if (p.size() != q.size()) throw InvalidArgument("exp_inverse: size mismatch");
  Vec d(p.size());
  for (Index j = 0; j < p.size(); ++j) d[j] = std::log(q[j] / p[j]);
  return replicator(p, d);
}

Vec lift(ConstVecRef p, ConstVecRef z) {
  if (p.size() != z.size()) throw InvalidArgument("lift: size mismatch");
  if (!z.allFinite()) throw InvalidArgument("lift: non-finite input");
  Vec out(p.size());
  lift_kernel(p.data(), z.data(), out.data(), p.size());
  return out;
}

Vec geometric_mean(const std::vector<Vec>& points, ConstVecRef weights) {
  if (points.empty()) throw InvalidArgument("geometric_mean: empty point list");
  if (static_cast<Index>(points.size()) != weights.size())
    throw InvalidArgument("geometric_mean: weight count mismatch");
  if ((weights.array() <= 0.0).any())
    throw InvalidArgument("geometric_mean: weights must be positive");
  double ws = kahan_sum(std::span<const double>(weights.data(), static_cast<size_t>(weights.size())));
  if (std::abs(ws - 1.0) > kSimplexTol)
    throw InvalidArgument("geometric_mean: weights must sum to 1");

  const Vec& base = points.front();
  const Index n = base.size();
  // accumulate log-ratios relative to the first point; identical arguments
  // contribute exact zeros
  Vec log_base(n), t = Vec::Zero(n);
  for (Index j = 0; j < n; ++j) log_base[j] = std::log(base[j]);
  for (size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != n) throw InvalidArgument("geometric_mean: size mismatch");
    double w = weights[static_cast<Index>(k)];
    for (Index j = 0; j < n; ++j) t[j] += w * (std::log(points[k][j]) - log_base[j]);
  }
  Vec r(n);
  for (Index j = 0; j < n; ++j) r[j] = base[j] * std::exp(t[j]);
  double s = seq_sum(r.data(), n);
  return r / s;
}

double average_entropy(const RowMat& w) {
  if (w.rows() == 0) return 0.0;
  Vec per_row(w.rows());
  for (Index i = 0; i < w.rows(); ++i) {
    double h = 0.0;
    for (Index j = 0; j < w.cols(); ++j) {
      double x = w(i, j);
      h -= x * std::log(x);
    }
    per_row[i] = h;
  }
  return kahan_sum(per_row) / static_cast<double>(w.rows());
}

void renormalize_rows(RowMat& w, double eps) {
  for (Index i = 0; i < w.rows(); ++i) {
    double* row = w.row(i).data();
    const Index n = w.cols();
    double hi = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (!(row[j] >= 0.0) || !std::isfinite(row[j]))
        throw InvalidArgument("renormalize: rows must be nonnegative and finite");
      hi = std::max(hi, row[j]);
    }
    if (hi < eps)
      throw DegenerateInput("renormalize: row " + std::to_string(i) + " has no entry >= eps");
    for (Index j = 0; j < n; ++j)
      if (row[j] < eps) row[j] = eps;
    double s = seq_sum(row, n);
    for (Index j = 0; j < n; ++j) row[j] /= s;
  }
}

RowMat barycenter_state(Index pixels, Index labels) {
  if (pixels < 1 || labels < 1) throw InvalidArgument("barycenter_state: empty state");
  return RowMat::Constant(pixels, labels, 1.0 / static_cast<double>(labels));
}

void replicator_rows(const RowMat& w, const RowMat& s, RowMat& out) {
  out.resize(w.rows(), w.cols());
  for (Index i = 0; i < w.rows(); ++i)
    replicator_kernel(w.row(i).data(), s.row(i).data(), out.row(i).data(), w.cols());
}

void lift_rows(const RowMat& w, const RowMat& v, RowMat& out) {
  out.resize(w.rows(), w.cols());
  for (Index i = 0; i < w.rows(); ++i)
    lift_kernel(w.row(i).data(), v.row(i).data(), out.row(i).data(), w.cols());
}

}  // namespace uaflow
