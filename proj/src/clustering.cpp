#include "uaflow/clustering.hpp"

#include "uaflow/simplex.hpp"

#include <cmath>
#include <limits>

namespace uaflow {

std::vector<int> k_center_greedy(int n, int k, uint64_t seed,
                                 const std::function<double(int, int)>& dissimilarity) {
  if (k < 1) throw InvalidArgument("k_center: k must be >= 1");
  if (k > n) throw InvalidArgument("k_center: k exceeds the number of data points");
  std::vector<int> centers;
  centers.reserve(k);
  Rng rng(seed);
  int first = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n)));
  centers.push_back(first);
  std::vector<double> min_d(n);
  for (int i = 0; i < n; ++i) min_d[i] = dissimilarity(i, first);
  while (static_cast<int>(centers.size()) < k) {
    int far = 0;
    for (int i = 1; i < n; ++i)
      if (min_d[i] > min_d[far]) far = i;
    centers.push_back(far);
    for (int i = 0; i < n; ++i) min_d[i] = std::min(min_d[i], dissimilarity(i, far));
  }
  return centers;
}

double k_center_objective(int n, const std::vector<int>& centers,
                          const std::function<double(int, int)>& dissimilarity) {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c : centers) best = std::min(best, dissimilarity(i, c));
    worst = std::max(worst, best);
  }
  return worst;
}

LabelDictionary k_center(const FeatureField& data, int k, uint64_t seed,
                         const DivergenceSpec& spec) {
  auto d = [&](int i, int j) {
    return divergence(spec, data.manifold, data.points.row(i), data.points.row(j));
  };
  std::vector<int> centers = k_center_greedy(static_cast<int>(data.size()), k, seed, d);
  LabelDictionary dict;
  dict.manifold = data.manifold;
  dict.labels.resize(k, data.points.cols());
  for (int j = 0; j < k; ++j) dict.labels.row(j) = data.points.row(centers[j]);
  return dict;
}

namespace {

/// softmax of -D/eps per row, guarded by subtracting the row minimum of D.
RowMat soft_assignments(const RowMat& d, double eps) {
  RowMat p(d.rows(), d.cols());
  for (Index i = 0; i < d.rows(); ++i) {
    double lo = d.row(i).minCoeff();
    p.row(i) = ((lo - d.row(i).array()) / eps).exp();
    p.row(i) /= p.row(i).sum();
  }
  return p;
}

RowMat pairwise_divergence(const FeatureField& data, const LabelDictionary& labels,
                           const DivergenceSpec& spec) {
  RowMat d(data.size(), labels.size());
  for (Index i = 0; i < data.size(); ++i)
    for (Index j = 0; j < labels.size(); ++j)
      d(i, j) = divergence(spec, data.manifold, data.points.row(i), labels.labels.row(j));
  return d;
}

/// One Riemannian mean-shift step per label with the given |J| x |I| weights
/// (rows on the simplex): m_j <- exp_{m_j}( -sum_i w_ji grad2 D(z_i, m_j) ).
void weighted_label_step(const FeatureField& data, LabelDictionary& labels, const RowMat& w,
                         const std::vector<uint8_t>& frozen, const DivergenceSpec& spec) {
  Vec grad(labels.labels.cols());
  Vec step(labels.labels.cols());
  Vec updated(labels.labels.cols());
  for (Index j = 0; j < labels.size(); ++j) {
    if (frozen[static_cast<size_t>(j)]) continue;
    step.setZero();
    for (Index i = 0; i < data.size(); ++i) {
      double wji = w(j, i);
      if (wji == 0.0) continue;
      divergence_rgrad2(spec, data.manifold, data.points.row(i), labels.labels.row(j), grad);
      step -= wji * grad;
    }
    data.manifold.exp(labels.labels.row(j), step, updated);
    labels.labels.row(j) = updated;
  }
}

/// Normalize columns of p into |J| x |I| rows; flags labels whose column
/// normalizer vanished so they are frozen for this step and can die out.
RowMat column_normalized(const RowMat& p, std::vector<uint8_t>& empty) {
  RowMat q(p.cols(), p.rows());
  empty.assign(static_cast<size_t>(p.cols()), 0);
  for (Index j = 0; j < p.cols(); ++j) {
    double s = p.col(j).sum();
    if (s <= 0.0) {
      empty[static_cast<size_t>(j)] = 1;
      q.row(j).setZero();
    } else {
      q.row(j) = p.col(j).transpose() / s;
    }
  }
  return q;
}

}  // namespace

SoftKMeansResult soft_k_means_step(const FeatureField& data, const LabelDictionary& labels,
                                   double eps, const DivergenceSpec& spec) {
  if (eps <= 0.0) throw InvalidArgument("soft_k_means_step: eps must be positive");
  if (!(data.manifold == labels.manifold))
    throw InvalidArgument("soft_k_means_step: manifold mismatch");
  SoftKMeansResult r;
  RowMat d = pairwise_divergence(data, labels, spec);
  r.assignment.p = soft_assignments(d, eps);
  r.assignment.q = column_normalized(r.assignment.p, r.empty);
  r.labels = labels;
  weighted_label_step(data, r.labels, r.assignment.q, r.empty, spec);
  return r;
}

EmStepResult em_step(const FeatureField& data, const LabelDictionary& labels, const Vec& mixture,
                     const DivergenceSpec& spec) {
  if (mixture.size() != labels.size()) throw InvalidArgument("em_step: mixture size mismatch");
  check_prob_vector(mixture);
  EmStepResult r;
  RowMat d = pairwise_divergence(data, labels, spec);
  // E-step: posterior ~ pi_j exp(-D_ij), computed as a guarded softmax of
  // log pi_j - D_ij.
  RowMat logits(d.rows(), d.cols());
  Vec log_pi = mixture.array().log();
  for (Index i = 0; i < d.rows(); ++i)
    logits.row(i) = log_pi.transpose().array() - d.row(i).array();
  r.posteriors.resize(d.rows(), d.cols());
  for (Index i = 0; i < d.rows(); ++i) {
    double hi = logits.row(i).maxCoeff();
    r.posteriors.row(i) = (logits.row(i).array() - hi).exp();
    r.posteriors.row(i) /= r.posteriors.row(i).sum();
  }
  r.nu = column_normalized(r.posteriors, r.empty);
  // M-step. The mixture normalizer is 1/|I| so pi stays on the simplex.
  r.mixture = r.posteriors.colwise().mean();
  r.labels = labels;
  weighted_label_step(data, r.labels, r.nu, r.empty, spec);
  return r;
}

ClusterResult cluster(const FeatureField& data, int k, const ClusterOptions& opts,
                      const DivergenceSpec& spec) {
  if (opts.max_iters < 1) throw InvalidArgument("cluster: max_iters must be >= 1");
  ClusterResult result;
  result.labels = k_center(data, k, opts.seed, spec);
  if (opts.method == ClusterMethod::Em)
    result.mixture = Vec::Constant(k, 1.0 / k);
  for (int it = 0; it < opts.max_iters; ++it) {
    RowMat before = result.labels.labels;
    if (opts.method == ClusterMethod::SoftKMeans) {
      SoftKMeansResult step = soft_k_means_step(data, result.labels, opts.eps, spec);
      result.labels = std::move(step.labels);
      result.assignment = std::move(step.assignment);
    } else {
      EmStepResult step = em_step(data, result.labels, result.mixture, spec);
      result.labels = std::move(step.labels);
      result.mixture = std::move(step.mixture);
      result.assignment.p = std::move(step.posteriors);
      result.assignment.q = std::move(step.nu);
    }
    result.iterations = it + 1;
    double moved = 0.0;
    for (Index j = 0; j < result.labels.size(); ++j)
      moved = std::max(moved, divergence(spec, data.manifold, before.row(j),
                                         result.labels.labels.row(j)));
    if (moved < opts.tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace uaflow
