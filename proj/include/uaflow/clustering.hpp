#pragma once

#include "uaflow/divergence.hpp"
#include "uaflow/field.hpp"

#include <functional>
#include <vector>

namespace uaflow {

/// Greedy k-center selection: a random first pick (seeded), then repeatedly
/// the point farthest from the chosen set. O(k n) dissimilarity evaluations;
/// ties keep the smallest index. Works with any dissimilarity; with a metric
/// (or a squared metric) the result is a 2-approximation of the k-center
/// optimum.
std::vector<int> k_center_greedy(int n, int k, uint64_t seed,
                                 const std::function<double(int, int)>& dissimilarity);

/// k-center over a feature field with the given divergence; the labels are a
/// subset of the data.
LabelDictionary k_center(const FeatureField& data, int k, uint64_t seed,
                         const DivergenceSpec& spec);

/// max over data of the dissimilarity to the nearest selected point.
double k_center_objective(int n, const std::vector<int>& centers,
                          const std::function<double(int, int)>& dissimilarity);

struct SoftAssignment {
  RowMat p;  // |I| x |J|, rows sum to 1: soft assignment of datum i to labels
  RowMat q;  // |J| x |I|, rows sum to 1: convex weights of data for label j
};

struct SoftKMeansResult {
  SoftAssignment assignment;
  LabelDictionary labels;
  std::vector<uint8_t> empty;  // labels whose q-normalizer vanished (frozen this step)
};

/// One soft-k-means iteration: p ~ softmax(-D/eps) per datum, q the
/// column-normalized transposed weights, then one Riemannian mean-shift step
/// per label. The euclidean specialization reproduces the classical mean
/// shift m_j = sum_i q_ji x_i.
SoftKMeansResult soft_k_means_step(const FeatureField& data, const LabelDictionary& labels,
                                   double eps, const DivergenceSpec& spec);

struct EmStepResult {
  RowMat posteriors;  // |I| x |J|
  Vec mixture;        // pi
  RowMat nu;          // |J| x |I|
  LabelDictionary labels;
  std::vector<uint8_t> empty;
};

/// One divergence-based EM iteration: E-step posteriors ~ pi_j exp(-D_ij),
/// mixture update pi_j = mean_i p(j|i), and one Riemannian descent step on
/// the nu-weighted divergence per label.
EmStepResult em_step(const FeatureField& data, const LabelDictionary& labels, const Vec& mixture,
                     const DivergenceSpec& spec);

enum class ClusterMethod { SoftKMeans, Em };

struct ClusterOptions {
  ClusterMethod method = ClusterMethod::SoftKMeans;
  double eps = 0.1;  // soft-k-means temperature
  int max_iters = 200;
  double tol = 1e-10;  // on the max label movement (divergence scale)
  uint64_t seed = 0;
};

struct ClusterResult {
  LabelDictionary labels;
  SoftAssignment assignment;
  Vec mixture;  // EM only; empty for soft-k-means
  int iterations = 0;
  bool converged = false;
};

/// Iterate soft-k-means or EM steps from a k-center initialization until the
/// labels stop moving (max over j of D(m_old, m_new) < tol) or max_iters.
ClusterResult cluster(const FeatureField& data, int k, const ClusterOptions& opts,
                      const DivergenceSpec& spec);

}  // namespace uaflow
