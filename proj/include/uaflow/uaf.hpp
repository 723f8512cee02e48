#pragma once

#include "uaflow/assignment_flow.hpp"

namespace uaflow {

/// nu_{j|i}: column-normalized sigma-likelihoods, the weights that couple
/// assignments to the label flow. Rows (one per label) sum to 1 unless the
/// label's normalizer vanished, in which case the label is flagged empty and
/// its row zeroed.
struct CouplingWeights {
  RowMat nu;                   // |J| x |I|
  std::vector<uint8_t> empty;  // per label
};

/// sigma finite: L^sigma_ij = W_ij e^{-D_ij/sigma} / sum_l W_il e^{-D_il/sigma},
/// then nu_{j|i} = L_ij / sum_k L_kj. sigma = inf: the exact closed form
/// nu_{j|i} = W_ij / sum_k W_kj with no exponentials.
CouplingWeights coupling_weights(const RowMat& w, const RowMat& d, double sigma);

/// Label vector field G_j = -alpha sum_i nu_{j|i} rgrad2 D(z_i, m_j), one
/// packed tangent per row. Frozen (empty) labels get a zero row. For the
/// rotation-invariant Stein divergence the per-pair optimal angles from the
/// distance pass can be supplied to avoid re-minimizing.
RowMat label_field(const FeatureField& data, const LabelDictionary& labels,
                   const CouplingWeights& nu, double alpha, const DivergenceSpec& spec,
                   const RowMat* angles = nullptr);

/// Riemannian explicit Euler update m_j <- exp_{m_j}(h G_j). Rows of
/// exactly zero leave the label untouched. Validates the results.
void prototype_euler_step(LabelDictionary& labels, const RowMat& field, double h);

struct LabelStats {
  Vec mass;                         // fraction of pixels assigned per label
  int surviving = 0;                // labels with mass above the threshold
  double survive_threshold = 0.01;  // 1% of the pixels
  std::vector<uint8_t> ever_empty;  // labels that were frozen at least once
};

struct UafResult {
  LabelDictionary labels;
  RowMat w;
  std::vector<int> labeling;
  LabelStats stats;
  FlowTrace trace;
};

/// The unsupervised assignment flow: from W(0) = barycenter and the given
/// initial dictionary, alternate per outer step
///   distances -> coupling weights -> label Euler step -> implicit
///   assignment step (against the updated labels)
/// until the average entropy falls below entropy_tol. Throws Timeout at the
/// step cap.
UafResult run_uaf(const FeatureField& data, const LabelDictionary& init,
                  const NeighborhoodGraph& graph, const FlowConfig& cfg,
                  const DivergenceSpec& spec);

}  // namespace uaflow
