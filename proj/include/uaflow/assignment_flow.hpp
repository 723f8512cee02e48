#pragma once

#include "uaflow/divergence.hpp"
#include "uaflow/field.hpp"
#include "uaflow/graph.hpp"

#include <limits>
#include <vector>

namespace uaflow {

struct FlowConfig {
  double rho = 0.1;    // distance normalization of the likelihood map
  double sigma = std::numeric_limits<double>::infinity();  // coupling temperature; inf = CFa
  double alpha = 1.0;  // relative speed of label vs assignment evolution
  double h = 0.1;      // integration step size
  double renorm_eps = 1e-10;
  double entropy_tol = 1e-3;
  int max_steps = 10000;
  double inner_tol = 1e-10;  // implicit fixed point, sup norm on V
  int inner_max = 50;
  bool monitor_entropy = false;  // fail the run on an entropy increase

  void validate() const;
};

/// D_ij = D(z_i, m_j).
RowMat distance_matrix(const FeatureField& data, const LabelDictionary& labels,
                       const DivergenceSpec& spec);

/// Distance matrix plus, for the rotation-invariant Stein divergence, the
/// optimal conjugation angle per pair (reused by the label flow).
struct PairwiseDistances {
  RowMat d;
  RowMat angle;
  bool has_angles = false;
};
PairwiseDistances pairwise_distances(const FeatureField& data, const LabelDictionary& labels,
                                     const DivergenceSpec& spec);

/// Likelihood vectors L_i = W_i e^{-D_i / rho} / <W_i, e^{-D_i / rho}>.
/// The exponent is guarded by subtracting the row minimum of D, which leaves
/// the value unchanged.
RowMat likelihood(const RowMat& w, const RowMat& d, double rho);

/// Similarity vectors: per-pixel weighted geometric means of neighborhood
/// likelihood vectors.
RowMat similarity(const RowMat& l, const NeighborhoodGraph& graph);

/// Replicator vector field rows R_{W_i}(S_i).
RowMat flow_field(const RowMat& w, const RowMat& s);

struct AssignmentStepStats {
  int inner_iterations = 0;
  bool explicit_fallback = false;
  double residual = 0.0;
};

/// Geometric implicit Euler step for the assignment component: solves
/// V = h P_{T0} S(lift_W(V)) by fixed point iteration from V = 0, then
/// returns lift_W(V) renormalized with renorm_eps. Falls back to the
/// explicit step (the first iterate) when the inner loop does not converge.
AssignmentStepStats implicit_assignment_step(RowMat& w, const RowMat& d,
                                             const NeighborhoodGraph& graph,
                                             const FlowConfig& cfg);

/// Explicit geometric Euler step: lift_W(h P_{T0} S(W)), renormalized.
void explicit_assignment_step(RowMat& w, const RowMat& d, const NeighborhoodGraph& graph,
                              const FlowConfig& cfg);

struct TraceRecord {
  int step;
  double entropy;
  double label_movement;
  int surviving;
};

struct FlowTrace {
  std::vector<TraceRecord> records;
  int steps = 0;
  bool converged = false;
  int explicit_fallbacks = 0;
};

struct SupervisedResult {
  RowMat w;
  std::vector<int> labeling;  // argmax per pixel
  FlowTrace trace;
};

/// Integrates the assignment flow from the barycenter with a fixed label
/// dictionary until the average entropy drops below entropy_tol. Throws
/// Timeout when the step cap is reached first.
SupervisedResult run_supervised(const FeatureField& data, const LabelDictionary& labels,
                                const NeighborhoodGraph& graph, const FlowConfig& cfg,
                                const DivergenceSpec& spec);

/// argmax per row.
std::vector<int> hard_labeling(const RowMat& w);

}  // namespace uaflow
