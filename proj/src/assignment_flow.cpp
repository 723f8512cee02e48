#include "uaflow/assignment_flow.hpp"

#include "uaflow/simplex.hpp"

#include <cmath>

namespace uaflow {

namespace {

// Explicit scalar loops; see the note in simplex.cpp about reproducible
// association order.

inline double seq_sum(const double* x, Index n) {
  double s = 0.0;
  for (Index i = 0; i < n; ++i) s += x[i];
  return s;
}

/// e^{-(D_ij - min_j D_ij)/rho} per row; shared by likelihood and the step
/// kernels so both produce identical bits.
RowMat guarded_exponentials(const RowMat& d, double rho) {
  RowMat e(d.rows(), d.cols());
  for (Index i = 0; i < d.rows(); ++i) {
    const double* di = d.row(i).data();
    double* ei = e.row(i).data();
    double lo = di[0];
    for (Index j = 1; j < d.cols(); ++j) lo = std::min(lo, di[j]);
    for (Index j = 0; j < d.cols(); ++j) ei[j] = std::exp((lo - di[j]) / rho);
  }
  return e;
}

RowMat likelihood_from_exponentials(const RowMat& w, const RowMat& e) {
  RowMat l(w.rows(), w.cols());
  for (Index i = 0; i < w.rows(); ++i) {
    const double* wi = w.row(i).data();
    const double* ei = e.row(i).data();
    double* li = l.row(i).data();
    for (Index j = 0; j < w.cols(); ++j) li[j] = wi[j] * ei[j];
    double s = seq_sum(li, w.cols());
    for (Index j = 0; j < w.cols(); ++j) li[j] /= s;
  }
  return l;
}

/// V <- h P_{T0} S(lift_W(V)); the body of both Euler schemes.
void inner_update(const RowMat& w, const RowMat& e, const NeighborhoodGraph& graph, double h,
                  const RowMat& v, RowMat& lifted, RowMat& vnext) {
  lift_rows(w, v, lifted);
  RowMat l = likelihood_from_exponentials(lifted, e);
  RowMat s = similarity(l, graph);
  vnext.resize(s.rows(), s.cols());
  for (Index i = 0; i < s.rows(); ++i) {
    const double* si = s.row(i).data();
    double* vi = vnext.row(i).data();
    double mean = seq_sum(si, s.cols()) / static_cast<double>(s.cols());
    for (Index j = 0; j < s.cols(); ++j) vi[j] = h * (si[j] - mean);
  }
}

}  // namespace

void FlowConfig::validate() const {
  if (!(rho > 0.0)) throw InvalidArgument("flow config: rho must be positive");
  if (!(sigma > 0.0)) throw InvalidArgument("flow config: sigma must be positive or inf");
  if (alpha < 0.0) throw InvalidArgument("flow config: alpha must be nonnegative");
  if (!(h > 0.0)) throw InvalidArgument("flow config: h must be positive");
  if (!(renorm_eps > 0.0) || renorm_eps >= 1.0)
    throw InvalidArgument("flow config: renorm_eps must be in (0, 1)");
  if (!(entropy_tol > 0.0)) throw InvalidArgument("flow config: entropy_tol must be positive");
  if (max_steps < 1) throw InvalidArgument("flow config: max_steps must be >= 1");
  if (!(inner_tol > 0.0)) throw InvalidArgument("flow config: inner_tol must be positive");
  if (inner_max < 1) throw InvalidArgument("flow config: inner_max must be >= 1");
}

RowMat distance_matrix(const FeatureField& data, const LabelDictionary& labels,
                       const DivergenceSpec& spec) {
  return pairwise_distances(data, labels, spec).d;
}

PairwiseDistances pairwise_distances(const FeatureField& data, const LabelDictionary& labels,
                                     const DivergenceSpec& spec) {
  if (!(data.manifold == labels.manifold))
    throw InvalidArgument("distance_matrix: manifold mismatch");
  PairwiseDistances out;
  out.d.resize(data.size(), labels.size());
  if (spec.kind == DivergenceKind::SteinRotationInvariant) {
    out.has_angles = true;
    stein_rotation_pairwise(data.points, labels.labels, spec.blocks, spec.angle_grid,
                            spec.angle_tol, out.d, out.angle);
    return out;
  }
  for (Index i = 0; i < data.size(); ++i)
    for (Index j = 0; j < labels.size(); ++j)
      out.d(i, j) = divergence(spec, data.manifold, data.points.row(i), labels.labels.row(j));
  return out;
}

RowMat likelihood(const RowMat& w, const RowMat& d, double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("likelihood: rho must be positive");
  if (w.rows() != d.rows() || w.cols() != d.cols())
    throw InvalidArgument("likelihood: shape mismatch");
  return likelihood_from_exponentials(w, guarded_exponentials(d, rho));
}

RowMat similarity(const RowMat& l, const NeighborhoodGraph& graph) {
  if (static_cast<int>(l.rows()) != graph.num_pixels())
    throw InvalidArgument("similarity: graph does not match the state");
  const Index n = l.rows(), cols = l.cols();
  // log-space accumulation, relative to the center pixel so that constant
  // neighborhoods reproduce their value without rounding
  RowMat ln(n, cols);
  const double floor = std::numeric_limits<double>::min();
  for (Index i = 0; i < n; ++i) {
    const double* li = l.row(i).data();
    double* di = ln.row(i).data();
    for (Index j = 0; j < cols; ++j) di[j] = std::log(std::max(li[j], floor));
  }
  RowMat s(n, cols);
  Vec acc(cols);
  for (Index i = 0; i < n; ++i) {
    auto ns = graph.neighbors(static_cast<int>(i));
    auto ws = graph.weights(static_cast<int>(i));
    acc.setZero();
    const double* lni = ln.row(i).data();
    for (size_t k = 0; k < ns.size(); ++k) {
      if (ns[k] == static_cast<int>(i)) continue;  // zero contribution by construction
      const double* lnk = ln.row(ns[k]).data();
      const double wk = ws[k];
      for (Index j = 0; j < cols; ++j) acc[j] += wk * (lnk[j] - lni[j]);
    }
    const double* li = l.row(i).data();
    double* si = s.row(i).data();
    for (Index j = 0; j < cols; ++j) si[j] = li[j] * std::exp(acc[j]);
    double total = seq_sum(si, cols);
    for (Index j = 0; j < cols; ++j) si[j] /= total;
  }
  return s;
}

RowMat flow_field(const RowMat& w, const RowMat& s) {
  RowMat out;
  replicator_rows(w, s, out);
  return out;
}

AssignmentStepStats implicit_assignment_step(RowMat& w, const RowMat& d,
                                             const NeighborhoodGraph& graph,
                                             const FlowConfig& cfg) {
  RowMat e = guarded_exponentials(d, cfg.rho);
  RowMat v = RowMat::Zero(w.rows(), w.cols());
  RowMat lifted, vnext;
  AssignmentStepStats stats;
  for (int it = 0; it < cfg.inner_max; ++it) {
    inner_update(w, e, graph, cfg.h, v, lifted, vnext);
    stats.inner_iterations = it + 1;
    stats.residual = (vnext - v).cwiseAbs().maxCoeff();
    v.swap(vnext);
    if (stats.residual < cfg.inner_tol) break;
  }
  if (stats.residual >= cfg.inner_tol) {
    // non-convergent inner loop: take the explicit step instead
    stats.explicit_fallback = true;
    v = RowMat::Zero(w.rows(), w.cols());
    inner_update(w, e, graph, cfg.h, v, lifted, vnext);
    v.swap(vnext);
  }
  lift_rows(w, v, lifted);
  w.swap(lifted);
  renormalize_rows(w, cfg.renorm_eps);
  return stats;
}

void explicit_assignment_step(RowMat& w, const RowMat& d, const NeighborhoodGraph& graph,
                              const FlowConfig& cfg) {
  RowMat e = guarded_exponentials(d, cfg.rho);
  RowMat v = RowMat::Zero(w.rows(), w.cols());
  RowMat lifted, vnext;
  inner_update(w, e, graph, cfg.h, v, lifted, vnext);
  lift_rows(w, vnext, lifted);
  w.swap(lifted);
  renormalize_rows(w, cfg.renorm_eps);
}

std::vector<int> hard_labeling(const RowMat& w) {
  std::vector<int> out(static_cast<size_t>(w.rows()));
  for (Index i = 0; i < w.rows(); ++i) {
    Index j;
    w.row(i).maxCoeff(&j);
    out[static_cast<size_t>(i)] = static_cast<int>(j);
  }
  return out;
}

SupervisedResult run_supervised(const FeatureField& data, const LabelDictionary& labels,
                                const NeighborhoodGraph& graph, const FlowConfig& cfg,
                                const DivergenceSpec& spec) {
  cfg.validate();
  labels.validate();
  SupervisedResult res;
  RowMat d = distance_matrix(data, labels, spec);
  res.w = barycenter_state(data.size(), labels.size());
  double entropy = average_entropy(res.w);
  res.trace.records.push_back({0, entropy, 0.0, static_cast<int>(labels.size())});
  int step = 0;
  while (entropy >= cfg.entropy_tol) {
    if (step >= cfg.max_steps)
      throw Timeout("assignment flow did not reach the entropy threshold within " +
                    std::to_string(cfg.max_steps) + " steps (entropy " + std::to_string(entropy) +
                    ")");
    AssignmentStepStats stats = implicit_assignment_step(res.w, d, graph, cfg);
    if (stats.explicit_fallback) ++res.trace.explicit_fallbacks;
    ++step;
    double next = average_entropy(res.w);
    if (cfg.monitor_entropy && next > entropy + 1e-9)
      throw NumericalFailure("average entropy increased at step " + std::to_string(step));
    entropy = next;
    res.trace.records.push_back({step, entropy, 0.0, static_cast<int>(labels.size())});
  }
  res.trace.steps = step;
  res.trace.converged = true;
  res.labeling = hard_labeling(res.w);
  return res;
}

}  // namespace uaflow
