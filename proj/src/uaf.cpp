#include "uaflow/uaf.hpp"

#include "uaflow/simplex.hpp"

#include <cmath>

namespace uaflow {

CouplingWeights coupling_weights(const RowMat& w, const RowMat& d, double sigma) {
  if (!(sigma > 0.0)) throw InvalidArgument("coupling_weights: sigma must be positive or inf");
  CouplingWeights out;
  RowMat l;
  if (std::isinf(sigma)) {
    l = w;  // L^inf_ij = W_ij exactly
  } else {
    if (w.rows() != d.rows() || w.cols() != d.cols())
      throw InvalidArgument("coupling_weights: shape mismatch");
    l = likelihood(w, d, sigma);
  }
  out.nu.resize(l.cols(), l.rows());
  out.empty.assign(static_cast<size_t>(l.cols()), 0);
  for (Index j = 0; j < l.cols(); ++j) {
    double s = l.col(j).sum();
    if (s <= 0.0) {
      out.empty[static_cast<size_t>(j)] = 1;
      out.nu.row(j).setZero();
    } else {
      out.nu.row(j) = l.col(j).transpose() / s;
    }
  }
  return out;
}

RowMat label_field(const FeatureField& data, const LabelDictionary& labels,
                   const CouplingWeights& nu, double alpha, const DivergenceSpec& spec,
                   const RowMat* angles) {
  if (nu.nu.rows() != labels.size() || nu.nu.cols() != data.size())
    throw InvalidArgument("label_field: coupling weight shape mismatch");
  RowMat field = RowMat::Zero(labels.size(), labels.labels.cols());
  if (alpha == 0.0) return field;
  Vec grad(labels.labels.cols());
  for (Index j = 0; j < labels.size(); ++j) {
    if (nu.empty[static_cast<size_t>(j)]) continue;
    auto row = field.row(j);
    for (Index i = 0; i < data.size(); ++i) {
      double weight = nu.nu(j, i);
      if (weight == 0.0) continue;
      const double* known = angles ? &(*angles)(i, j) : nullptr;
      divergence_rgrad2(spec, data.manifold, data.points.row(i), labels.labels.row(j), grad,
                        known);
      row -= (alpha * weight) * grad.transpose();
    }
  }
  return field;
}

void prototype_euler_step(LabelDictionary& labels, const RowMat& field, double h) {
  if (!(h > 0.0)) throw InvalidArgument("prototype_euler_step: h must be positive");
  if (field.rows() != labels.size() || field.cols() != labels.labels.cols())
    throw InvalidArgument("prototype_euler_step: field shape mismatch");
  Vec updated(labels.labels.cols());
  for (Index j = 0; j < labels.size(); ++j) {
    if ((field.row(j).array() == 0.0).all()) continue;  // frozen or stationary label
    Vec step = h * field.row(j).transpose();
    try {
      labels.manifold.exp(labels.labels.row(j), step, updated);
    } catch (const std::exception& e) {
      throw NumericalFailure("prototype update of label " + std::to_string(j) + " failed: " +
                             e.what());
    }
    if (!labels.manifold.is_valid_point(updated))
      throw NumericalFailure("prototype update left the manifold at label " + std::to_string(j));
    labels.labels.row(j) = updated;
  }
}

namespace {

double label_movement(const FeatureManifold& m, const RowMat& before, const RowMat& after) {
  double worst = 0.0;
  for (Index j = 0; j < before.rows(); ++j) {
    double d;
    if (m.kind() == ManifoldKind::Spd) {
      d = (before.row(j) - after.row(j)).norm();  // Frobenius proxy, diagnostics only
    } else {
      d = m.distance(before.row(j), after.row(j));
    }
    worst = std::max(worst, d);
  }
  return worst;
}

int count_surviving(const std::vector<int>& labeling, Index labels, double threshold, Vec& mass) {
  mass = Vec::Zero(labels);
  for (int l : labeling) mass[l] += 1.0;
  mass /= static_cast<double>(labeling.size());
  int surviving = 0;
  for (Index j = 0; j < labels; ++j)
    if (mass[j] > threshold) ++surviving;
  return surviving;
}

}  // namespace

UafResult run_uaf(const FeatureField& data, const LabelDictionary& init,
                  const NeighborhoodGraph& graph, const FlowConfig& cfg,
                  const DivergenceSpec& spec) {
  cfg.validate();
  init.validate();
  if (!(data.manifold == init.manifold)) throw InvalidArgument("run_uaf: manifold mismatch");
  if (graph.num_pixels() != data.size()) throw InvalidArgument("run_uaf: graph mismatch");

  UafResult res;
  res.labels = init;
  res.w = barycenter_state(data.size(), init.size());
  res.stats.ever_empty.assign(static_cast<size_t>(init.size()), 0);

  PairwiseDistances pd = pairwise_distances(data, res.labels, spec);
  double entropy = average_entropy(res.w);
  {
    Vec mass;
    int surviving = count_surviving(hard_labeling(res.w), init.size(),
                                    res.stats.survive_threshold, mass);
    res.trace.records.push_back({0, entropy, 0.0, surviving});
  }
  int step = 0;
  while (entropy >= cfg.entropy_tol) {
    if (step >= cfg.max_steps)
      throw Timeout("unsupervised assignment flow did not reach the entropy threshold within " +
                    std::to_string(cfg.max_steps) + " steps (entropy " + std::to_string(entropy) +
                    ")");
    // labels move first, against W(t); assignments then use the new labels
    CouplingWeights nu = coupling_weights(res.w, pd.d, cfg.sigma);
    for (Index j = 0; j < init.size(); ++j)
      if (nu.empty[static_cast<size_t>(j)]) res.stats.ever_empty[static_cast<size_t>(j)] = 1;
    RowMat before = res.labels.labels;
    if (cfg.alpha > 0.0) {
      RowMat g = label_field(data, res.labels, nu, cfg.alpha, spec,
                             pd.has_angles ? &pd.angle : nullptr);
      prototype_euler_step(res.labels, g, cfg.h);
      pd = pairwise_distances(data, res.labels, spec);
    }
    AssignmentStepStats stats = implicit_assignment_step(res.w, pd.d, graph, cfg);
    if (stats.explicit_fallback) ++res.trace.explicit_fallbacks;
    ++step;
    double next = average_entropy(res.w);
    if (cfg.monitor_entropy && next > entropy + 1e-9)
      throw NumericalFailure("average entropy increased at step " + std::to_string(step));
    entropy = next;
    res.labeling = hard_labeling(res.w);
    int surviving = count_surviving(res.labeling, init.size(), res.stats.survive_threshold,
                                    res.stats.mass);
    res.trace.records.push_back(
        {step, entropy, label_movement(data.manifold, before, res.labels.labels), surviving});
  }
  res.trace.steps = step;
  res.trace.converged = true;
  res.labeling = hard_labeling(res.w);
  res.stats.surviving =
      count_surviving(res.labeling, init.size(), res.stats.survive_threshold, res.stats.mass);
  return res;
}

}  // namespace uaflow
