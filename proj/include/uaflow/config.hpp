#pragma once

#include "uaflow/assignment_flow.hpp"
#include "uaflow/clustering.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace uaflow {

/// Flat key=value experiment configuration. Command-line --set overrides
/// win over file values. sigma accepts the spelling "inf".
struct ExperimentConfig {
  std::string input;             // PNG image or uaflow field file
  std::string feature = "auto";  // auto | rgb | gray | orientation | covariance
  std::string manifold = "auto"; // validated against the feature/input
  std::string divergence = "canonical";  // canonical | stein | stein-rot
  std::string dictionary;        // existing dictionary, used by `flow`
  std::string method = "soft-k-means";   // cluster: soft-k-means | em

  int k = 8;
  int neighborhood = 3;
  double alpha = 1.0;
  double sigma = std::numeric_limits<double>::infinity();
  double rho = 0.1;
  double h = 0.1;
  double renorm_eps = 1e-10;
  double entropy_tol = 1e-3;
  int max_steps = 10000;
  double inner_tol = 1e-10;
  int inner_max = 50;
  uint64_t seed = 0;

  double cluster_eps = 0.1;
  int cluster_max_iters = 200;
  double cluster_tol = 1e-10;

  int feature_window = 5;     // covariance / orientation scatter window
  double feature_eps = 1e-5;  // covariance regularization

  static ExperimentConfig load(const std::filesystem::path& path,
                               const std::vector<std::string>& overrides);
  void set(const std::string& key, const std::string& value);

  FlowConfig flow() const;
  ClusterOptions cluster_options() const;

  /// Resolved configuration as sorted key=value lines (the run manifest).
  std::string manifest() const;
};

/// Input loading per the config: decides between PNG feature extraction and
/// a serialized field, and returns the divergence spec to go with it.
struct LoadedProblem {
  FeatureField field;
  DivergenceSpec spec;
};
LoadedProblem load_problem(const ExperimentConfig& cfg);

}  // namespace uaflow
