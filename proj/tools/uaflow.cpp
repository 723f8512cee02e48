// Batch front end for dictionary initialization, feature-space clustering,
// the supervised assignment flow and the unsupervised assignment flow.
//
//   uaflow <init|cluster|flow|uaf> --config PATH [--set key=value ...] --out DIR
//
// Exit codes: 0 success, 2 config/input error, 3 numerical failure,
// 4 timeout.

#include "uaflow/config.hpp"
#include "uaflow/fixtures.hpp"
#include "uaflow/render.hpp"
#include "uaflow/serialize.hpp"
#include "uaflow/uaf.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace uaflow;

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  std::vector<std::string> sets;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config, "experiment config file")->required();
  cmd->add_option("--out", args.out, "output directory")->required();
  cmd->add_option("--set", args.sets, "override config entries (key=value)");
  cmd->add_flag("-v,--verbose", args.verbose, "print per-step diagnostics");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << text;
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg) {
  write_text(dir / "manifest.txt", cfg.manifest());
}

void write_trace(const fs::path& path, const FlowTrace& trace) {
  std::string text = "step entropy label_movement surviving\n";
  char line[128];
  for (const TraceRecord& r : trace.records) {
    std::snprintf(line, sizeof line, "%d %.17g %.17g %d\n", r.step, r.entropy, r.label_movement,
                  r.surviving);
    text += line;
  }
  write_text(path, text);
}

void write_dictionary_art(const fs::path& dir, const LabelDictionary& dict) {
  if (dict.manifold.kind() == ManifoldKind::Euclidean && dict.manifold.dim() == 3)
    save_rgb_dictionary_png(dir / "labels_rgb.png", dict);
  if (dict.manifold.kind() == ManifoldKind::Rotation3)
    save_trihedron_png(dir / "labels_trihedra.png", dict);
}

std::vector<int> nearest_labeling(const FeatureField& field, const LabelDictionary& dict,
                                  const DivergenceSpec& spec) {
  RowMat d = distance_matrix(field, dict, spec);
  std::vector<int> labeling(static_cast<size_t>(d.rows()));
  for (Index i = 0; i < d.rows(); ++i) {
    Index j;
    d.row(i).minCoeff(&j);
    labeling[static_cast<size_t>(i)] = static_cast<int>(j);
  }
  return labeling;
}

int cmd_init(const CommonArgs& args) {
  ExperimentConfig cfg = ExperimentConfig::load(args.config, args.sets);
  cfg.flow();  // validate numeric parameters up front
  LoadedProblem p = load_problem(cfg);
  fs::create_directories(args.out);
  LabelDictionary dict = k_center(p.field, cfg.k, cfg.seed, p.spec);
  save_dictionary(fs::path(args.out) / "labels.uld", dict);
  save_labeling_png(fs::path(args.out) / "labeling.png", nearest_labeling(p.field, dict, p.spec),
                    p.field.grid);
  write_dictionary_art(args.out, dict);
  write_manifest(args.out, cfg);
  return 0;
}

int cmd_cluster(const CommonArgs& args) {
  ExperimentConfig cfg = ExperimentConfig::load(args.config, args.sets);
  LoadedProblem p = load_problem(cfg);
  fs::create_directories(args.out);
  ClusterResult r = cluster(p.field, cfg.k, cfg.cluster_options(), p.spec);
  save_dictionary(fs::path(args.out) / "labels.uld", r.labels);
  save_labeling_png(fs::path(args.out) / "labeling.png", hard_labeling(r.assignment.p),
                    p.field.grid);
  write_dictionary_art(args.out, r.labels);
  write_manifest(args.out, cfg);
  if (args.verbose)
    std::cout << "cluster: " << r.iterations << " iterations, converged=" << r.converged << "\n";
  return 0;
}

int cmd_flow(const CommonArgs& args) {
  ExperimentConfig cfg = ExperimentConfig::load(args.config, args.sets);
  if (cfg.dictionary.empty()) throw InvalidArgument("flow: config needs dictionary=PATH");
  LoadedProblem p = load_problem(cfg);
  LabelDictionary dict = load_dictionary(cfg.dictionary);
  if (!(dict.manifold == p.field.manifold))
    throw InvalidArgument("flow: dictionary manifold does not match the input");
  fs::create_directories(args.out);
  NeighborhoodGraph graph = NeighborhoodGraph::square_window(p.field.grid, cfg.neighborhood);
  SupervisedResult r = run_supervised(p.field, dict, graph, cfg.flow(), p.spec);
  save_labeling_png(fs::path(args.out) / "labeling.png", r.labeling, p.field.grid);
  write_trace(fs::path(args.out) / "entropy_trace.txt", r.trace);
  write_manifest(args.out, cfg);
  if (args.verbose)
    std::cout << "flow: " << r.trace.steps << " steps, entropy "
              << r.trace.records.back().entropy << "\n";
  return 0;
}

int cmd_uaf(const CommonArgs& args) {
  ExperimentConfig cfg = ExperimentConfig::load(args.config, args.sets);
  LoadedProblem p = load_problem(cfg);
  fs::create_directories(args.out);
  LabelDictionary init = cfg.dictionary.empty() ? k_center(p.field, cfg.k, cfg.seed, p.spec)
                                                : load_dictionary(cfg.dictionary);
  NeighborhoodGraph graph = NeighborhoodGraph::square_window(p.field.grid, cfg.neighborhood);
  UafResult r = run_uaf(p.field, init, graph, cfg.flow(), p.spec);
  save_dictionary(fs::path(args.out) / "labels.uld", r.labels);
  save_labeling_png(fs::path(args.out) / "labeling.png", r.labeling, p.field.grid);
  save_histogram_png(fs::path(args.out) / "histogram.png", r.stats.mass);
  write_dictionary_art(args.out, r.labels);
  write_trace(fs::path(args.out) / "entropy_trace.txt", r.trace);
  std::string stats = "surviving " + std::to_string(r.stats.surviving) + "\n";
  stats += "threshold " + std::to_string(r.stats.survive_threshold) + "\n";
  for (Index j = 0; j < r.stats.mass.size(); ++j) {
    char line[64];
    std::snprintf(line, sizeof line, "mass %d %.17g\n", static_cast<int>(j), r.stats.mass[j]);
    stats += line;
  }
  write_text(fs::path(args.out) / "stats.txt", stats);
  write_manifest(args.out, cfg);
  if (args.verbose)
    for (const TraceRecord& t : r.trace.records)
      std::cout << "step " << t.step << " entropy " << t.entropy << " moved " << t.label_movement
                << " surviving " << t.surviving << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unsupervised assignment flow"};
  app.require_subcommand(1);
  CommonArgs args;
  CLI::App* init = app.add_subcommand("init", "k-center dictionary + nearest-neighbor labeling");
  CLI::App* clus = app.add_subcommand("cluster", "feature-space clustering (soft-k-means or EM)");
  CLI::App* flow = app.add_subcommand("flow", "supervised assignment flow with a fixed dictionary");
  CLI::App* uaf = app.add_subcommand("uaf", "joint label and assignment evolution");
  for (CLI::App* cmd : {init, clus, flow, uaf}) add_common(cmd, args);
  CLI11_PARSE(app, argc, argv);
  try {
    if (init->parsed()) return cmd_init(args);
    if (clus->parsed()) return cmd_cluster(args);
    if (flow->parsed()) return cmd_flow(args);
    if (uaf->parsed()) return cmd_uaf(args);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Timeout& e) {
    std::cerr << "timeout: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
