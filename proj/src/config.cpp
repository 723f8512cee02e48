#include "uaflow/config.hpp"

#include "uaflow/png_io.hpp"
#include "uaflow/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace uaflow {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "Inf" || v == "INF") return std::numeric_limits<double>::infinity();
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument("config: cannot parse " + key + "=" + v + " as a real");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw InvalidArgument("config: cannot parse " + key + "=" + v + " as an integer");
  }
}

std::string format_real(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "input") input = value;
  else if (key == "feature") feature = value;
  else if (key == "manifold") manifold = value;
  else if (key == "divergence") divergence = value;
  else if (key == "dictionary") dictionary = value;
  else if (key == "method") method = value;
  else if (key == "k") k = parse_int(key, value);
  else if (key == "neighborhood") neighborhood = parse_int(key, value);
  else if (key == "alpha") alpha = parse_real(key, value);
  else if (key == "sigma") sigma = parse_real(key, value);
  else if (key == "rho") rho = parse_real(key, value);
  else if (key == "h") h = parse_real(key, value);
  else if (key == "renorm_eps") renorm_eps = parse_real(key, value);
  else if (key == "entropy_tol") entropy_tol = parse_real(key, value);
  else if (key == "max_steps") max_steps = parse_int(key, value);
  else if (key == "inner_tol") inner_tol = parse_real(key, value);
  else if (key == "inner_max") inner_max = parse_int(key, value);
  else if (key == "seed") seed = static_cast<uint64_t>(std::stoull(value));
  else if (key == "cluster_eps") cluster_eps = parse_real(key, value);
  else if (key == "cluster_max_iters") cluster_max_iters = parse_int(key, value);
  else if (key == "cluster_tol") cluster_tol = parse_real(key, value);
  else if (key == "feature_window") feature_window = parse_int(key, value);
  else if (key == "feature_eps") feature_eps = parse_real(key, value);
  else throw InvalidArgument("config: unknown key '" + key + "'");
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path,
                                        const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config " + path.string());
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  for (const std::string& o : overrides) {
    size_t eq = o.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + o + "'");
    cfg.set(trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
  }
  return cfg;
}

FlowConfig ExperimentConfig::flow() const {
  FlowConfig f;
  f.rho = rho;
  f.sigma = sigma;
  f.alpha = alpha;
  f.h = h;
  f.renorm_eps = renorm_eps;
  f.entropy_tol = entropy_tol;
  f.max_steps = max_steps;
  f.inner_tol = inner_tol;
  f.inner_max = inner_max;
  f.validate();
  return f;
}

ClusterOptions ExperimentConfig::cluster_options() const {
  ClusterOptions o;
  if (method == "soft-k-means") o.method = ClusterMethod::SoftKMeans;
  else if (method == "em") o.method = ClusterMethod::Em;
  else throw InvalidArgument("config: method must be soft-k-means or em");
  o.eps = cluster_eps;
  o.max_iters = cluster_max_iters;
  o.tol = cluster_tol;
  o.seed = seed;
  return o;
}

std::string ExperimentConfig::manifest() const {
  std::ostringstream os;
  os << "alpha=" << format_real(alpha) << "\n";
  os << "cluster_eps=" << format_real(cluster_eps) << "\n";
  os << "cluster_max_iters=" << cluster_max_iters << "\n";
  os << "cluster_tol=" << format_real(cluster_tol) << "\n";
  os << "dictionary=" << dictionary << "\n";
  os << "divergence=" << divergence << "\n";
  os << "entropy_tol=" << format_real(entropy_tol) << "\n";
  os << "feature=" << feature << "\n";
  os << "feature_eps=" << format_real(feature_eps) << "\n";
  os << "feature_window=" << feature_window << "\n";
  os << "h=" << format_real(h) << "\n";
  os << "inner_max=" << inner_max << "\n";
  os << "inner_tol=" << format_real(inner_tol) << "\n";
  os << "input=" << input << "\n";
  os << "k=" << k << "\n";
  os << "manifold=" << manifold << "\n";
  os << "max_steps=" << max_steps << "\n";
  os << "method=" << method << "\n";
  os << "neighborhood=" << neighborhood << "\n";
  os << "renorm_eps=" << format_real(renorm_eps) << "\n";
  os << "rho=" << format_real(rho) << "\n";
  os << "seed=" << seed << "\n";
  os << "sigma=" << format_real(sigma) << "\n";
  return os.str();
}

LoadedProblem load_problem(const ExperimentConfig& cfg) {
  if (cfg.input.empty()) throw InvalidArgument("config: input is required");
  LoadedProblem out;
  std::string feature = cfg.feature;
  if (ends_with(cfg.input, ".uff") || ends_with(cfg.input, ".field")) {
    out.field = load_field(cfg.input);
  } else {
    RawImage img = load_png(cfg.input);
    if (feature == "auto") feature = (img.channels == 1) ? "gray" : "rgb";
    if (feature == "rgb" || feature == "gray") {
      out.field = euclidean_field(img);
    } else if (feature == "orientation") {
      out.field = orientation_field(img, cfg.feature_window).field;
    } else if (feature == "covariance") {
      out.field = covariance_field(img, cfg.feature_window, cfg.feature_eps);
    } else {
      throw InvalidArgument("config: unknown feature '" + feature + "'");
    }
  }
  if (cfg.manifold != "auto" && cfg.manifold != manifold_tag(out.field.manifold))
    throw InvalidArgument("config: manifold '" + cfg.manifold + "' does not match the input ('" +
                          manifold_tag(out.field.manifold) + "')");

  if (cfg.divergence == "canonical") {
    out.spec = DivergenceSpec::canonical();
  } else if (cfg.divergence == "stein") {
    out.spec = DivergenceSpec::stein();
  } else if (cfg.divergence == "stein-rot") {
    if (out.field.manifold.kind() != ManifoldKind::Spd || out.field.manifold.dim() % 6 != 0)
      throw InvalidArgument("config: stein-rot requires covariance descriptors (spd, s = 6c)");
    out.spec = DivergenceSpec::stein_rotation_invariant({out.field.manifold.dim() / 6});
  } else {
    throw InvalidArgument("config: unknown divergence '" + cfg.divergence + "'");
  }
  if (out.field.manifold.kind() == ManifoldKind::Spd &&
      out.spec.kind == DivergenceKind::CanonicalSquaredDistance)
    throw InvalidArgument("config: spd features require divergence=stein or stein-rot");
  return out;
}

}  // namespace uaflow
