#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace uaflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Row-major matrix; per-pixel rows are contiguous in memory.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ConstVecRef = Eigen::Ref<const Eigen::VectorXd>;
using VecRef = Eigen::Ref<Eigen::VectorXd>;

using Index = Eigen::Index;

// Error taxonomy. The CLI maps these onto exit codes:
// InvalidArgument -> 2, Timeout -> 4, everything else numerical -> 3.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotInDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Timeout : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compensated (Kahan) summation; used where invariant checks demand
/// accuracy independent of the association order.
inline double kahan_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

inline double kahan_sum(const Vec& v) {
  return kahan_sum(std::span<const double>(v.data(), static_cast<size_t>(v.size())));
}

namespace rng {

inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace rng

/// Deterministic generator. Gaussians come from Box-Muller so the stream
/// does not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {
    // warm up so nearby seeds decorrelate
    rng::splitmix64(state_);
  }

  /// Independent per-item stream; parallel generation equals sequential.
  static Rng stream(uint64_t seed, uint64_t index) {
    uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    return Rng(s);
  }

  uint64_t next_u64() { return rng::splitmix64(state_); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n).
  uint64_t uniform_index(uint64_t n) { return next_u64() % n; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace uaflow
