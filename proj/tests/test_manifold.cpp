#include "uaflow/manifold.hpp"

#include "uaflow/divergence.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace uaflow;
using namespace testutil;

TEST_CASE("rodrigues exponential") {
  // 90 degrees about z
  Eigen::Matrix3d oz = so3_hat(Eigen::Vector3d(0, 0, 1));
  Eigen::Matrix3d r = so3_expm(M_PI / 2.0 * oz);
  CHECK(std::abs(r(0, 0)) <= 1e-15);
  CHECK(r(1, 0) == doctest::Approx(1.0));
  CHECK(std::abs(r(2, 0)) <= 1e-15);

  CHECK((so3_expm(Eigen::Matrix3d::Zero()) - Eigen::Matrix3d::Identity()).norm() == 0.0);

  auto gen = make_gen(31);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::Vector3d n(g(gen), g(gen), g(gen));
    Eigen::Matrix3d e = so3_expm(so3_hat(n));
    CHECK((e.transpose() * e - Eigen::Matrix3d::Identity()).norm() <= 1e-12);
  }

  // expm(omega) -> I as the angle shrinks; the sinc guard keeps it smooth
  for (double a : {1e-3, 1e-6, 1e-9, 1e-14, 0.0}) {
    Eigen::Matrix3d e = so3_expm(a * oz);
    CHECK((e - Eigen::Matrix3d::Identity()).norm() <= std::sqrt(2.0) * a * 1.0000001);
  }
}

TEST_CASE("so3 log and roundtrips") {
  auto gen = make_gen(37);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> angle(0.0, 3.0);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::Vector3d axis(g(gen), g(gen), g(gen));
    axis.normalize();
    double a = angle(gen);
    Eigen::Matrix3d omega = so3_hat(axis * a);
    Eigen::Matrix3d r = so3_expm(omega);
    CHECK((so3_expm(so3_logm(r)) - r).norm() <= 1e-10);
    CHECK((so3_logm(r) - omega).norm() <= 1e-10);
  }
  // near-pi branch
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d axis(g(gen), g(gen), g(gen));
    axis.normalize();
    double a = M_PI - 1e-5 * (trial + 1);
    Eigen::Matrix3d r = so3_expm(so3_hat(axis * a));
    CHECK((so3_expm(so3_logm(r)) - r).norm() <= 1e-9);
  }
  // antipodal pair is out of domain
  Eigen::Matrix3d half_turn = so3_expm(so3_hat(Eigen::Vector3d(M_PI, 0, 0)));
  CHECK_THROWS_AS(so3_logm(half_turn), NotInDomain);
}

TEST_CASE("so3 fast distance equals the log norm") {
  auto gen = make_gen(41);
  FeatureManifold m = FeatureManifold::rotation3();
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix3d r1 = random_rotation(gen, 3.0);
    Eigen::Matrix3d r2 = random_rotation(gen, 3.0);
    if (so3_rotation_angle(r1, r2) > 3.0) continue;
    double fast = std::sqrt(2.0) * so3_rotation_angle(r1, r2);
    double via_log = so3_logm((r1.transpose() * r2).eval()).norm();
    CHECK(std::abs(fast - via_log) <= 1e-8);
    CHECK(m.distance(pack_matrix(r1), pack_matrix(r2)) == fast);
  }
}

TEST_CASE("manifold exp/log pairs") {
  auto gen = make_gen(43);
  for (FeatureManifold m : {FeatureManifold::euclidean(3), FeatureManifold::orientation(),
                            FeatureManifold::rotation3()}) {
    for (int trial = 0; trial < 200; ++trial) {
      Vec p = random_point(gen, m);
      Vec q = random_point(gen, m);
      Vec t(m.packed_size()), back(m.packed_size());
      m.log(p, q, t);
      m.exp(p, t, back);
      if (m.kind() == ManifoldKind::Orientation) {
        CHECK(std::abs(s1_diff(back[0], q[0])) <= 1e-12);
      } else {
        CHECK((back - q).cwiseAbs().maxCoeff() <= 1e-10);
      }
      m.log(p, p, t);
      CHECK(t.cwiseAbs().maxCoeff() <= 1e-12);
      m.exp(p, Vec::Zero(m.packed_size()), back);
      CHECK((back - p).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("orientation wrapping") {
  // 3.1 is the class of 3.1 - pi, so the difference wraps through pi
  CHECK(s1_diff(3.1, 0.1) == doctest::Approx(3.0 - M_PI).epsilon(1e-12));
  FeatureManifold m = FeatureManifold::orientation();
  Vec p(1), q(1), t(1);
  p << 0.1;
  q << s1_wrap(3.1);
  m.log(p, q, t);
  CHECK(t[0] == doctest::Approx(3.0 - M_PI).epsilon(1e-12));
  // distance stays within [0, pi/2]
  auto gen = make_gen(47);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int trial = 0; trial < 500; ++trial) {
    double d = std::abs(s1_diff(u(gen), u(gen)));
    CHECK(d >= 0.0);
    CHECK(d <= M_PI / 2.0 + 1e-15);
  }
}

TEST_CASE("spd exponential map") {
  auto gen = make_gen(53);
  FeatureManifold m = FeatureManifold::spd(3);
  // scalar reduction: exp_x(u) = x e^{u/x}
  FeatureManifold m1 = FeatureManifold::spd(1);
  Vec x1(1), u1(1), out1(1);
  x1 << 2.0;
  u1 << 0.6;
  m1.exp(x1, u1, out1);
  CHECK(out1[0] == doctest::Approx(2.0 * std::exp(0.3)).epsilon(1e-14));

  for (int trial = 0; trial < 100; ++trial) {
    Mat x = random_spd(gen, 3);
    Vec px = pack_matrix(x);
    Vec v = 0.5 * random_unit_tangent(gen, m, px);
    Vec out(9);
    m.exp(px, v, out);
    CHECK(m.is_valid_point(out));
    // metric consistency against the canonical distance oracle:
    // d_R(x, exp_x(t v))^2 = t^2 <v, v>_x + O(t^4)
    double t = 1e-3;
    m.exp(px, Vec(t * v), out);
    double d2 = 2.0 * spd_canonical_divergence(x, unpack_matrix(out, 3));
    double vv = m.metric(px, v, v);
    CHECK(d2 == doctest::Approx(t * t * vv).epsilon(1e-6));
  }
}

TEST_CASE("point validation") {
  FeatureManifold so3 = FeatureManifold::rotation3();
  Vec good = pack_matrix(Eigen::Matrix3d::Identity());
  CHECK(so3.is_valid_point(good));
  Vec reflected = good;
  reflected[0] = -1.0;  // det -1
  CHECK_FALSE(so3.is_valid_point(reflected));

  FeatureManifold spd = FeatureManifold::spd(2);
  Mat bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_FALSE(spd.is_valid_point(pack_matrix(bad)));
  Mat asym(2, 2);
  asym << 1.0, 1e-6, 0.0, 1.0;
  CHECK_FALSE(spd.is_valid_point(pack_matrix(asym)));
  CHECK(spd.is_valid_point(pack_matrix(Mat::Identity(2, 2))));
  CHECK_THROWS_AS(spd.validate_point(pack_matrix(bad)), NumericalFailure);
}
