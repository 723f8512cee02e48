#include "uaflow/assignment_flow.hpp"

#include "uaflow/fixtures.hpp"
#include "uaflow/simplex.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace uaflow;
using namespace testutil;

namespace {

FeatureField euclidean_grid(const RowMat& pts, GridShape grid) {
  FeatureField f;
  f.manifold = FeatureManifold::euclidean(static_cast<int>(pts.cols()));
  f.grid = grid;
  f.points = pts;
  return f;
}

}  // namespace

TEST_CASE("distance matrix") {
  DivergenceSpec spec = DivergenceSpec::canonical();
  RowMat pts(1, 2);
  pts << 1.0, 0.0;
  FeatureField field = euclidean_grid(pts, {1, 1});
  LabelDictionary dict;
  dict.manifold = field.manifold;
  dict.labels = RowMat::Zero(1, 2);
  RowMat d = distance_matrix(field, dict, spec);
  CHECK(d(0, 0) == 0.5);

  auto gen = make_gen(151);
  RowMat data(6, 3);
  for (int i = 0; i < 6; ++i) data.row(i) = random_tangent(gen, 3, 1.0);
  FeatureField f2 = euclidean_grid(data, {6, 1});
  LabelDictionary d2;
  d2.manifold = f2.manifold;
  d2.labels = data.topRows(2);
  RowMat dm = distance_matrix(f2, d2, spec);
  CHECK(dm(0, 0) == 0.0);
  CHECK(dm(1, 1) == 0.0);
  for (int trial = 0; trial < 5; ++trial) {
    int i = static_cast<int>(gen() % 6), j = static_cast<int>(gen() % 2);
    CHECK(dm(i, j) == divergence(spec, f2.manifold, f2.points.row(i), d2.labels.row(j)));
  }
}

TEST_CASE("likelihood") {
  // constant distances cancel
  RowMat w(2, 3);
  w.row(0) << 0.5, 0.25, 0.25;
  w.row(1) << 0.125, 0.5, 0.375;
  RowMat d = RowMat::Constant(2, 3, 4.25);
  RowMat l = likelihood(w, d, 0.1);
  CHECK((l - w).cwiseAbs().maxCoeff() == 0.0);

  // uniform W, |J|=2, D = (0, rho ln 2): likelihood (2/3, 1/3)
  RowMat wu = barycenter_state(1, 2);
  RowMat d2(1, 2);
  const double rho = 0.37;
  d2 << 0.0, rho * std::log(2.0);
  RowMat l2 = likelihood(wu, d2, rho);
  CHECK(l2(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(l2(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  // rho -> infinity: exponent vanishes
  auto gen = make_gen(157);
  RowMat wr(4, 5), dr(4, 5);
  for (int i = 0; i < 4; ++i) {
    wr.row(i) = random_prob_vector(gen, 5);
    for (int j = 0; j < 5; ++j) dr(i, j) = std::abs(random_tangent(gen, 5)[j]);
  }
  CHECK((likelihood(wr, dr, 1e9) - wr).cwiseAbs().maxCoeff() <= 1e-9);

  // bitwise invariance under exact dyadic shifts of a row of D
  std::uniform_int_distribution<int64_t> zi(0, 1 << 24);
  for (int trial = 0; trial < 50; ++trial) {
    RowMat da(3, 4), db(3, 4);
    for (int i = 0; i < 3; ++i) {
      double c = static_cast<double>(zi(gen)) / (1 << 12);
      for (int j = 0; j < 4; ++j) {
        da(i, j) = static_cast<double>(zi(gen)) / (1 << 12);
        db(i, j) = da(i, j) + c;  // exact
      }
    }
    RowMat wa(3, 4);
    for (int i = 0; i < 3; ++i) wa.row(i) = random_prob_vector(gen, 4);
    CHECK((likelihood(wa, da, 0.25) - likelihood(wa, db, 0.25)).cwiseAbs().maxCoeff() == 0.0);
  }

  CHECK_THROWS_AS(likelihood(w, d, 0.0), InvalidArgument);
}

TEST_CASE("similarity") {
  // single-pixel neighborhoods: S = L up to the final normalization
  auto gen = make_gen(163);
  RowMat l(4, 3);
  for (int i = 0; i < 4; ++i) l.row(i) = random_prob_vector(gen, 3);
  NeighborhoodGraph g1 = NeighborhoodGraph::square_window({2, 2}, 1);
  CHECK((similarity(l, g1) - l).cwiseAbs().maxCoeff() <= 1e-15);

  // all rows equal inside the neighborhood
  RowMat lc(4, 3);
  Vec p(3);
  p << 0.5, 0.25, 0.25;
  for (int i = 0; i < 4; ++i) lc.row(i) = p;
  NeighborhoodGraph g3 = NeighborhoodGraph::square_window({2, 2}, 3);
  CHECK((similarity(lc, g3) - lc).cwiseAbs().maxCoeff() == 0.0);

  // 3-pixel path with uniform weights against the closed-form means
  NeighborhoodGraph path = NeighborhoodGraph::square_window({3, 1}, 3);
  RowMat lp(3, 2);
  lp.row(0) << 0.8, 0.2;
  lp.row(1) << 0.5, 0.5;
  lp.row(2) << 0.3, 0.7;
  RowMat s = similarity(lp, path);
  auto normalized = [](double a, double b) { return std::pair<double, double>{a / (a + b), b / (a + b)}; };
  {
    auto [a, b] = normalized(std::sqrt(0.8 * 0.5), std::sqrt(0.2 * 0.5));
    CHECK(s(0, 0) == doctest::Approx(a).epsilon(1e-13));
    CHECK(s(0, 1) == doctest::Approx(b).epsilon(1e-13));
  }
  {
    auto [a, b] = normalized(std::cbrt(0.8 * 0.5 * 0.3), std::cbrt(0.2 * 0.5 * 0.7));
    CHECK(s(1, 0) == doctest::Approx(a).epsilon(1e-13));
    CHECK(s(1, 1) == doctest::Approx(b).epsilon(1e-13));
  }
  {
    auto [a, b] = normalized(std::sqrt(0.5 * 0.3), std::sqrt(0.5 * 0.7));
    CHECK(s(2, 0) == doctest::Approx(a).epsilon(1e-13));
    CHECK(s(2, 1) == doctest::Approx(b).epsilon(1e-13));
  }
}

TEST_CASE("flow field") {
  // constant similarity rows lie in the replicator kernel
  auto gen = make_gen(167);
  RowMat w(3, 4);
  for (int i = 0; i < 3; ++i) w.row(i) = random_prob_vector(gen, 4);
  RowMat s = RowMat::Constant(3, 4, 0.25);
  CHECK(flow_field(w, s).cwiseAbs().maxCoeff() <= 1e-16);

  RowMat wb = barycenter_state(1, 2);
  RowMat sb(1, 2);
  sb << 0.8, 0.2;
  RowMat f = flow_field(wb, sb);
  CHECK(f(0, 0) == doctest::Approx(0.15).epsilon(1e-15));
  CHECK(f(0, 1) == doctest::Approx(-0.15).epsilon(1e-15));

  for (int trial = 0; trial < 100; ++trial) {
    RowMat wr(2, 6), sr(2, 6);
    for (int i = 0; i < 2; ++i) {
      wr.row(i) = random_prob_vector(gen, 6);
      sr.row(i) = random_prob_vector(gen, 6);
    }
    RowMat fr = flow_field(wr, sr);
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(kahan_sum(Vec(fr.row(i)))) <= 1e-14);
  }
}

TEST_CASE("implicit assignment step") {
  auto gen = make_gen(173);
  GridShape grid{4, 4};
  RowMat pts(16, 2);
  for (int i = 0; i < 16; ++i) pts.row(i) = random_tangent(gen, 2, 1.0);
  FeatureField field = euclidean_grid(pts, grid);
  LabelDictionary dict;
  dict.manifold = field.manifold;
  dict.labels = pts.topRows(3);
  RowMat d = distance_matrix(field, dict, DivergenceSpec::canonical());
  NeighborhoodGraph graph = NeighborhoodGraph::square_window(grid, 3);

  FlowConfig cfg;
  cfg.rho = 0.5;

  // h -> 0 leaves the state in place
  {
    RowMat w = barycenter_state(16, 3);
    FlowConfig tiny = cfg;
    tiny.h = 1e-8;
    implicit_assignment_step(w, d, graph, tiny);
    CHECK((w - barycenter_state(16, 3)).cwiseAbs().maxCoeff() <= 1e-8);
  }

  // one inner iteration from V = 0 is the explicit Euler step
  {
    RowMat wi = barycenter_state(16, 3);
    RowMat we = wi;
    FlowConfig one = cfg;
    one.inner_max = 1;
    implicit_assignment_step(wi, d, graph, one);
    explicit_assignment_step(we, d, graph, cfg);
    CHECK((wi - we).cwiseAbs().maxCoeff() == 0.0);
  }

  // converged fixed point: residual below the inner tolerance
  {
    RowMat w = barycenter_state(16, 3);
    AssignmentStepStats stats = implicit_assignment_step(w, d, graph, cfg);
    CHECK_FALSE(stats.explicit_fallback);
    CHECK(stats.residual < cfg.inner_tol);
    CHECK(stats.inner_iterations < cfg.inner_max);
    check_assignment_state(w);
  }
}

TEST_CASE("supervised flow: single label terminates immediately") {
  RowMat pts = RowMat::Zero(4, 2);
  FeatureField field = euclidean_grid(pts, {2, 2});
  LabelDictionary dict;
  dict.manifold = field.manifold;
  dict.labels = RowMat::Zero(1, 2);
  NeighborhoodGraph graph = NeighborhoodGraph::square_window({2, 2}, 1);
  SupervisedResult r = run_supervised(field, dict, graph, FlowConfig{}, DivergenceSpec::canonical());
  CHECK(r.trace.steps == 0);
  CHECK(r.labeling == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("supervised flow matches nearest-neighbor labels on noise-free data") {
  GridShape grid{8, 8};
  auto regions = fixtures::quadrant_regions(grid, 4);
  auto palette = fixtures::default_palette(4);
  ColorSynthetic scene = color_synthetic(regions, grid, palette, 0.0, 0);
  FeatureField field = euclidean_field(scene.image);
  LabelDictionary dict;
  dict.manifold = field.manifold;
  dict.labels.resize(4, 3);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 3; ++c) dict.labels(r, c) = palette[r][c];
  NeighborhoodGraph graph = NeighborhoodGraph::square_window(grid, 1);
  FlowConfig cfg;
  cfg.monitor_entropy = true;
  SupervisedResult r = run_supervised(field, dict, graph, cfg, DivergenceSpec::canonical());
  CHECK(r.labeling == regions);  // features equal their label exactly
  CHECK(r.trace.records.back().entropy < cfg.entropy_tol);
  // entropy trace is monotonically decreasing (also enforced by the monitor)
  for (size_t t = 1; t < r.trace.records.size(); ++t)
    CHECK(r.trace.records[t].entropy <= r.trace.records[t - 1].entropy + 1e-9);
}

TEST_CASE("supervised flow times out with an impossible step cap") {
  GridShape grid{4, 4};
  auto regions = fixtures::quadrant_regions(grid, 2);
  ColorSynthetic scene = color_synthetic(regions, grid, fixtures::default_palette(2), 0.05, 1);
  FeatureField field = euclidean_field(scene.image);
  LabelDictionary dict;
  dict.manifold = field.manifold;
  dict.labels.resize(2, 3);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 3; ++c) dict.labels(r, c) = fixtures::default_palette(2)[r][c];
  NeighborhoodGraph graph = NeighborhoodGraph::square_window(grid, 3);
  FlowConfig cfg;
  cfg.max_steps = 1;
  CHECK_THROWS_AS(
      run_supervised(field, dict, graph, cfg, DivergenceSpec::canonical()), Timeout);
}
