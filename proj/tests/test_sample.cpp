#include <cmath>
#include <set>

#include "doctest.h"
#include "pising/sample.hpp"
#include "support.hpp"

using namespace pising;

TEST_SUITE("sample") {

TEST_CASE("fixed seeds reproduce bit-identical output") {
  Graph g(3, {{0, 1}, {1, 2}, {0, 2}});
  IsingModel model(g, {0.5, -0.3, 0.8});
  SampleConfig cfg;
  cfg.num_samples = 50;
  cfg.burn_in = 20;
  cfg.thin = 2;
  cfg.seed = 42;
  Eigen::MatrixXi a = gibbs_sample(model, cfg);
  Eigen::MatrixXi b = gibbs_sample(model, cfg);
  CHECK((a.array() == b.array()).all());

  cfg.seed = 43;
  Eigen::MatrixXi c = gibbs_sample(model, cfg);
  CHECK_FALSE((a.array() == c.array()).all());
}

TEST_CASE("output shape and alphabet") {
  Graph g(2, {{0, 1}});
  IsingModel model(g, {1.0});
  SampleConfig cfg;
  cfg.num_samples = 25;
  cfg.burn_in = 5;
  cfg.thin = 1;
  Eigen::MatrixXi s = gibbs_sample(model, cfg);
  REQUIRE(s.rows() == 25);
  REQUIRE(s.cols() == 2);
  for (long r = 0; r < s.rows(); ++r)
    for (int c = 0; c < s.cols(); ++c) CHECK(std::abs(s(r, c)) == 1);

  cfg.num_samples = 0;
  CHECK(gibbs_sample(model, cfg).rows() == 0);
}

TEST_CASE("config validation") {
  IsingModel model(Graph(2, {{0, 1}}), {0.5});
  SampleConfig cfg;
  cfg.num_samples = -1;
  CHECK_THROWS_AS(gibbs_sample(model, cfg), BadValueError);
  cfg.num_samples = 1;
  cfg.burn_in = -1;
  CHECK_THROWS_AS(gibbs_sample(model, cfg), BadValueError);
  cfg.burn_in = 0;
  cfg.thin = -1;
  CHECK_THROWS_AS(gibbs_sample(model, cfg), BadValueError);
}

TEST_CASE("zero thinning repeats the current state") {
  IsingModel model(Graph(2, {{0, 1}}), {0.7});
  SampleConfig cfg;
  cfg.num_samples = 10;
  cfg.burn_in = 50;
  cfg.thin = 0;
  Eigen::MatrixXi s = gibbs_sample(model, cfg);
  for (long r = 1; r < s.rows(); ++r) CHECK((s.row(r).array() == s.row(0).array()).all());
}

TEST_CASE("flat couplings give near-zero correlations") {
  Graph cycle(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  IsingModel model(cycle, std::vector<double>(4, 0.0));
  SampleConfig cfg;
  cfg.num_samples = 10000;
  cfg.burn_in = 100;
  cfg.thin = 1;
  cfg.seed = 7;
  MomentSet ms = empirical_moments(gibbs_sample(model, cfg));
  double bound = 4.0 / std::sqrt(10000.0);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(ms.first[i]) <= bound);
    for (int j = i + 1; j < 4; ++j) CHECK(std::abs(ms.pair(i, j)) <= bound);
  }
}

TEST_CASE("single edge converges to tanh theta") {
  IsingModel model(Graph(2, {{0, 1}}), {1.0});
  SampleConfig cfg;
  cfg.num_samples = 100000;
  cfg.burn_in = 500;
  cfg.thin = 1;
  cfg.seed = 11;
  MomentSet ms = empirical_moments(gibbs_sample(model, cfg));
  CHECK(std::abs(ms.pair(0, 1) - std::tanh(1.0)) <= 0.01);
}

TEST_CASE("node fields bias the marginals") {
  IsingModel model(Graph(1), {}, {0.8});
  SampleConfig cfg;
  cfg.num_samples = 50000;
  cfg.burn_in = 100;
  cfg.thin = 1;
  cfg.seed = 23;
  MomentSet ms = empirical_moments(gibbs_sample(model, cfg));
  CHECK(std::abs(ms.first[0] - std::tanh(0.8)) <= 0.015);
}

TEST_CASE("state frequencies match enumeration on a small fielded model") {
  Graph g(3, {{0, 1}, {1, 2}});
  IsingModel model(g, {0.6, -0.4}, {0.2, 0.0, -0.3});
  SampleConfig cfg;
  cfg.num_samples = 200000;
  cfg.burn_in = 200;
  cfg.thin = 2;
  cfg.seed = 5;
  Eigen::MatrixXi s = gibbs_sample(model, cfg);

  std::vector<long> counts(8, 0);
  for (long r = 0; r < s.rows(); ++r) {
    int state = 0;
    for (int i = 0; i < 3; ++i)
      if (s(r, i) > 0) state |= 1 << i;
    counts[state]++;
  }
  testsup::EnumResult en = testsup::enumerate_model(model);
  for (int state = 0; state < 8; ++state) {
    double p = en.state_prob[state];
    double freq = static_cast<double>(counts[state]) / cfg.num_samples;
    double se = std::sqrt(p * (1 - p) / cfg.num_samples);
    CHECK(std::abs(freq - p) <= 3.5 * se);
  }
}

TEST_CASE("grid generator") {
  GenSpec spec;
  spec.kind = ModelKind::grid;
  spec.rows = 7;
  spec.cols = 7;
  spec.seed = 1;
  GeneratedModel gen = gen_model(spec);
  CHECK(gen.model.graph.num_vertices() == 49);
  CHECK(gen.model.graph.num_edges() == 84);
  CHECK(is_planar(gen.model.graph));
  CHECK(gen.model.zero_field());
  CHECK(gen.embedding.has_coords());
  for (double t : gen.model.theta_edges) {
    CHECK(std::abs(t) >= 0.05);
    CHECK(std::abs(t) <= 1.0);
  }

  spec.rows = 1;
  spec.cols = 1;
  CHECK(gen_model(spec).model.graph.num_edges() == 0);
  spec.rows = 0;
  CHECK_THROWS_AS(gen_model(spec), BadDimsError);
}

TEST_CASE("outer-planar generator") {
  GenSpec spec;
  spec.kind = ModelKind::outerplanar;
  spec.n = 12;
  spec.seed = 3;
  GeneratedModel gen = gen_model(spec);
  CHECK(gen.model.graph.num_vertices() == 12);
  for (int i = 0; i < 12; ++i) CHECK(gen.model.graph.has_edge(i, (i + 1) % 12));
  CHECK_FALSE(gen.model.zero_field());
  CHECK(is_planar(gen.model.graph));
  CHECK(is_planar(extend_zero_field(gen.model).graph));  // outer-planarity test
  for (double t : gen.model.theta_edges) CHECK(std::abs(t) >= 0.05);
  for (double t : gen.model.theta_nodes) CHECK(std::abs(t) >= 0.05);

  spec.n = 2;
  CHECK_THROWS_AS(gen_model(spec), BadDimsError);
}

TEST_CASE("outer-planar chords vary with the seed but never break the cycle") {
  std::set<int> edge_counts;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GenSpec spec;
    spec.kind = ModelKind::outerplanar;
    spec.n = 10;
    spec.seed = seed;
    GeneratedModel gen = gen_model(spec);
    CHECK(is_planar(extend_zero_field(gen.model).graph));
    CHECK(gen.model.graph.num_edges() >= 10);
    CHECK(gen.model.graph.num_edges() <= 2 * 10 - 3);  // outer-planar edge bound
    edge_counts.insert(gen.model.graph.num_edges());
  }
  CHECK(edge_counts.size() > 1);  // chords actually vary
}

TEST_CASE("random planar generator") {
  GenSpec spec;
  spec.kind = ModelKind::random_planar;
  spec.n = 15;
  spec.seed = 4;
  GeneratedModel gen = gen_model(spec);
  CHECK(gen.model.graph.num_vertices() == 15);
  CHECK(is_planar(gen.model.graph));
  CHECK(gen.model.zero_field());
  CHECK(gen.model.graph.components().size() == 1);  // spanning tree keeps it connected
  CHECK(gen.model.graph.num_edges() <= 3 * 15 - 6);
  CHECK(gen.model.graph.num_edges() >= 14);

  spec.n = 1;
  CHECK(gen_model(spec).model.graph.num_edges() == 0);
  spec.n = 2;
  CHECK(gen_model(spec).model.graph.num_edges() == 1);
  spec.n = 0;
  CHECK_THROWS_AS(gen_model(spec), BadDimsError);
}

TEST_CASE("generator determinism and seed sensitivity") {
  GenSpec spec;
  spec.kind = ModelKind::random_planar;
  spec.n = 9;
  spec.seed = 17;
  GeneratedModel a = gen_model(spec);
  GeneratedModel b = gen_model(spec);
  CHECK(a.model.graph.edges() == b.model.graph.edges());
  CHECK(a.model.theta_edges == b.model.theta_edges);
  CHECK(a.embedding.coords == b.embedding.coords);

  spec.seed = 18;
  GeneratedModel c = gen_model(spec);
  bool same = a.model.graph.edges() == c.model.graph.edges() &&
              a.model.theta_edges == c.model.theta_edges;
  CHECK_FALSE(same);
}

TEST_CASE("parameter range control") {
  GenSpec spec;
  spec.kind = ModelKind::grid;
  spec.rows = 3;
  spec.cols = 3;
  spec.lo = 0.2;
  spec.hi = 0.9;
  spec.min_abs = 0.3;
  spec.seed = 8;
  GeneratedModel gen = gen_model(spec);
  for (double t : gen.model.theta_edges) {
    CHECK(t >= 0.3);
    CHECK(t <= 0.9);
  }

  spec.lo = 1.0;
  spec.hi = -1.0;
  CHECK_THROWS_AS(gen_model(spec), BadValueError);
  spec.lo = -0.1;
  spec.hi = 0.1;
  spec.min_abs = 0.5;  // rejects the entire range
  CHECK_THROWS_AS(gen_model(spec), BadValueError);
}

}  // TEST_SUITE
