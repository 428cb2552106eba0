#include <doctest.h>

#include <random>

#include "softbandit/projection.hpp"

using namespace softbandit;

TEST_CASE("make_projection is deterministic for a fixed stream") {
  RngStream a(123);
  RngStream b(123);
  CHECK(make_projection(4, 2, a) == make_projection(4, 2, b));
}

TEST_CASE("make_projection entries are centred Uniform(-1, 1)") {
  RngStream rng(42);
  const auto spec = make_projection(10000, 100, rng);
  CHECK(spec.output_dim() == 10000);
  CHECK(spec.input_dim() == 100);
  double sum = 0.0;
  for (double v : spec.matrix()) {
    REQUIRE(v >= -1.0);
    REQUIRE(v <= 1.0);
    sum += v;
  }
  const double mean = sum / static_cast<double>(spec.matrix().size());
  CHECK(mean > -0.02);
  CHECK(mean < 0.02);
}

TEST_CASE("degenerate 1x1 projection") {
  RngStream rng(1);
  const auto spec = make_projection(1, 1, rng);
  CHECK(spec.at(0, 0) >= -1.0);
  CHECK(spec.at(0, 0) <= 1.0);
}

TEST_CASE("zero dimensions are rejected") {
  RngStream rng(1);
  CHECK_THROWS_AS(make_projection(0, 3, rng), std::invalid_argument);
  CHECK_THROWS_AS(make_projection(3, 0, rng), std::invalid_argument);
}

TEST_CASE("project worked examples") {
  const ProjectionSpec identity(2, 2, {1, 0, 0, 1});
  CHECK(project(identity, std::vector<double>{0.3, -0.7}).values == std::vector<double>{0.3, -0.7});

  RngStream rng(9);
  const auto any = make_projection(7, 3, rng);
  for (double v : project(any, std::vector<double>{0, 0, 0}).values) CHECK(v == 0.0);

  const ProjectionSpec hand(2, 2, {1, 1, 1, -1});
  CHECK(project(hand, std::vector<double>{2, 3}).values == std::vector<double>{5, -1});
}

TEST_CASE("project rejects mismatched latent length") {
  const ProjectionSpec spec(2, 2, {1, 0, 0, 1});
  CHECK_THROWS_AS(project(spec, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("projection entries outside [-1, 1] are rejected") {
  CHECK_THROWS_AS(ProjectionSpec(1, 1, {1.5}), std::invalid_argument);
}

TEST_CASE("project is linear") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> dim(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rng(gen());
    const std::size_t d = dim(gen), dp = dim(gen);
    const auto spec = make_projection(d, dp, rng);
    std::vector<double> x(dp), y(dp), combo(dp);
    const double a = 5 * u(gen), b = 5 * u(gen);
    for (std::size_t i = 0; i < dp; ++i) {
      x[i] = u(gen);
      y[i] = u(gen);
      combo[i] = a * x[i] + b * y[i];
    }
    const auto px = project(spec, x).values;
    const auto py = project(spec, y).values;
    const auto pc = project(spec, combo).values;
    for (std::size_t r = 0; r < d; ++r) {
      const double expect = a * px[r] + b * py[r];
      const double scale = std::abs(a * px[r]) + std::abs(b * py[r]) + 1e-300;
      CHECK(std::abs(pc[r] - expect) / scale < 1e-10);
    }
  }
}

TEST_CASE("soft prompt reshapes into token rows") {
  SoftPrompt p{{1, 2, 3, 4, 5, 6}};
  const auto rows = p.token_rows(2);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<double>{1, 2, 3});
  CHECK(rows[1] == std::vector<double>{4, 5, 6});
  CHECK_THROWS_AS(p.token_rows(4), std::invalid_argument);
  const auto z = SoftPrompt::zeros(2, 3);
  CHECK(z.values == std::vector<double>(6, 0.0));
}
