#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "softbandit/config.hpp"
#include "softbandit/errors.hpp"
#include "softbandit/rng.hpp"

using namespace softbandit;

TEST_CASE("empty document yields the published defaults") {
  for (const char* doc : {"", "  \n", "{}"}) {
    const auto c = load_config(doc);
    CHECK(c.intrinsic_dim == 100);
    CHECK(c.num_soft_tokens == 5);
    CHECK(c.token_dim == 4096);
    CHECK(c.lambda_reg == 0.1);
    CHECK(c.nu == 0.1);
    CHECK(c.total_iterations == 165);
    CHECK(c.hidden_dim == 100);
    CHECK(c.local_iterations == 40);
    CHECK(c.learning_rate == 3e-4);
    CHECK(c.candidate_pool_size == 500);
    CHECK(c.seed == 42);
    CHECK(c.soft_prompt_dim() == 4096 * 5);
    CHECK(c.effective_feature_scale() == doctest::Approx(0.01));
    CHECK(c == ExperimentConfig{});
  }
}

TEST_CASE("invariant violations name the field") {
  auto message_for = [](const char* doc) -> std::string {
    try {
      load_config(doc);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return {};
  };
  CHECK(message_for(R"({"intrinsic_dim": 0})").find("intrinsic_dim") != std::string::npos);
  CHECK(message_for(R"({"lambda_reg": 0})").find("lambda_reg") != std::string::npos);
  CHECK(message_for(R"({"nu": -0.5})").find("nu") != std::string::npos);
  CHECK(message_for(R"({"learning_rate": -1})").find("learning_rate") != std::string::npos);
  CHECK(message_for(R"({"hidden_dim": -3})").find("hidden_dim") != std::string::npos);
  CHECK(message_for(R"({"bogus": 1})").find("bogus") != std::string::npos);
  CHECK(message_for(R"({"policy": "greedy"})").find("policy") != std::string::npos);
  CHECK(message_for(R"({"reward_oracle": {"kind": "synthetic", "temperature": 0}})")
            .find("temperature") != std::string::npos);
  CHECK(message_for("{not json").find("parse") != std::string::npos);
  CHECK(message_for("[1, 2]").find("object") != std::string::npos);
}

TEST_CASE("derived soft-prompt dimension") {
  const auto c = load_config(R"({"token_dim": 8, "num_soft_tokens": 2})");
  CHECK(c.soft_prompt_dim() == 16);
}

TEST_CASE("nu zero is allowed") {
  CHECK(load_config(R"({"nu": 0})").nu == 0.0);
}

TEST_CASE("policy names") {
  CHECK(parse_policy("NeuralUCB") == Policy::NeuralUCB);
  CHECK(parse_policy("neuralts") == Policy::NeuralTS);
  CHECK(parse_policy("random") == Policy::RandomSearch);
  CHECK(parse_policy("RandomSearch") == Policy::RandomSearch);
  CHECK_THROWS_AS(parse_policy("ucb"), ConfigError);
}

TEST_CASE("serialize then load round-trips random configs") {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<std::size_t> count(1, 5000);
  std::uniform_real_distribution<double> real(1e-6, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    ExperimentConfig c;
    c.intrinsic_dim = count(gen);
    c.num_soft_tokens = count(gen);
    c.token_dim = count(gen);
    c.lambda_reg = real(gen);
    c.nu = trial % 7 == 0 ? 0.0 : real(gen);
    c.total_iterations = count(gen);
    c.hidden_dim = count(gen);
    c.local_iterations = count(gen);
    c.learning_rate = real(gen);
    c.candidate_pool_size = count(gen);
    c.policy = static_cast<Policy>(trial % 3);
    c.seed = gen();
    if (trial % 2) c.feature_scale = real(gen);
    if (trial % 4 == 1) {
      c.reward_oracle = RemoteOracle{"http://h:" + std::to_string(trial), "say \"hi\"\n", 1 + trial};
    } else {
      c.reward_oracle = SyntheticOracle{count(gen), real(gen), trial % 3 == 0};
    }
    const auto text = serialize_config(c);
    const auto back = load_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
  }
}

TEST_CASE("fingerprint tracks content") {
  ExperimentConfig a;
  ExperimentConfig b;
  CHECK(config_fingerprint(a) == config_fingerprint(b));
  CHECK(config_fingerprint(a).size() == 16);
  b.seed = 43;
  CHECK(config_fingerprint(a) != config_fingerprint(b));
}

TEST_CASE("rng streams are deterministic per triple") {
  ExperimentConfig c;
  auto a = derive_rng_stream(c, "p1", StreamPurpose::Projection);
  auto b = derive_rng_stream(c, "p1", StreamPurpose::Projection);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());
}

TEST_CASE("rng streams differ across purposes for many profile ids") {
  ExperimentConfig c;
  const StreamPurpose purposes[] = {StreamPurpose::Projection, StreamPurpose::Candidates,
                                    StreamPurpose::Surrogate, StreamPurpose::Policy,
                                    StreamPurpose::Oracle};
  std::size_t collisions = 0;
  for (int id = 0; id < 1000; ++id) {
    std::set<std::uint64_t> firsts;
    for (auto p : purposes) firsts.insert(derive_rng_stream(c, "p" + std::to_string(id), p)());
    collisions += 5 - firsts.size();
  }
  CHECK(collisions == 0);
}

TEST_CASE("rng streams depend on the seed") {
  ExperimentConfig a;
  ExperimentConfig b;
  b.seed = 43;
  auto x = derive_rng_stream(a, "p1", StreamPurpose::Policy);
  auto y = derive_rng_stream(b, "p1", StreamPurpose::Policy);
  int same = 0;
  for (int i = 0; i < 100; ++i) same += x() == y();
  CHECK(same == 0);
}

TEST_CASE("covariance mode") {
  CHECK(ExperimentConfig{}.covariance == CovarianceMode::Full);
  const auto c = load_config(R"({"covariance": "Diagonal"})");
  CHECK(c.covariance == CovarianceMode::Diagonal);
  CHECK(load_config(serialize_config(c)) == c);
  CHECK(config_fingerprint(c) != config_fingerprint(ExperimentConfig{}));
  CHECK_THROWS_AS(load_config(R"({"covariance": "sparse"})"), ConfigError);
  CHECK_THROWS_AS(load_config(R"({"covariance": 1})"), ConfigError);
}
