#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "mock_service.hpp"
#include "oracles.hpp"
#include "softbandit/errors.hpp"
#include "softbandit/generation_client.hpp"
#include "softbandit/landscape.hpp"
#include "softbandit/profiles.hpp"
#include "softbandit/rouge.hpp"

using namespace softbandit;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  const auto path = fs::temp_directory_path() / ("softbandit_test_" + name);
  std::ofstream(path) << content;
  return path;
}

TokenSequence random_tokens(std::mt19937_64& gen, std::size_t max_len, std::size_t alphabet) {
  std::uniform_int_distribution<std::size_t> len(0, max_len), sym(0, alphabet - 1);
  TokenSequence out(len(gen));
  for (auto& t : out) t = "w" + std::to_string(sym(gen));
  return out;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("The Cat\xE2\x80\x94sat!!") == TokenSequence{"the", "cat", "sat"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("a1 b2  c3") == TokenSequence{"a1", "b2", "c3"});
  CHECK(tokenize("  --Hello,WORLD--  ") == TokenSequence{"hello", "world"});
}

TEST_CASE("rouge1 worked examples") {
  const TokenSequence s{"the", "cat", "sat"};
  const auto same = rouge1(s, s);
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f1 == 1.0);

  const auto empty = rouge1({}, s);
  CHECK(empty.precision == 0.0);
  CHECK(empty.recall == 0.0);
  CHECK(empty.f1 == 0.0);

  const auto partial = rouge1(s, {"the", "cat", "ran"});
  CHECK(partial.precision == doctest::Approx(2.0 / 3));
  CHECK(partial.recall == doctest::Approx(2.0 / 3));
  CHECK(partial.f1 == doctest::Approx(2.0 / 3));

  // Clipping: repeated candidate tokens count at most the reference count.
  const auto clipped = rouge1({"the", "the", "the"}, {"the", "cat"});
  CHECK(clipped.precision == doctest::Approx(1.0 / 3));
  CHECK(clipped.recall == doctest::Approx(1.0 / 2));
}

TEST_CASE("rougeL worked examples") {
  const TokenSequence s{"a", "b", "c", "d"};
  CHECK(rougeL(s, s).f1 == 1.0);
  const auto swapped = rougeL(s, {"a", "c", "b", "d"});
  CHECK(lcs_length(s, {"a", "c", "b", "d"}) == 3);
  CHECK(swapped.precision == doctest::Approx(0.75));
  CHECK(swapped.recall == doctest::Approx(0.75));
  CHECK(swapped.f1 == doctest::Approx(0.75));
  CHECK(rougeL({"x", "y"}, {"p", "q"}).f1 == 0.0);
  CHECK(rougeL({}, {}).f1 == 0.0);
}

TEST_CASE("avg_rouge_reward") {
  CHECK(avg_rouge_reward("Hello there, world", "hello there world") == 1.0);
  CHECK(avg_rouge_reward("the cat sat", "the cat ran") == doctest::Approx(2.0 / 3));
  CHECK(avg_rouge_reward("", "anything") == 0.0);
}

TEST_CASE("rougeL matches subsequence enumeration on short sequences") {
  const auto all = oracles::all_sequences(3, 5);
  for (const auto& a : all)
    for (const auto& b : all) REQUIRE(lcs_length(a, b) == oracles::lcs_by_enumeration(a, b));
}

TEST_CASE("LCS length never exceeds clipped unigram matches") {
  const auto all = oracles::all_sequences(3, 5);
  for (const auto& a : all)
    for (const auto& b : all) REQUIRE(lcs_length(a, b) <= oracles::multiset_overlap(a, b));
}

TEST_CASE("rouge1 matches multiset intersection and F1 is symmetric") {
  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = random_tokens(gen, 12, 6);
    const auto b = random_tokens(gen, 12, 6);
    const auto s = rouge1(a, b);
    const double overlap = static_cast<double>(oracles::multiset_overlap(a, b));
    CHECK(s.precision == doctest::Approx(a.empty() ? 0.0 : overlap / a.size()));
    CHECK(s.recall == doctest::Approx(b.empty() ? 0.0 : overlap / b.size()));
    if (!a.empty() && !b.empty()) {
      const auto r = rouge1(b, a);
      CHECK(r.f1 == doctest::Approx(s.f1));
      CHECK(r.precision == doctest::Approx(s.recall));
      CHECK(rougeL(b, a).f1 == doctest::Approx(rougeL(a, b).f1));
    }
    for (double v : {s.precision, s.recall, s.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("synthetic_reward worked examples") {
  SyntheticLandscape scalar;
  scalar.rank = 1;
  scalar.input_dim = 1;
  scalar.preference = {1.0};
  scalar.target = {0.0};
  scalar.temperature = 1.0;
  CHECK(synthetic_reward(scalar, std::vector<double>{1.0}) == doctest::Approx(std::exp(-1.0)));
  CHECK(synthetic_reward(scalar, std::vector<double>{0.0}) == 1.0);
  CHECK_THROWS_AS(synthetic_reward(scalar, std::vector<double>{1.0, 2.0}), std::invalid_argument);

  double previous = 1.0;
  for (double step = 0.1; step < 3.0; step += 0.1) {
    const double r = synthetic_reward(scalar, std::vector<double>{step});
    CHECK(r < previous);
    CHECK(r > 0.0);
    previous = r;
  }
}

TEST_CASE("make_landscape is deterministic and attains its optimum in the box") {
  ExperimentConfig c;
  c.intrinsic_dim = 3;
  SyntheticOracle oracle{1, 0.3, false};
  RngStream a(4), b(4);
  const auto la = make_landscape(c, oracle, a);
  const auto lb = make_landscape(c, oracle, b);
  CHECK(la.preference == lb.preference);
  CHECK(la.target == lb.target);
  // Rank one: the optimum is a plane; solve along the row direction.
  const auto& row = la.preference;
  double dot = 0.0;
  for (double v : row) dot += v * v;
  std::vector<double> z(3);
  for (int i = 0; i < 3; ++i) z[i] = row[i] * la.target[0] / dot;
  CHECK(synthetic_reward(la, z) == doctest::Approx(1.0));
}

TEST_CASE("composed landscape requires a projection") {
  ExperimentConfig c;
  c.intrinsic_dim = 3;
  c.token_dim = 4;
  c.num_soft_tokens = 2;
  SyntheticOracle oracle{2, 0.3, true};
  RngStream rng(1);
  CHECK_THROWS_AS(make_landscape(c, oracle, rng), std::invalid_argument);
  RngStream proj_rng(2);
  const auto proj = make_projection(8, 3, proj_rng);
  const auto land = make_landscape(c, oracle, rng, &proj);
  CHECK(land.input_dim == 8);
}

TEST_CASE("load_profiles keeps order and validates records") {
  const auto good = temp_file("profiles_good.json", R"([
    {"id": "u1", "persona": "terse", "examples": [{"input": "a", "gold": "b"}]},
    {"id": "u2", "examples": [{"input": "c", "gold": "d"}, {"input": "e", "gold": "f"}]}
  ])");
  const auto profiles = load_profiles(good);
  REQUIRE(profiles.size() == 2);
  CHECK(profiles[0].id == "u1");
  CHECK(profiles[0].persona == "terse");
  CHECK(profiles[1].id == "u2");
  CHECK(profiles[1].examples.size() == 2);

  const auto copy = fs::temp_directory_path() / "softbandit_test_profiles_copy.json";
  save_profiles(copy, profiles);
  CHECK(load_profiles(copy) == profiles);

  const auto bad = temp_file("profiles_bad.json", R"([
    {"id": "u1", "examples": [{"input": "a", "gold": "b"}]},
    {"id": "u2", "examples": []}
  ])");
  try {
    load_profiles(bad);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("record 1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_profiles(R"([{"examples": [{"input": "a", "gold": "b"}]}])"), DataError);
  CHECK_THROWS_AS(parse_profiles(R"([{"id": "", "examples": [{"input": "a", "gold": "b"}]}])"),
                  DataError);
  CHECK_THROWS_AS(parse_profiles(R"({"id": "x"})"), DataError);
  CHECK_THROWS_AS(load_profiles("/nonexistent/profiles.json"), DataError);
}

TEST_CASE("request envelope nests the soft prompt by token") {
  SoftPrompt p{{0.1, 0.2, 1.0 / 3.0, -4, 5e-300, 6}};
  const auto body = nlohmann::json::parse(build_generate_request(p, 2, "be brief", "hello"));
  REQUIRE(body.at("soft_prompt").size() == 2);
  REQUIRE(body.at("soft_prompt")[0].size() == 3);
  CHECK(body.at("soft_prompt")[0][2].get<double>() == 1.0 / 3.0);
  CHECK(body.at("soft_prompt")[1][1].get<double>() == 5e-300);
  CHECK(body.at("instruction") == "be brief");
  CHECK(body.at("input") == "hello");
}

TEST_CASE("generation client against a mock service") {
  const std::chrono::milliseconds timeout(2000);
  const SoftPrompt prompt = SoftPrompt::zeros(2, 3);

  SUBCASE("echo") {
    auto svc = testing_support::MockGenerationService::echo();
    CHECK(remote_generate(svc.endpoint(), prompt, 2, "inst", "the input", timeout) == "the input");
    const auto sent = nlohmann::json::parse(svc.last_body);
    CHECK(sent.at("soft_prompt") == nlohmann::json::array({{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}));
  }
  SUBCASE("endpoint with a path prefix") {
    auto svc = testing_support::MockGenerationService::echo();
    // The mock only serves /generate, so a prefix must reach a 404.
    try {
      remote_generate(svc.endpoint() + "/v1/", prompt, 2, "inst", "x", timeout);
      FAIL("expected ServiceError");
    } catch (const ServiceError& e) {
      CHECK(e.kind() == ServiceErrorKind::Status);
      CHECK(e.status() == 404);
    }
  }
  SUBCASE("status 500") {
    testing_support::MockGenerationService svc(
        [](const nlohmann::json&, httplib::Response& res) { res.status = 500; });
    try {
      remote_generate(svc.endpoint(), prompt, 2, "inst", "x", timeout);
      FAIL("expected ServiceError");
    } catch (const ServiceError& e) {
      CHECK(e.kind() == ServiceErrorKind::Status);
      CHECK(e.status() == 500);
    }
  }
  SUBCASE("malformed response") {
    testing_support::MockGenerationService svc([](const nlohmann::json&, httplib::Response& res) {
      res.set_content(R"({"txt": 3})", "application/json");
    });
    try {
      remote_generate(svc.endpoint(), prompt, 2, "inst", "x", timeout);
      FAIL("expected ServiceError");
    } catch (const ServiceError& e) {
      CHECK(e.kind() == ServiceErrorKind::MalformedResponse);
    }
    CHECK_THROWS_AS(parse_generate_response("not json"), ServiceError);
  }
  SUBCASE("timeout") {
    testing_support::MockGenerationService svc([](const nlohmann::json&, httplib::Response& res) {
      std::this_thread::sleep_for(std::chrono::milliseconds(600));
      res.set_content(R"({"text": "late"})", "application/json");
    });
    try {
      remote_generate(svc.endpoint(), prompt, 2, "inst", "x", std::chrono::milliseconds(150));
      FAIL("expected ServiceError");
    } catch (const ServiceError& e) {
      CHECK(e.kind() == ServiceErrorKind::Timeout);
    }
  }
  SUBCASE("connection refused") {
    const auto endpoint = "http://127.0.0.1:" + std::to_string(testing_support::unused_port());
    try {
      remote_generate(endpoint, prompt, 2, "inst", "x", timeout);
      FAIL("expected ServiceError");
    } catch (const ServiceError& e) {
      CHECK(e.kind() == ServiceErrorKind::Connection);
    }
  }
}
