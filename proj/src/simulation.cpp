#include "softbandit/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "softbandit/bandit.hpp"
#include "softbandit/candidates.hpp"
#include "softbandit/errors.hpp"
#include "softbandit/rouge.hpp"

namespace softbandit {

SyntheticRewardModel::SyntheticRewardModel(SyntheticLandscape landscape,
                                           std::optional<ProjectionSpec> projection)
    : landscape_(std::move(landscape)), projection_(std::move(projection)) {
  if (landscape_.compose_projection && !projection_)
    throw std::invalid_argument("composed synthetic landscape needs a projection");
}

double SyntheticRewardModel::reward(std::size_t, const SoftPromptLatent& latent) {
  if (landscape_.compose_projection)
    return synthetic_reward(landscape_, project(*projection_, latent).values);
  return synthetic_reward(landscape_, latent);
}

double SyntheticRewardModel::zero_shot_reward(std::size_t t) {
  SoftPromptLatent zero{std::vector<double>(
      projection_ ? projection_->input_dim() : landscape_.input_dim, 0.0)};
  return reward(t, zero);
}

TextualRewardModel::TextualRewardModel(UserProfile profile, ProjectionSpec projection,
                                       std::size_t num_soft_tokens, GenerationClient client,
                                       std::string instruction)
    : profile_(std::move(profile)),
      projection_(std::move(projection)),
      num_soft_tokens_(num_soft_tokens),
      client_(std::move(client)),
      instruction_(std::move(instruction)) {
  if (profile_.examples.empty())
    throw DataError("profile \"" + profile_.id + "\" has no examples");
}

double TextualRewardModel::score(std::size_t t, const SoftPrompt& prompt) {
  const auto& example = profile_.examples[t % profile_.examples.size()];
  const std::string text = client_.generate(prompt, num_soft_tokens_, instruction_, example.input);
  return avg_rouge_reward(text, example.gold);
}

double TextualRewardModel::reward(std::size_t t, const SoftPromptLatent& latent) {
  return score(t, project(projection_, latent));
}

double TextualRewardModel::zero_shot_reward(std::size_t t) {
  return score(t, SoftPrompt{std::vector<double>(projection_.output_dim(), 0.0)});
}

std::unique_ptr<RewardModel> make_reward_model(const ExperimentConfig& config,
                                               const UserProfile& profile) {
  config.validate();
  if (const auto* synthetic = std::get_if<SyntheticOracle>(&config.reward_oracle)) {
    auto oracle_rng = derive_rng_stream(config, profile.id, StreamPurpose::Oracle);
    std::optional<ProjectionSpec> projection;
    if (synthetic->compose_projection) {
      auto proj_rng = derive_rng_stream(config, profile.id, StreamPurpose::Projection);
      projection = make_projection(config.soft_prompt_dim(), config.intrinsic_dim, proj_rng);
    }
    auto landscape =
        make_landscape(config, *synthetic, oracle_rng, projection ? &*projection : nullptr);
    return std::make_unique<SyntheticRewardModel>(std::move(landscape), std::move(projection));
  }
  const auto& remote = std::get<RemoteOracle>(config.reward_oracle);
  auto proj_rng = derive_rng_stream(config, profile.id, StreamPurpose::Projection);
  auto projection = make_projection(config.soft_prompt_dim(), config.intrinsic_dim, proj_rng);
  GenerationClient client(remote.endpoint, std::chrono::milliseconds(remote.timeout_ms));
  return std::make_unique<TextualRewardModel>(profile, std::move(projection),
                                              config.num_soft_tokens, std::move(client),
                                              remote.instruction);
}

std::string Trajectory::method() const {
  return policy ? std::string(to_string(*policy)) : std::string("baseline");
}

double Trajectory::final_best() const {
  if (records.empty()) throw std::logic_error("final_best of an empty trajectory");
  return records.back().best_so_far;
}

std::vector<double> Trajectory::rewards() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.reward);
  return out;
}

namespace {

template <typename Fn>
double with_iteration(std::size_t t, Fn&& fn) {
  try {
    return fn();
  } catch (const ServiceError& e) {
    throw ServiceError(e.kind(), "iteration " + std::to_string(t) + ": " + e.what(), e.status());
  }
}

void append_record(Trajectory& traj, std::size_t t, SoftPromptLatent latent, double reward) {
  const double best = traj.records.empty() ? reward : std::max(traj.records.back().best_so_far, reward);
  traj.records.push_back(TrajectoryRecord{t, std::move(latent), reward, best});
}

}  // namespace

Trajectory run_online(const UserProfile& profile, const ExperimentConfig& config,
                      RewardModel& oracle) {
  config.validate();
  Trajectory traj{profile.id, config.policy, {}, config_fingerprint(config)};
  traj.records.reserve(config.total_iterations);

  auto policy_rng = derive_rng_stream(config, profile.id, StreamPurpose::Policy);
  const CandidateSampler sampler(config.intrinsic_dim, config.candidate_pool_size,
                                 derive_rng_stream(config, profile.id, StreamPurpose::Candidates));
  std::optional<BanditState> state;
  if (config.policy != Policy::RandomSearch) {
    auto surrogate_rng = derive_rng_stream(config, profile.id, StreamPurpose::Surrogate);
    state.emplace(make_bandit_state(config, surrogate_rng));
  }

  for (std::size_t t = 0; t < config.total_iterations; ++t) {
    const CandidatePool pool = sampler.pool(t);
    Selection chosen = state ? select_next(*state, pool, config.policy, policy_rng)
                             : select_uniform(pool, policy_rng);
    const double reward = with_iteration(t, [&] { return oracle.reward(t, chosen.latent); });
    if (state) update_posterior(*state, chosen.latent, reward);
    append_record(traj, t, std::move(chosen.latent), reward);
  }
  return traj;
}

Trajectory run_online(const UserProfile& profile, const ExperimentConfig& config) {
  auto oracle = make_reward_model(config, profile);
  return run_online(profile, config, *oracle);
}

Trajectory run_baseline(const UserProfile& profile, const ExperimentConfig& config,
                        RewardModel& oracle) {
  if (!oracle.is_textual()) {
    ExperimentConfig random = config;
    random.policy = Policy::RandomSearch;
    Trajectory traj = run_online(profile, random, oracle);
    traj.policy.reset();
    return traj;
  }
  config.validate();
  Trajectory traj{profile.id, std::nullopt, {}, config_fingerprint(config)};
  traj.records.reserve(config.total_iterations);
  for (std::size_t t = 0; t < config.total_iterations; ++t) {
    const double reward = with_iteration(t, [&] { return oracle.zero_shot_reward(t); });
    append_record(traj, t, SoftPromptLatent{std::vector<double>(config.intrinsic_dim, 0.0)},
                  reward);
  }
  return traj;
}

Trajectory run_baseline(const UserProfile& profile, const ExperimentConfig& config) {
  auto oracle = make_reward_model(config, profile);
  return run_baseline(profile, config, *oracle);
}

std::vector<Trajectory> run_profiles(const std::vector<UserProfile>& profiles,
                                     const ExperimentConfig& config,
                                     std::optional<Policy> policy, unsigned threads) {
  ExperimentConfig run_config = config;
  if (policy) run_config.policy = *policy;

  std::vector<Trajectory> results(profiles.size());
  std::vector<std::exception_ptr> errors(profiles.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < profiles.size(); i = next++) {
      try {
        results[i] = policy ? run_online(profiles[i], run_config)
                            : run_baseline(profiles[i], run_config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, profiles.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::vector<double> best_so_far(std::span<const double> rewards) {
  std::vector<double> out(rewards.begin(), rewards.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i - 1], out[i]);
  return out;
}

double improvement_pct(double best_mean, double baseline_mean) {
  return (best_mean - baseline_mean) / baseline_mean * 100.0;
}

namespace {

GroupStats group_stats(std::string name, const std::vector<Trajectory>& group) {
  if (group.empty()) throw std::invalid_argument("aggregate: group \"" + name + "\" is empty");
  // Sorted summation makes the statistics independent of profile order.
  std::vector<double> finals;
  finals.reserve(group.size());
  for (const auto& t : group) finals.push_back(t.final_best());
  std::sort(finals.begin(), finals.end());
  const double n = static_cast<double>(finals.size());
  double sum = 0.0;
  for (double v : finals) sum += v;
  const double mean = sum / n;
  double sq = 0.0;
  for (double v : finals) sq += (v - mean) * (v - mean);
  return GroupStats{std::move(name), mean, std::sqrt(sq / n), group.size()};
}

}  // namespace

AggregateReport aggregate(const std::map<Policy, std::vector<Trajectory>>& by_policy,
                          const std::vector<Trajectory>& baseline) {
  std::optional<std::size_t> length;
  const auto check_length = [&](const std::vector<Trajectory>& group) {
    for (const auto& t : group) {
      if (!length) length = t.records.size();
      if (t.records.size() != *length)
        throw std::invalid_argument("aggregate: trajectories have mismatched lengths (" +
                                    std::to_string(t.records.size()) + " vs " +
                                    std::to_string(*length) + ")");
    }
  };
  check_length(baseline);
  for (const auto& [policy, group] : by_policy) check_length(group);

  AggregateReport report;
  report.baseline = group_stats("baseline", baseline);
  std::optional<double> best_mean;
  for (const auto& [policy, group] : by_policy) {
    report.policies.push_back(group_stats(std::string(to_string(policy)), group));
    const auto& stats = report.policies.back();
    if (policy == Policy::RandomSearch) continue;
    if (!best_mean || stats.mean > *best_mean) {
      best_mean = stats.mean;
      report.best_policy = stats.name;
    }
  }
  if (best_mean && report.baseline.mean != 0.0)
    report.improvement_pct = improvement_pct(*best_mean, report.baseline.mean);
  return report;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,reward,best_so_far\n";
  for (const auto& r : trajectory.records)
    out << r.t << ',' << format_double(r.reward) << ',' << format_double(r.best_so_far) << '\n';
}

std::string report_to_json(const AggregateReport& report) {
  using ordered_json = nlohmann::ordered_json;
  const auto group = [](const GroupStats& g) {
    ordered_json j;
    j["name"] = g.name;
    j["mean"] = g.mean;
    j["stddev"] = g.stddev;
    j["count"] = g.count;
    return j;
  };
  ordered_json doc;
  doc["policies"] = ordered_json::array();
  for (const auto& g : report.policies) doc["policies"].push_back(group(g));
  doc["baseline"] = group(report.baseline);
  doc["best_policy"] = report.best_policy ? ordered_json(*report.best_policy) : ordered_json(nullptr);
  doc["improvement_pct"] =
      report.improvement_pct ? ordered_json(*report.improvement_pct) : ordered_json(nullptr);
  return doc.dump(2);
}

}  // namespace softbandit
