#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "softbandit/config.hpp"
#include "softbandit/generation_client.hpp"
#include "softbandit/landscape.hpp"
#include "softbandit/profiles.hpp"
#include "softbandit/projection.hpp"

namespace softbandit {

// Source of per-iteration feedback for one profile.
class RewardModel {
 public:
  virtual ~RewardModel() = default;

  virtual double reward(std::size_t t, const SoftPromptLatent& latent) = 0;
  // Reward of the default instruction with a zero soft prompt. Only
  // meaningful for textual models.
  virtual double zero_shot_reward(std::size_t t) = 0;
  virtual bool is_textual() const = 0;
};

class SyntheticRewardModel final : public RewardModel {
 public:
  SyntheticRewardModel(SyntheticLandscape landscape,
                       std::optional<ProjectionSpec> projection = std::nullopt);

  double reward(std::size_t t, const SoftPromptLatent& latent) override;
  double zero_shot_reward(std::size_t t) override;
  bool is_textual() const override { return false; }

  const SyntheticLandscape& landscape() const { return landscape_; }

 private:
  SyntheticLandscape landscape_;
  std::optional<ProjectionSpec> projection_;
};

// Projects the latent, asks the generation service for text on the scheduled
// example (t modulo the example count) and scores it against the gold text.
class TextualRewardModel final : public RewardModel {
 public:
  TextualRewardModel(UserProfile profile, ProjectionSpec projection,
                     std::size_t num_soft_tokens, GenerationClient client,
                     std::string instruction);

  double reward(std::size_t t, const SoftPromptLatent& latent) override;
  double zero_shot_reward(std::size_t t) override;
  bool is_textual() const override { return true; }

 private:
  double score(std::size_t t, const SoftPrompt& prompt);

  UserProfile profile_;
  ProjectionSpec projection_;
  std::size_t num_soft_tokens_;
  GenerationClient client_;
  std::string instruction_;
};

// Builds the oracle named by config.reward_oracle for this profile, drawing
// landscape and projection from the profile's Oracle and Projection streams.
std::unique_ptr<RewardModel> make_reward_model(const ExperimentConfig& config,
                                               const UserProfile& profile);

struct TrajectoryRecord {
  std::size_t t = 0;
  SoftPromptLatent latent;
  double reward = 0.0;
  double best_so_far = 0.0;

  bool operator==(const TrajectoryRecord&) const = default;
};

struct Trajectory {
  std::string profile_id;
  // Empty for the zero-shot baseline.
  std::optional<Policy> policy;
  std::vector<TrajectoryRecord> records;
  std::string config_fingerprint;

  std::string method() const;
  double final_best() const;
  std::vector<double> rewards() const;

  bool operator==(const Trajectory&) const = default;
};

// The online select / evaluate / observe / update loop for config.policy.
// Service failures are rethrown as ServiceError prefixed with the iteration.
Trajectory run_online(const UserProfile& profile, const ExperimentConfig& config,
                      RewardModel& oracle);
Trajectory run_online(const UserProfile& profile, const ExperimentConfig& config);

// Zero-shot prompt on textual oracles, RandomSearch on synthetic ones.
Trajectory run_baseline(const UserProfile& profile, const ExperimentConfig& config,
                        RewardModel& oracle);
Trajectory run_baseline(const UserProfile& profile, const ExperimentConfig& config);

// Runs every profile (nullopt policy = baseline) on up to `threads` workers.
// Output order and contents match a serial run.
std::vector<Trajectory> run_profiles(const std::vector<UserProfile>& profiles,
                                     const ExperimentConfig& config,
                                     std::optional<Policy> policy,
                                     unsigned threads = 0);

std::vector<double> best_so_far(std::span<const double> rewards);

struct GroupStats {
  std::string name;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t count = 0;
};

struct AggregateReport {
  std::vector<GroupStats> policies;
  GroupStats baseline;
  std::optional<std::string> best_policy;
  // (best bandit mean - baseline mean) / baseline mean * 100. Empty when no
  // bandit group is present or the baseline mean is zero.
  std::optional<double> improvement_pct;
};

double improvement_pct(double best_mean, double baseline_mean);

// Mean and population standard deviation of final best-so-far per group.
// Throws std::invalid_argument on an empty group or mismatched lengths.
AggregateReport aggregate(const std::map<Policy, std::vector<Trajectory>>& by_policy,
                          const std::vector<Trajectory>& baseline);

// Header row "t,reward,best_so_far", shortest round-trip decimals.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
std::string report_to_json(const AggregateReport& report);

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

}  // namespace softbandit
