#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "softbandit/config.hpp"
#include "softbandit/errors.hpp"
#include "softbandit/profiles.hpp"
#include "softbandit/rouge.hpp"
#include "softbandit/simulation.hpp"
#include "softbandit/suites.hpp"

namespace softbandit::cli {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

struct RunOptions {
  std::string config_path;
  std::string profiles_path;
  std::string synthetic;
  std::vector<std::string> policies;
  std::string out_dir;
  std::string endpoint;
  std::optional<std::uint64_t> seed;
  std::string manifest_path;
  unsigned threads = 0;
};

struct ScoreOptions {
  std::string generated;
  std::string gold;
};

std::string one_line(std::string text) {
  for (char& c : text)
    if (c == '\n' || c == '\r') c = ' ';
  return text;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string file_stem_for(const std::string& id) {
  std::string out = id;
  for (char& c : out)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

std::string read_text(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(std::string("cannot open ") + what + " " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Everything needed to reproduce a run; serialized as manifest.json.
struct RunPlan {
  ExperimentConfig config;
  std::string source_kind;  // "synthetic" or "profiles"
  std::string source;       // suite id or profile file path
  std::vector<Policy> policies;
};

RunPlan plan_from_manifest(const RunOptions& opts) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_text(opts.manifest_path, "manifest"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  RunPlan plan;
  try {
    plan.config = load_config(doc.at("config").dump());
    plan.source_kind = doc.at("source").at("kind").get<std::string>();
    plan.source = doc.at("source").at("value").get<std::string>();
    for (const auto& p : doc.at("policies")) plan.policies.push_back(parse_policy(p.get<std::string>()));
    if (doc.at("config_fingerprint").get<std::string>() != config_fingerprint(plan.config))
      throw ConfigError("manifest: config_fingerprint does not match the embedded config");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  return plan;
}

RunPlan plan_from_flags(const RunOptions& opts) {
  RunPlan plan;
  if (!opts.synthetic.empty()) {
    const auto suite = synthetic_suite(opts.synthetic);
    plan.config = suite.config;
    plan.source_kind = "synthetic";
    plan.source = suite.id;
  } else {
    plan.source_kind = "profiles";
    plan.source = fs::absolute(opts.profiles_path).string();
  }
  if (!opts.config_path.empty()) plan.config = load_config_file(opts.config_path);
  if (opts.seed) plan.config.seed = *opts.seed;
  if (!opts.endpoint.empty()) {
    RemoteOracle remote;
    if (const auto* r = std::get_if<RemoteOracle>(&plan.config.reward_oracle)) remote = *r;
    remote.endpoint = opts.endpoint;
    plan.config.reward_oracle = remote;
  }
  for (const auto& name : opts.policies) plan.policies.push_back(parse_policy(name));
  if (plan.policies.empty()) plan.policies.push_back(plan.config.policy);
  plan.config.validate();
  return plan;
}

std::string manifest_json(const RunPlan& plan, const fs::path& out_dir, unsigned threads) {
  ordered_json doc;
  doc["tool"] = "softbandit";
  doc["config_fingerprint"] = config_fingerprint(plan.config);
  doc["config"] = ordered_json::parse(serialize_config(plan.config));
  doc["source"] = {{"kind", plan.source_kind}, {"value", plan.source}};
  doc["policies"] = ordered_json::array();
  for (auto p : plan.policies) doc["policies"].push_back(std::string(to_string(p)));
  doc["output_dir"] = out_dir.string();
  doc["threads"] = threads;
  doc["created_at"] = utc_timestamp();
  return doc.dump(2) + "\n";
}

std::vector<UserProfile> profiles_for(const RunPlan& plan) {
  if (plan.source_kind == "synthetic")
    return synthetic_profiles(plan.source, synthetic_suite(plan.source).profile_count);
  if (plan.source_kind == "profiles") return load_profiles(plan.source);
  throw ConfigError("manifest: unknown source kind \"" + plan.source_kind + "\"");
}

void write_trajectories(const fs::path& dir, const std::vector<Trajectory>& runs) {
  for (const auto& t : runs) {
    std::ostringstream csv;
    write_trajectory_csv(csv, t);
    write_text(dir / (file_stem_for(t.profile_id) + "." + t.method() + ".csv"), csv.str());
  }
}

int cmd_run(const RunOptions& opts, std::ostream& out) {
  const RunPlan plan = opts.manifest_path.empty() ? plan_from_flags(opts) : plan_from_manifest(opts);
  const auto profiles = profiles_for(plan);
  if (profiles.empty()) throw DataError("no profiles to run");

  const fs::path out_dir(opts.out_dir);
  const fs::path traj_dir = out_dir / "trajectories";
  std::error_code ec;
  fs::create_directories(traj_dir, ec);
  if (ec) throw DataError("cannot create output directory " + traj_dir.string() + ": " + ec.message());
  write_text(out_dir / "manifest.json", manifest_json(plan, out_dir, opts.threads));

  std::map<Policy, std::vector<Trajectory>> by_policy;
  for (auto policy : plan.policies) {
    if (by_policy.count(policy)) continue;
    auto runs = run_profiles(profiles, plan.config, policy, opts.threads);
    write_trajectories(traj_dir, runs);
    by_policy.emplace(policy, std::move(runs));
  }
  const auto baseline = run_profiles(profiles, plan.config, std::nullopt, opts.threads);
  write_trajectories(traj_dir, baseline);

  const auto report = aggregate(by_policy, baseline);
  write_text(out_dir / "aggregate.json", report_to_json(report) + "\n");

  for (const auto& g : report.policies)
    out << g.name << "\tmean=" << format_double(g.mean) << "\tstd=" << format_double(g.stddev) << '\n';
  out << "baseline\tmean=" << format_double(report.baseline.mean)
      << "\tstd=" << format_double(report.baseline.stddev) << '\n';
  if (report.improvement_pct)
    out << "improvement_pct\t" << format_double(*report.improvement_pct) << '\n';
  return kOk;
}

std::vector<std::string> read_lines(const std::string& path, const char* what) {
  std::istringstream in(read_text(path, what));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

int cmd_score(const ScoreOptions& opts, std::ostream& out) {
  const auto generated = read_lines(opts.generated, "generated file");
  const auto gold = read_lines(opts.gold, "gold file");
  if (generated.size() != gold.size())
    throw DataError("line count mismatch: " + std::to_string(generated.size()) + " generated vs " +
                    std::to_string(gold.size()) + " gold");
  if (generated.empty()) throw DataError("no lines to score");
  double sum = 0.0;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const double score = avg_rouge_reward(generated[i], gold[i]);
    sum += score;
    out << (i + 1) << '\t' << format_double(score) << '\n';
  }
  out << "mean\t" << format_double(sum / static_cast<double>(generated.size())) << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Soft-prompt personalization with neural bandits", "softbandit"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run online bandit experiments and the baseline");
  run_cmd->add_option("--config", run_opts.config_path, "Experiment config (JSON)");
  auto* profiles_opt = run_cmd->add_option("--profiles", run_opts.profiles_path, "User profile file (JSON)");
  auto* synthetic_opt = run_cmd->add_option("--synthetic", run_opts.synthetic, "Synthetic suite id (small, standard)");
  auto* manifest_opt = run_cmd->add_option("--manifest", run_opts.manifest_path, "Re-run from a manifest.json");
  profiles_opt->excludes(synthetic_opt);
  manifest_opt->excludes(profiles_opt)->excludes(synthetic_opt);
  run_cmd->add_option("--policy", run_opts.policies, "neuralucb | neuralts | random (repeatable)");
  run_cmd->add_option("--out", run_opts.out_dir, "Output directory")->required();
  run_cmd->add_option("--endpoint", run_opts.endpoint, "Generation service URL");
  run_cmd->add_option("--seed", run_opts.seed, "Override the config seed");
  run_cmd->add_option("--threads", run_opts.threads, "Worker threads for profile runs (0 = all cores)");

  ScoreOptions score_opts;
  auto* score_cmd = app.add_subcommand("score", "Score generated lines against gold lines");
  score_cmd->add_option("--generated", score_opts.generated, "Generated text, one per line")->required();
  score_cmd->add_option("--gold", score_opts.gold, "Gold text, one per line")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "softbandit: error: " << one_line(e.what()) << '\n';
    return kConfigError;
  }

  try {
    if (run_cmd->parsed()) {
      if (run_opts.manifest_path.empty() && run_opts.profiles_path.empty() && run_opts.synthetic.empty())
        throw ConfigError("run needs --profiles, --synthetic or --manifest");
      return cmd_run(run_opts, out);
    }
    return cmd_score(score_opts, out);
  } catch (const ConfigError& e) {
    err << "softbandit: config error: " << one_line(e.what()) << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    err << "softbandit: data error: " << one_line(e.what()) << '\n';
    return kDataError;
  } catch (const ServiceError& e) {
    err << "softbandit: service error (" << to_string(e.kind()) << "): " << one_line(e.what()) << '\n';
    return kServiceError;
  } catch (const std::invalid_argument& e) {
    err << "softbandit: data error: " << one_line(e.what()) << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "softbandit: error: " << one_line(e.what()) << '\n';
    return kDataError;
  }
}

}  // namespace softbandit::cli
