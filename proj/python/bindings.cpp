#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>

#include "softbandit/config.hpp"
#include "softbandit/errors.hpp"
#include "softbandit/projection.hpp"
#include "softbandit/rouge.hpp"
#include "softbandit/simulation.hpp"
#include "softbandit/suites.hpp"
#include "softbandit/surrogate.hpp"

namespace py = pybind11;
using namespace softbandit;

namespace {

py::tuple score_tuple(const RougeScore& s) { return py::make_tuple(s.precision, s.recall, s.f1); }

py::dict trajectory_dict(const Trajectory& t) {
  py::dict d;
  d["profile_id"] = t.profile_id;
  d["method"] = t.method();
  d["config_fingerprint"] = t.config_fingerprint;
  std::vector<double> best;
  for (const auto& r : t.records) best.push_back(r.best_so_far);
  d["rewards"] = t.rewards();
  d["best_so_far"] = best;
  return d;
}

std::vector<UserProfile> synthetic_ids(const std::vector<std::string>& ids) {
  std::vector<UserProfile> profiles;
  for (const auto& id : ids) profiles.push_back(UserProfile{id, "synthetic", {}});
  return profiles;
}

Trajectory finals_only(double value) {
  return Trajectory{"", Policy::NeuralUCB, {{0, {}, value, value}}, ""};
}

struct PySurrogate {
  SurrogateNet net;

  PySurrogate(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed) : net(input_dim, hidden_dim) {
    RngStream rng(seed);
    net = init_surrogate(input_dim, hidden_dim, rng).first;
  }
};

}  // namespace

PYBIND11_MODULE(_softbandit, m) {
  m.doc() = "Soft-prompt personalization with neural bandits (native core)";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ServiceError>(m, "ServiceError", PyExc_RuntimeError);

  m.def("tokenize", &tokenize, py::arg("text"));
  m.def("rouge1", [](const TokenSequence& c, const TokenSequence& r) { return score_tuple(rouge1(c, r)); },
        py::arg("candidate"), py::arg("reference"), "(precision, recall, f1) of clipped unigram overlap");
  m.def("rouge_l", [](const TokenSequence& c, const TokenSequence& r) { return score_tuple(rougeL(c, r)); },
        py::arg("candidate"), py::arg("reference"), "(precision, recall, f1) of the longest common subsequence");
  m.def("lcs_length", &lcs_length, py::arg("a"), py::arg("b"));
  m.def("avg_rouge_reward",
        [](const std::string& generated, const std::string& gold) { return avg_rouge_reward(generated, gold); },
        py::arg("generated"), py::arg("gold"));

  m.def("normalize_config", [](const std::string& doc) { return serialize_config(load_config(doc)); },
        py::arg("document"), "Parse, validate and re-serialize a JSON config");
  m.def("config_fingerprint", [](const std::string& doc) { return config_fingerprint(load_config(doc)); },
        py::arg("document"));
  m.def("synthetic_suite",
        [](const std::string& id) {
          const auto suite = synthetic_suite(id);
          return py::make_tuple(serialize_config(suite.config), suite.profile_count);
        },
        py::arg("suite_id"), "(config JSON, profile count) of a synthetic suite preset");
  m.def("synthetic_profile_ids",
        [](const std::string& suite, std::size_t count) {
          std::vector<std::string> ids;
          for (const auto& p : synthetic_profiles(suite, count)) ids.push_back(p.id);
          return ids;
        },
        py::arg("suite_id"), py::arg("count"));

  m.def("run_synthetic",
        [](const std::string& doc, const std::vector<std::string>& ids, std::optional<std::string> policy,
           unsigned threads) {
          const auto config = load_config(doc);
          const auto profiles = synthetic_ids(ids);
          std::optional<Policy> p;
          if (policy) p = parse_policy(*policy);
          std::vector<Trajectory> runs;
          {
            py::gil_scoped_release release;
            runs = run_profiles(profiles, config, p, threads);
          }
          py::list out;
          for (const auto& t : runs) out.append(trajectory_dict(t));
          return out;
        },
        py::arg("config"), py::arg("profile_ids"), py::arg("policy") = py::none(), py::arg("threads") = 0,
        "Run one policy (None for the baseline) on synthetic profiles");

  m.def("improvement_pct", &improvement_pct, py::arg("best_mean"), py::arg("baseline_mean"));
  m.def("aggregate_finals",
        [](const std::map<std::string, std::vector<double>>& finals, const std::vector<double>& baseline) {
          std::map<Policy, std::vector<Trajectory>> by_policy;
          for (const auto& [name, values] : finals)
            for (double v : values) by_policy[parse_policy(name)].push_back(finals_only(v));
          std::vector<Trajectory> base;
          for (double v : baseline) base.push_back(finals_only(v));
          return report_to_json(aggregate(by_policy, base));
        },
        py::arg("policy_finals"), py::arg("baseline_finals"), "Aggregate report JSON from final scores");

  py::class_<ProjectionSpec>(m, "Projection")
      .def(py::init([](std::size_t d, std::size_t d_prime, std::uint64_t seed) {
             RngStream rng(seed);
             return make_projection(d, d_prime, rng);
           }),
           py::arg("output_dim"), py::arg("input_dim"), py::arg("seed"))
      .def_property_readonly("output_dim", &ProjectionSpec::output_dim)
      .def_property_readonly("input_dim", &ProjectionSpec::input_dim)
      .def("at",
           [](const ProjectionSpec& spec, std::size_t row, std::size_t col) {
             if (row >= spec.output_dim() || col >= spec.input_dim()) throw py::index_error("projection index");
             return spec.at(row, col);
           },
           py::arg("row"), py::arg("col"))
      .def("project", [](const ProjectionSpec& spec, const std::vector<double>& latent) {
        return project(spec, latent).values;
      });

  py::class_<PySurrogate>(m, "Surrogate")
      .def(py::init<std::size_t, std::size_t, std::uint64_t>(), py::arg("input_dim"), py::arg("hidden_dim"),
           py::arg("seed"))
      .def_property_readonly("param_count", [](const PySurrogate& s) { return s.net.param_count(); })
      .def_property(
          "params", [](const PySurrogate& s) { return std::vector<double>(s.net.params().begin(), s.net.params().end()); },
          [](PySurrogate& s, const std::vector<double>& p) {
            if (p.size() != s.net.param_count()) throw std::invalid_argument("params: wrong length");
            std::copy(p.begin(), p.end(), s.net.params().begin());
          })
      .def("forward", [](const PySurrogate& s, const std::vector<double>& x) { return forward(s.net, x); })
      .def("grad", [](const PySurrogate& s, const std::vector<double>& x) { return grad_params(s.net, x); });
}
