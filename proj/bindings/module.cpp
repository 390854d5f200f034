#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "brnes/report.hpp"
#include "brnes/simulate.hpp"

namespace py = pybind11;
using namespace brnes;

PYBIND11_MODULE(_brnes, m) {
  m.doc() = "BRNES experience-sharing simulator core";

  py::enum_<Action>(m, "Action")
      .value("Left", Action::Left)
      .value("Right", Action::Right)
      .value("Up", Action::Up)
      .value("Down", Action::Down);

  py::enum_<Scale>(m, "Scale")
      .value("Small", Scale::Small)
      .value("Medium", Scale::Medium)
      .value("Large", Scale::Large)
      .value("Custom", Scale::Custom);

  py::enum_<Variant>(m, "Variant")
      .value("Brnes", Variant::Brnes)
      .value("NoDefense", Variant::NoDefense)
      .value("LdpOnly", Variant::LdpOnly);

  py::enum_<AttackerKind>(m, "AttackerKind")
      .value("NoAttack", AttackerKind::None)
      .value("Byzantine", AttackerKind::Byzantine)
      .value("Inference", AttackerKind::Inference);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform", &RngStream::uniform)
      .def("uniform_below", &RngStream::uniform_below, py::arg("n"))
      .def("normal", &RngStream::normal, py::arg("mean"), py::arg("stddev"));

  py::class_<PrivacyParams>(m, "PrivacyParams")
      .def(py::init([](double epsilon) {
             PrivacyParams p;
             p.epsilon = epsilon;
             return p;
           }),
           py::arg("epsilon") = 1.0)
      .def_readwrite("epsilon", &PrivacyParams::epsilon)
      .def("keep_probability", &PrivacyParams::keep_probability);

  py::class_<NeighborZone>(m, "NeighborZone")
      .def_readonly("radius", &NeighborZone::radius)
      .def_readonly("x_min", &NeighborZone::x_min)
      .def_readonly("x_max", &NeighborZone::x_max)
      .def_readonly("y_min", &NeighborZone::y_min)
      .def_readonly("y_max", &NeighborZone::y_max)
      .def("contains", [](const NeighborZone& z, int x, int y) {
        return z.contains({x, y});
      });

  m.def("ehc", &ehc, py::arg("visits"), py::arg("budget"), py::arg("budget_total"),
        py::arg("tau"), py::arg("tau_prime"),
        "Experience harvesting confidence.");
  m.def("egc", &egc, py::arg("advisor_visits"), py::arg("advisee_visits"), py::arg("budget"),
        py::arg("budget_total"), "Experience giving confidence.");
  m.def(
      "neighbor_zone",
      [](int n_agents, int x, int y, int height, int width) {
        GridConfig g;
        g.height = height;
        g.width = width;
        g.n_agents = n_agents;
        g.goal = {width - 1, 0};
        return neighbor_zone(n_agents, {x, y}, g);
      },
      py::arg("n_agents"), py::arg("x"), py::arg("y"), py::arg("height"), py::arg("width"),
      "Adaptive neighbor zone around an advisee cell.");
  m.def(
      "grr_perturb",
      [](const QVector& q, double epsilon, RngStream& rng) {
        PrivacyParams p;
        p.epsilon = epsilon;
        return grr_perturb(q, p, rng);
      },
      py::arg("q_vector"), py::arg("epsilon"), py::arg("rng"),
      "Generalized-randomized-response perturbation of one Q-row.");
  m.def(
      "best_advice",
      [](const std::vector<QVector>& responses) {
        return best_advice(std::span<const QVector>(responses));
      },
      py::arg("responses"), "Per-action mean of the received vectors.");
  m.def("weighted_aggregate", &weighted_aggregate, py::arg("own"), py::arg("advice"),
        py::arg("w"), "w*own + (1-w)*advice, element-wise.");

  py::class_<AgentParams>(m, "AgentParams")
      .def(py::init<>())
      .def_readwrite("alpha", &AgentParams::alpha)
      .def_readwrite("epsilon_explore", &AgentParams::epsilon_explore)
      .def_readwrite("gamma", &AgentParams::gamma)
      .def_readwrite("w", &AgentParams::w)
      .def_readwrite("kappa", &AgentParams::kappa)
      .def_readwrite("tau", &AgentParams::tau)
      .def_readwrite("tau_prime", &AgentParams::tau_prime);

  py::class_<RewardTable>(m, "RewardTable")
      .def(py::init<>())
      .def_readwrite("phi_goal", &RewardTable::phi_goal)
      .def_readwrite("phi_freeway", &RewardTable::phi_freeway)
      .def_readwrite("phi_obstacle", &RewardTable::phi_obstacle)
      .def_readwrite("phi_wall", &RewardTable::phi_wall);

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_static("preset", &ScenarioConfig::preset, py::arg("scale"))
      .def_readwrite("scale", &ScenarioConfig::scale)
      .def_readwrite("height", &ScenarioConfig::height)
      .def_readwrite("width", &ScenarioConfig::width)
      .def_readwrite("n_agents", &ScenarioConfig::n_agents)
      .def_readwrite("n_obstacles", &ScenarioConfig::n_obstacles)
      .def_readwrite("episodes", &ScenarioConfig::episodes)
      .def_readwrite("variant", &ScenarioConfig::variant)
      .def_readwrite("attacker_fraction", &ScenarioConfig::attacker_fraction)
      .def_readwrite("attacker_kind", &ScenarioConfig::attacker_kind)
      .def_readwrite("privacy_epsilon", &ScenarioConfig::privacy_epsilon)
      .def_readwrite("master_seed", &ScenarioConfig::master_seed)
      .def_readwrite("params", &ScenarioConfig::params)
      .def_readwrite("rewards", &ScenarioConfig::rewards)
      .def_readwrite("budget_advisee", &ScenarioConfig::budget_advisee)
      .def_readwrite("budget_advisor", &ScenarioConfig::budget_advisor)
      .def_readwrite("bernoulli_gates", &ScenarioConfig::bernoulli_gates)
      .def_readwrite("log_advice", &ScenarioConfig::log_advice)
      .def("validate", &ScenarioConfig::validate);

  py::class_<MetricsRecord>(m, "MetricsRecord")
      .def_readonly("episode", &MetricsRecord::episode)
      .def_readonly("sg", &MetricsRecord::sg)
      .def_readonly("reward", &MetricsRecord::reward)
      .def_readonly("delta_q_mean", &MetricsRecord::delta_q_mean)
      .def_readonly("tg_cumulative", &MetricsRecord::tg_cumulative)
      .def_readonly("wall_seconds", &MetricsRecord::wall_seconds)
      .def_readonly("advice_requests", &MetricsRecord::advice_requests)
      .def_readonly("advice_responses", &MetricsRecord::advice_responses);

  py::class_<InferenceRecord>(m, "InferenceRecord")
      .def_readonly("episode", &InferenceRecord::episode)
      .def_readonly("attacker_id", &InferenceRecord::attacker_id)
      .def_readonly("success_rate_pct", &InferenceRecord::success_rate_pct)
      .def_readonly("queries_issued", &InferenceRecord::queries_issued)
      .def_readonly("qualifying_states", &InferenceRecord::qualifying_states);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("records", &RunResult::records)
      .def_readonly("heatmap", &RunResult::heatmap)
      .def_readonly("inference", &RunResult::inference)
      .def_readonly("total_agent_steps", &RunResult::total_agent_steps);

  m.def("run_scenario", &run_scenario, py::arg("config"),
        py::call_guard<py::gil_scoped_release>(),
        "Run one seeded scenario and return its metrics.");
  m.def("run_seeds", &run_seeds, py::arg("config"), py::arg("seeds"),
        py::call_guard<py::gil_scoped_release>(),
        "Run `seeds` scenarios with master_seed = config.master_seed + i.");
  m.def("convergence_series", &convergence_series, py::arg("records"), py::arg("window") = 50,
        "Trailing moving average of delta_q_mean.");
  m.def("emit_experiment", &emit_experiment, py::arg("config"), py::arg("runs"),
        py::arg("out_dir"), "Write manifest.json, aggregate.csv and per-seed CSV directories.");
  m.def("to_manifest_json", &to_manifest_json, py::arg("config"), py::arg("seeds") = 1);
  m.def(
      "from_manifest_json",
      [](const std::string& text) {
        int seeds = 1;
        ScenarioConfig cfg = from_manifest_json(text, &seeds);
        return py::make_tuple(cfg, seeds);
      },
      py::arg("text"), "Parse a manifest; returns (config, seeds).");

  m.attr("INF_EPSILON") = std::numeric_limits<double>::infinity();
  m.attr("__version__") = "0.1.0";
}
