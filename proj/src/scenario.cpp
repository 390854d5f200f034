#include "brnes/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace brnes {

using nlohmann::json;

std::string to_string(Scale s) {
  switch (s) {
    case Scale::Small: return "small";
    case Scale::Medium: return "medium";
    case Scale::Large: return "large";
    case Scale::Custom: return "custom";
  }
  return "?";
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Brnes: return "brnes";
    case Variant::NoDefense: return "no-defense";
    case Variant::LdpOnly: return "ldp-only";
  }
  return "?";
}

std::string to_string(AttackerKind k) {
  switch (k) {
    case AttackerKind::None: return "none";
    case AttackerKind::Byzantine: return "byzantine";
    case AttackerKind::Inference: return "inference";
  }
  return "?";
}

Scale scale_from_string(const std::string& s) {
  if (s == "small") return Scale::Small;
  if (s == "medium") return Scale::Medium;
  if (s == "large") return Scale::Large;
  if (s == "custom") return Scale::Custom;
  throw std::invalid_argument("unknown scale: " + s);
}

Variant variant_from_string(const std::string& s) {
  if (s == "brnes") return Variant::Brnes;
  if (s == "no-defense") return Variant::NoDefense;
  if (s == "ldp-only") return Variant::LdpOnly;
  throw std::invalid_argument("unknown variant: " + s);
}

AttackerKind attacker_kind_from_string(const std::string& s) {
  if (s == "none") return AttackerKind::None;
  if (s == "byzantine") return AttackerKind::Byzantine;
  if (s == "inference") return AttackerKind::Inference;
  throw std::invalid_argument("unknown attack kind: " + s);
}

ScenarioConfig ScenarioConfig::preset(Scale scale) {
  ScenarioConfig cfg;
  cfg.scale = scale;
  switch (scale) {
    case Scale::Small:
      cfg.height = 5; cfg.width = 5; cfg.n_agents = 5; cfg.n_obstacles = 1;
      break;
    case Scale::Medium:
    case Scale::Custom:
      cfg.height = 10; cfg.width = 10; cfg.n_agents = 10; cfg.n_obstacles = 3;
      break;
    case Scale::Large:
      cfg.height = 30; cfg.width = 30; cfg.n_agents = 20; cfg.n_obstacles = 5;
      break;
  }
  return cfg;
}

GridConfig ScenarioConfig::grid() const {
  GridConfig g;
  g.height = height;
  g.width = width;
  g.n_agents = n_agents;
  g.n_obstacles = n_obstacles;
  g.n_freeways = 1;
  g.goal = {width - 1, 0};
  g.step_cap = step_cap;
  g.rewards = rewards;
  return g;
}

ByzantineConfig ScenarioConfig::byzantine() const {
  ByzantineConfig b;
  b.fraction = attacker_kind == AttackerKind::Byzantine ? attacker_fraction : 0.0;
  b.noise_center = byzantine_noise_center >= 0.0 ? byzantine_noise_center : rewards.phi_goal;
  b.noise_spread =
      byzantine_noise_spread >= 0.0 ? byzantine_noise_spread : 0.1 * rewards.phi_goal;
  return b;
}

PrivacyParams ScenarioConfig::privacy() const {
  PrivacyParams p;
  p.epsilon = privacy_epsilon;
  return p;
}

int ScenarioConfig::n_attackers() const {
  if (attacker_kind == AttackerKind::None) return 0;
  int n = static_cast<int>(std::llround(attacker_fraction * n_agents));
  // An inference run needs a querying adversary even at fraction 0.
  if (attacker_kind == AttackerKind::Inference && n == 0) n = 1;
  return n;
}

void ScenarioConfig::validate() const {
  grid().validate();
  params.validate();
  privacy().validate();
  if (episodes < 1) throw std::invalid_argument("episodes must be positive");
  if (attacker_fraction < 0.0 || attacker_fraction > 1.0)
    throw std::invalid_argument("attacker fraction outside [0,1]");
  if (budget_advisee == 0 || budget_advisor == 0)
    throw std::invalid_argument("budgets must be positive");
  if (attacker_kind != AttackerKind::None && n_attackers() >= n_agents)
    throw std::invalid_argument("at least one honest agent is required");
}

namespace {

json to_json_obj(const ScenarioConfig& c, int seeds) {
  json j;
  j["format"] = "brnes-manifest-v1";
  j["scale"] = to_string(c.scale);
  j["height"] = c.height;
  j["width"] = c.width;
  j["n_agents"] = c.n_agents;
  j["n_obstacles"] = c.n_obstacles;
  j["step_cap"] = c.step_cap;
  j["episodes"] = c.episodes;
  j["variant"] = to_string(c.variant);
  j["attacker_fraction"] = c.attacker_fraction;
  j["attacker_kind"] = to_string(c.attacker_kind);
  j["privacy_epsilon"] =
      std::isinf(c.privacy_epsilon) ? json("inf") : json(c.privacy_epsilon);
  j["master_seed"] = c.master_seed;
  j["seeds"] = seeds;
  j["alpha"] = c.params.alpha;
  j["epsilon_explore"] = c.params.epsilon_explore;
  j["gamma"] = c.params.gamma;
  j["w"] = c.params.w;
  j["kappa"] = c.params.kappa;
  j["tau"] = c.params.tau;
  j["tau_prime"] = c.params.tau_prime;
  j["phi_goal"] = c.rewards.phi_goal;
  j["phi_freeway"] = c.rewards.phi_freeway;
  j["phi_obstacle"] = c.rewards.phi_obstacle;
  j["phi_wall"] = c.rewards.phi_wall;
  j["budget_advisee"] = c.budget_advisee;
  j["budget_advisor"] = c.budget_advisor;
  j["inactive_agents_advise"] = c.inactive_agents_advise;
  j["bernoulli_gates"] = c.bernoulli_gates;
  j["advisor_refuse_at_zero_budget"] = c.advisor_refuse_at_zero_budget;
  j["log_advice"] = c.log_advice;
  j["byzantine_noise_center"] = c.byzantine_noise_center;
  j["byzantine_noise_spread"] = c.byzantine_noise_spread;
  j["inference_target"] = c.inference_target;
  return j;
}

double epsilon_from_json(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    return std::stod(s);
  }
  return v.get<double>();
}

ScenarioConfig from_json_obj(const json& j, int* seeds_out) {
  ScenarioConfig c;
  c.scale = scale_from_string(j.at("scale").get<std::string>());
  c.height = j.at("height").get<int>();
  c.width = j.at("width").get<int>();
  c.n_agents = j.at("n_agents").get<int>();
  c.n_obstacles = j.at("n_obstacles").get<int>();
  c.step_cap = j.value("step_cap", 0L);
  c.episodes = j.at("episodes").get<int>();
  c.variant = variant_from_string(j.at("variant").get<std::string>());
  c.attacker_fraction = j.at("attacker_fraction").get<double>();
  c.attacker_kind = attacker_kind_from_string(j.at("attacker_kind").get<std::string>());
  c.privacy_epsilon = epsilon_from_json(j.at("privacy_epsilon"));
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  if (seeds_out) *seeds_out = j.value("seeds", 1);
  c.params.alpha = j.at("alpha").get<double>();
  c.params.epsilon_explore = j.at("epsilon_explore").get<double>();
  c.params.gamma = j.at("gamma").get<double>();
  c.params.w = j.at("w").get<double>();
  c.params.kappa = j.at("kappa").get<double>();
  c.params.tau = j.at("tau").get<std::uint64_t>();
  c.params.tau_prime = j.at("tau_prime").get<std::uint64_t>();
  c.rewards.phi_goal = j.at("phi_goal").get<double>();
  c.rewards.phi_freeway = j.at("phi_freeway").get<double>();
  c.rewards.phi_obstacle = j.at("phi_obstacle").get<double>();
  c.rewards.phi_wall = j.at("phi_wall").get<double>();
  c.budget_advisee = j.at("budget_advisee").get<std::uint64_t>();
  c.budget_advisor = j.at("budget_advisor").get<std::uint64_t>();
  c.inactive_agents_advise = j.value("inactive_agents_advise", true);
  c.bernoulli_gates = j.value("bernoulli_gates", true);
  c.advisor_refuse_at_zero_budget = j.value("advisor_refuse_at_zero_budget", true);
  c.log_advice = j.value("log_advice", false);
  c.byzantine_noise_center = j.value("byzantine_noise_center", -1.0);
  c.byzantine_noise_spread = j.value("byzantine_noise_spread", -1.0);
  c.inference_target = j.value("inference_target", -1);
  return c;
}

}  // namespace

std::string to_manifest_json(const ScenarioConfig& cfg, int seeds) {
  return to_json_obj(cfg, seeds).dump(2) + "\n";
}

ScenarioConfig from_manifest_json(const std::string& text, int* seeds_out) {
  return from_json_obj(json::parse(text), seeds_out);
}

void write_manifest(const ScenarioConfig& cfg, int seeds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << to_manifest_json(cfg, seeds);
}

ScenarioConfig read_manifest(const std::string& path, int* seeds_out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_manifest_json(ss.str(), seeds_out);
}

void apply_config_overrides(ScenarioConfig& cfg, const std::string& json_text) {
  const json j = json::parse(json_text);
  if (j.contains("alpha")) cfg.params.alpha = j["alpha"].get<double>();
  if (j.contains("epsilon_explore")) cfg.params.epsilon_explore = j["epsilon_explore"].get<double>();
  if (j.contains("gamma")) cfg.params.gamma = j["gamma"].get<double>();
  if (j.contains("w")) cfg.params.w = j["w"].get<double>();
  if (j.contains("kappa")) cfg.params.kappa = j["kappa"].get<double>();
  if (j.contains("tau")) cfg.params.tau = j["tau"].get<std::uint64_t>();
  if (j.contains("tau_prime")) cfg.params.tau_prime = j["tau_prime"].get<std::uint64_t>();
  if (j.contains("phi_goal")) cfg.rewards.phi_goal = j["phi_goal"].get<double>();
  if (j.contains("phi_freeway")) cfg.rewards.phi_freeway = j["phi_freeway"].get<double>();
  if (j.contains("phi_obstacle")) cfg.rewards.phi_obstacle = j["phi_obstacle"].get<double>();
  if (j.contains("phi_wall")) cfg.rewards.phi_wall = j["phi_wall"].get<double>();
  if (j.contains("privacy_epsilon")) cfg.privacy_epsilon = epsilon_from_json(j["privacy_epsilon"]);
  if (j.contains("budget_advisee")) cfg.budget_advisee = j["budget_advisee"].get<std::uint64_t>();
  if (j.contains("budget_advisor")) cfg.budget_advisor = j["budget_advisor"].get<std::uint64_t>();
}

}  // namespace brnes
