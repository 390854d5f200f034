#pragma once

#include <cstdint>
#include <string>

#include "brnes/adversary.hpp"
#include "brnes/grid.hpp"
#include "brnes/protocol.hpp"
#include "brnes/qlearn.hpp"

namespace brnes {

enum class Scale { Small, Medium, Large, Custom };
enum class Variant { Brnes, NoDefense, LdpOnly };
enum class AttackerKind { None, Byzantine, Inference };

std::string to_string(Scale s);
std::string to_string(Variant v);
std::string to_string(AttackerKind k);
Scale scale_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);
AttackerKind attacker_kind_from_string(const std::string& s);

struct ScenarioConfig {
  Scale scale = Scale::Medium;
  // Grid shape; filled by preset() for the named scales.
  int height = 10;
  int width = 10;
  int n_agents = 10;
  int n_obstacles = 3;
  long step_cap = 0;  // 0: cells*100

  int episodes = 1000;
  Variant variant = Variant::Brnes;
  double attacker_fraction = 0.0;
  AttackerKind attacker_kind = AttackerKind::None;
  double privacy_epsilon = 1.0;  // +inf: identity channel
  std::uint64_t master_seed = 1;

  AgentParams params;
  RewardTable rewards;
  std::uint64_t budget_advisee = 100000;
  std::uint64_t budget_advisor = 10000;

  bool inactive_agents_advise = true;
  bool bernoulli_gates = true;
  bool advisor_refuse_at_zero_budget = true;
  // Record every advisor contact in RunResult::advice_log (large!).
  bool log_advice = false;

  // Byzantine noise defaults to Normal(phi_goal, 0.1*phi_goal); override < 0
  // keeps the default.
  double byzantine_noise_center = -1.0;
  double byzantine_noise_spread = -1.0;
  // Inference targeting: -1 tracks every honest advisor (responses arrive
  // from the whole zone anyway), an id >= 0 designates a single advisor.
  int inference_target = -1;

  static ScenarioConfig preset(Scale scale);

  GridConfig grid() const;
  ByzantineConfig byzantine() const;
  PrivacyParams privacy() const;
  bool ldp_advisor_side() const { return variant == Variant::Brnes; }
  bool ldp_advisee_side() const { return variant == Variant::LdpOnly; }
  bool zone_enabled() const { return variant == Variant::Brnes; }
  double aggregation_weight() const { return variant == Variant::Brnes ? params.w : 0.0; }
  int n_attackers() const;

  void validate() const;
};

// Manifest round trip (pretty-printed JSON, full resolved config + seed).
std::string to_manifest_json(const ScenarioConfig& cfg, int seeds);
ScenarioConfig from_manifest_json(const std::string& text, int* seeds_out = nullptr);
void write_manifest(const ScenarioConfig& cfg, int seeds, const std::string& path);
ScenarioConfig read_manifest(const std::string& path, int* seeds_out = nullptr);

// Applies the Table-style parameter overrides ("alpha", "gamma", "w",
// "phi_goal", "privacy_epsilon", "budget_advisee", ...) from a JSON object.
void apply_config_overrides(ScenarioConfig& cfg, const std::string& json_text);

}  // namespace brnes
