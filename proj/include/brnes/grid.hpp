#pragma once

#include <cstdint>
#include <vector>

#include "brnes/rng.hpp"

namespace brnes {

// Canonical action order; Q-vector index == action index everywhere.
enum class Action : int { Left = 0, Right = 1, Up = 2, Down = 3 };
inline constexpr int kNumActions = 4;

// Grid axes are mathematical: x grows rightward in [0, W), y grows upward in
// [0, H). Up is +y, Down is -y. The default goal sits in the bottom-right
// corner (W-1, 0).
struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

inline Cell displaced(Cell c, Action a) {
  switch (a) {
    case Action::Left: return {c.x - 1, c.y};
    case Action::Right: return {c.x + 1, c.y};
    case Action::Up: return {c.x, c.y + 1};
    case Action::Down: return {c.x, c.y - 1};
  }
  return c;
}

inline int chebyshev(Cell a, Cell b) {
  int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

struct RewardTable {
  double phi_goal = 10.0;
  double phi_freeway = 0.50;
  double phi_obstacle = -1.50;
  double phi_wall = -0.50;
};

struct GridConfig {
  int height = 10;
  int width = 10;
  int n_agents = 10;
  int n_obstacles = 3;
  int n_freeways = 1;
  Cell goal{9, 0};
  // Episode abort bound; 0 means "use cell_count() * 100".
  long step_cap = 0;
  RewardTable rewards;

  int cell_count() const { return height * width; }
  long effective_step_cap() const {
    return step_cap > 0 ? step_cap : static_cast<long>(cell_count()) * 100;
  }
  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height;
  }
  int cell_index(Cell c) const { return c.y * width + c.x; }
  Cell cell_at(int index) const { return {index % width, index / width}; }

  // Throws std::invalid_argument when the occupancy or shape invariants fail.
  void validate() const;
};

struct StepOutcome {
  Cell next_pos;
  double reward = 0.0;
  bool reached_goal = false;
  bool hit_wall = false;
  bool hit_obstacle = false;
  bool collected_freeway = false;
};

// Flag vectors use uint8_t so they can be viewed through std::span.
using FlagVec = std::vector<std::uint8_t>;

struct EnvState {
  std::vector<Cell> agent_pos;
  FlagVec agent_active;
  std::vector<Cell> obstacle_pos;
  Cell freeway_pos;
  FlagVec freeway_collected;
  long step_index = 0;

  bool all_done() const {
    for (auto a : agent_active)
      if (a) return false;
    return true;
  }
};

// Fresh episode: agent, obstacle and freeway cells are drawn uniformly
// without replacement from the non-goal cells.
EnvState reset(const GridConfig& config, RngStream& rng);

// Each obstacle jumps to a uniformly random non-goal cell (independently;
// obstacles may stack or land on agents). Called once per env step, before
// the agents move.
void move_obstacles(const GridConfig& config, EnvState& state, RngStream& rng);

// Move one agent. Walls bounce (agent stays, phi_wall); obstacles are hazards,
// not barriers (agent enters, phi_obstacle); the freeway pays once per agent
// per episode; entering the goal absorbs the agent.
StepOutcome step(const GridConfig& config, EnvState& state, int agent_id, Action action);

// True when every agent is absorbed or the step cap is reached.
bool episode_done(const GridConfig& config, const EnvState& state);

}  // namespace brnes
