#include "brnes/grid.hpp"

#include <stdexcept>
#include <string>

namespace brnes {

void GridConfig::validate() const {
  if (height < 2 || width < 2)
    throw std::invalid_argument("grid must be at least 2x2");
  if (!in_bounds(goal)) throw std::invalid_argument("goal outside grid");
  if (n_agents < 1) throw std::invalid_argument("need at least one agent");
  if (n_obstacles < 0) throw std::invalid_argument("negative obstacle count");
  if (n_freeways != 1) throw std::invalid_argument("exactly one freeway is supported");
  // Agents, obstacles, freeway and goal must leave free cells to move through.
  long occupied = static_cast<long>(n_agents) + n_obstacles + n_freeways + 1;
  if (occupied >= static_cast<long>(cell_count()))
    throw std::invalid_argument(
        "occupancy invariant violated: " + std::to_string(occupied) +
        " entities in a " + std::to_string(cell_count()) + "-cell grid");
}

EnvState reset(const GridConfig& config, RngStream& rng) {
  config.validate();

  // Partial Fisher-Yates over the non-goal cell indices.
  const int goal_index = config.cell_index(config.goal);
  std::vector<int> cells;
  cells.reserve(config.cell_count() - 1);
  for (int i = 0; i < config.cell_count(); ++i)
    if (i != goal_index) cells.push_back(i);

  const int needed = config.n_agents + config.n_obstacles + 1;
  for (int i = 0; i < needed; ++i) {
    const auto j = i + rng.uniform_below(cells.size() - i);
    std::swap(cells[i], cells[j]);
  }

  EnvState state;
  state.agent_pos.reserve(config.n_agents);
  int next = 0;
  for (int i = 0; i < config.n_agents; ++i)
    state.agent_pos.push_back(config.cell_at(cells[next++]));
  state.agent_active.assign(config.n_agents, 1);
  state.obstacle_pos.reserve(config.n_obstacles);
  for (int i = 0; i < config.n_obstacles; ++i)
    state.obstacle_pos.push_back(config.cell_at(cells[next++]));
  state.freeway_pos = config.cell_at(cells[next++]);
  state.freeway_collected.assign(config.n_agents, 0);
  state.step_index = 0;
  return state;
}

void move_obstacles(const GridConfig& config, EnvState& state, RngStream& rng) {
  const int goal_index = config.cell_index(config.goal);
  const int cells = config.cell_count();
  for (auto& pos : state.obstacle_pos) {
    // Uniform over the cells-1 non-goal cells: draw over [0, cells-1) and
    // shift indices at or past the goal.
    int draw = static_cast<int>(rng.uniform_below(cells - 1));
    if (draw >= goal_index) ++draw;
    pos = config.cell_at(draw);
  }
}

StepOutcome step(const GridConfig& config, EnvState& state, int agent_id, Action action) {
  if (agent_id < 0 || agent_id >= static_cast<int>(state.agent_pos.size()))
    throw std::logic_error("step: bad agent id");
  if (!state.agent_active[agent_id])
    throw std::logic_error("step: agent " + std::to_string(agent_id) + " is inactive");

  const Cell from = state.agent_pos[agent_id];
  const Cell target = displaced(from, action);

  StepOutcome out;
  const RewardTable& r = config.rewards;

  if (!config.in_bounds(target)) {
    out.next_pos = from;
    out.hit_wall = true;
    out.reward += r.phi_wall;
    return out;
  }

  out.next_pos = target;
  state.agent_pos[agent_id] = target;

  for (const Cell& obs : state.obstacle_pos) {
    if (obs == target) {
      out.hit_obstacle = true;
      out.reward += r.phi_obstacle;
      break;
    }
  }
  if (target == state.freeway_pos && !state.freeway_collected[agent_id]) {
    state.freeway_collected[agent_id] = 1;
    out.collected_freeway = true;
    out.reward += r.phi_freeway;
  }
  if (target == config.goal) {
    out.reached_goal = true;
    out.reward += r.phi_goal;
    state.agent_active[agent_id] = 0;
  }
  return out;
}

bool episode_done(const GridConfig& config, const EnvState& state) {
  return state.all_done() || state.step_index >= config.effective_step_cap();
}

}  // namespace brnes
