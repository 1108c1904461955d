#include "linbandit/environment.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace linbandit {

std::vector<int> GroupStructure::block_coords(int j) const {
  if (j < 0 || j >= num_groups) throw std::invalid_argument("block index out of range");
  std::vector<int> coords(block_dim);
  std::iota(coords.begin(), coords.end(), j * block_dim);
  return coords;
}

double LinearEnvironment::mean_reward(const Vector& a) const {
  if (a.size() != theta_star.size()) {
    throw std::invalid_argument("action dimension mismatch");
  }
  return theta_star.dot(a);
}

double LinearEnvironment::draw_reward(const Vector& a, Rng& rng) const {
  const double mean = mean_reward(a);
  if (noise_sigma == 0.0) return mean;
  return mean + noise_sigma * rng.normal();
}

Vector sample_sphere(Rng& rng, int dim, double radius) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
  Vector v(dim);
  double norm;
  do {
    for (int i = 0; i < dim; ++i) v(i) = rng.normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v * (radius / norm);
}

ActionSet embed_in_blocks(const Vector& v, int num_groups, long round) {
  const int block_dim = static_cast<int>(v.size());
  ActionSet set;
  set.round = round;
  set.actions.reserve(num_groups);
  for (int i = 0; i < num_groups; ++i) {
    Vector a = Vector::Zero(static_cast<long>(num_groups) * block_dim);
    a.segment(i * block_dim, block_dim) = v;
    set.actions.push_back(std::move(a));
  }
  return set;
}

ActionSet gen_scenario_one(Rng& rng, int num_arms, int block_dim, double radius,
                           long round) {
  return embed_in_blocks(sample_sphere(rng, block_dim, radius), num_arms, round);
}

ActionSet gen_scenario_two(Rng& rng, int num_arms, int dim, double radius,
                           long round) {
  ActionSet set;
  set.round = round;
  set.actions.reserve(num_arms);
  for (int i = 0; i < num_arms; ++i) {
    set.actions.push_back(sample_sphere(rng, dim, radius));
  }
  return set;
}

std::pair<int, double> oracle_best(const LinearEnvironment& env,
                                   const ActionSet& set) {
  if (set.actions.empty()) throw std::invalid_argument("empty action set");
  int best = 0;
  double best_value = env.mean_reward(set.actions[0]);
  for (std::size_t i = 1; i < set.actions.size(); ++i) {
    const double value = env.mean_reward(set.actions[i]);
    if (value > best_value) {
      best = static_cast<int>(i);
      best_value = value;
    }
  }
  return {best, best_value};
}

double gap_of_set(const LinearEnvironment& env, const ActionSet& set) {
  if (set.actions.empty()) throw std::invalid_argument("empty action set");
  double best = -std::numeric_limits<double>::infinity();
  for (const Vector& a : set.actions) best = std::max(best, env.mean_reward(a));
  double runner_up = -std::numeric_limits<double>::infinity();
  for (const Vector& a : set.actions) {
    const double value = env.mean_reward(a);
    if (value != best) runner_up = std::max(runner_up, value);
  }
  return best - runner_up;  // +inf when no distinct runner-up exists
}

}  // namespace linbandit
