#pragma once

#include <utility>
#include <vector>

#include "linbandit/linalg.hpp"
#include "linbandit/rng.hpp"

namespace linbandit {

/// The decision set presented at one round.
struct ActionSet {
  std::vector<Vector> actions;
  long round = 1;

  std::size_t size() const { return actions.size(); }
};

/// Direct-sum decomposition of the ambient space into disjoint coordinate
/// blocks, as used by the k-armed-in-blocks construction of scenario one.
struct GroupStructure {
  int num_groups;
  int block_dim;

  int ambient_dim() const { return num_groups * block_dim; }

  /// Coordinate indices of block j (0-based).
  std::vector<int> block_coords(int j) const;
};

/// Ground-truth linear reward model.
struct LinearEnvironment {
  Vector theta_star;
  double noise_sigma;
  double action_bound;

  int dim() const { return static_cast<int>(theta_star.size()); }

  double mean_reward(const Vector& a) const;

  /// mean_reward(a) plus N(0, noise_sigma^2) noise. noise_sigma == 0 is
  /// accepted and gives the noiseless value.
  double draw_reward(const Vector& a, Rng& rng) const;
};

/// Uniform draw on the sphere of the given radius (normalized Gaussian).
Vector sample_sphere(Rng& rng, int dim, double radius);

/// Embeds v into each of k disjoint blocks, one action per block.
ActionSet embed_in_blocks(const Vector& v, int num_groups, long round = 1);

/// Scenario one: one shared direction, copied into each of num_arms blocks.
ActionSet gen_scenario_one(Rng& rng, int num_arms, int block_dim, double radius,
                           long round = 1);

/// Scenario two: num_arms independent uniform draws on the sphere in R^dim.
ActionSet gen_scenario_two(Rng& rng, int num_arms, int dim, double radius,
                           long round = 1);

/// Index and value of a mean-reward-maximizing action; ties go to the lowest
/// index.
std::pair<int, double> oracle_best(const LinearEnvironment& env,
                                   const ActionSet& set);

/// Best minus second-best *distinct* mean reward. Returns +infinity when all
/// actions share one value (set semantics: every copy of the maximum is
/// removed before taking the runner-up).
double gap_of_set(const LinearEnvironment& env, const ActionSet& set);

}  // namespace linbandit
