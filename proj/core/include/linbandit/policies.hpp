#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "linbandit/environment.hpp"
#include "linbandit/linalg.hpp"

namespace linbandit {

enum class RadiusKind { kRho, kRhoPrime, kRhoDoublePrime, kEta };
enum class PolicyKind { kOful, kTs, kGreedy, kSg };

/// Inputs of the closed-form confidence radii. For kEta, `d` is the block
/// dimension and `k` the group count.
struct RadiusParams {
  int d = 1;
  long horizon = 2;
  double a_bound = 1.0;
  double sigma = 1.0;
  double lambda = 1.0;
  double theta_bound = 1.0;
  int n = 1;             // max actions per round (rho' and rho'')
  int k = 1;             // group count (eta)
  double inflation = 1.0;  // posterior inflation (rho')
  bool sigma_scaled = false;  // optional sigma factor on the leading sqrt term
};

/// Evaluates the selected closed-form radius:
///   rho    = sqrt(d log(1 + T a^2/(d s^2)) + 7 log T) + (theta + sqrt(7 log T))/sqrt(lambda)
///   rho'   = max{rho, iota sqrt(min{2d + 12 log T, 6 log(2nT)})}
///   rho''  = sqrt(6 log(2nT))
///   eta    = rho with d = block dim and log T replaced by log(kT)
/// Horizons below 2 are rejected.
double confidence_radius(RadiusKind kind, const RadiusParams& p);

/// [<theta_hat, a> - r * ||a||_cov, <theta_hat, a> + r * ||a||_cov].
std::pair<double, double> confidence_interval(const RidgeState& state,
                                              double radius, const Vector& a);

/// Maximum lower confidence bound over the set.
double baseline(const RidgeState& state, double radius, const ActionSet& set);

/// Argmax of <theta_hat, A>; ties to the lowest index.
int select_greedy(const RidgeState& state, const ActionSet& set);

/// Argmax of the upper confidence bound; ties to the lowest index.
int select_oful(const RidgeState& state, double radius, const ActionSet& set);

/// Thompson sampling: argmax of <theta_tilde, A> for theta_tilde drawn from
/// the (inflation-scaled) posterior. inflation == 1 is the Bayesian variant,
/// inflation == 0 degenerates to select_greedy.
int select_ts(const RidgeState& state, double inflation, const ActionSet& set,
              Rng& rng);

/// Indices whose upper bound clears alpha * (max U - B) + B, B the baseline.
/// Never empty: the max-U achiever always qualifies.
std::vector<int> sieve_actions(const RidgeState& state, double radius,
                               double alpha, const ActionSet& set);

/// Greedy choice restricted to the sieved survivors.
int select_sg(const RidgeState& state, double radius, double alpha,
              const ActionSet& set);

/// Generic worth-maximization entry point; the selectors above are instances.
int roful_select(const ActionSet& set,
                 const std::function<double(int)>& worth);

/// Algorithm selector plus hyperparameters, as consumed by the harness.
struct PolicyConfig {
  PolicyKind kind = PolicyKind::kOful;
  RadiusKind radius_kind = RadiusKind::kRho;
  double inflation = 1.0;  // TS only
  double alpha = 0.5;      // SG only, in [0, 1]
  std::string label() const;
};

}  // namespace linbandit
