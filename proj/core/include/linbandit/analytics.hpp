#pragma once

#include <string>
#include <vector>

#include "linbandit/environment.hpp"
#include "linbandit/linalg.hpp"
#include "linbandit/policies.hpp"

namespace linbandit {

/// Standard normal CDF.
double normal_cdf(double x);

/// Clipped per-round uncertainty of an action: min{sigma^2, ||a||^2_cov}.
double uncertainty_v(const RidgeState& state, const Vector& a);

/// Closed-form cap on the total clipped uncertainty any policy can accumulate:
/// 2 sigma^2 d log(1 + T a^2 lambda / (d sigma^2)).
double uncertainty_complexity_bound(int d, long horizon, double a_bound,
                                    double lambda, double sigma);

/// Regret-bound certificate assembled from the uncertainty complexity K, the
/// optimism parameter p, the deviation constant D, and a gap level.
struct BoundCertificate {
  double complexity_k = 0;
  double optimism_p = 1;
  double deviation_d = 0;
  double delta = 0;
  double q_delta = 1;
  double gap_dependent_bound = 0;    // 2K/(delta p) + D/delta + T delta q_delta
  double gap_independent_bound = 0;  // 2 sqrt((2K/p + D) T)
};

BoundCertificate regret_bounds(double complexity_k, double optimism_p,
                               double deviation_d, long horizon, double delta,
                               double q_delta);

/// Per-policy optimism parameter: 1 for OFUL, Phi(-rho/iota)/2 for inflated
/// TS, alpha^2 for SG. Greedy carries no optimism guarantee and is rejected.
/// The result is clamped away from zero so certificates stay finite-or-inf
/// without dividing by zero.
double optimism_parameter(const PolicyConfig& config, double rho);

/// Fraction of rounds with gap <= z; +infinity entries never count.
double empirical_margin(const std::vector<double>& gaps, double z);

/// Least-squares-through-origin fit of frequency(z) ~ c0 * z over a 20-point
/// grid on (0, delta]; delta defaults to the 10th percentile of finite gaps.
struct MarginFit {
  double c0 = 0;
  double delta = 0;
  std::vector<std::pair<double, double>> grid;  // (z, empirical frequency)
};
MarginFit fit_margin(const std::vector<double>& gaps, double delta = 0.0);

/// Largest eigenvalue of the covariance restricted to `coords` (full matrix
/// when empty), one value per state, plus the fitted c2 = median of t * value
/// over t >= 1.
struct ExpansionTrace {
  std::vector<double> values;
  double c2 = 0;
};
ExpansionTrace linear_expansion_trace(const std::vector<RidgeState>& states,
                                      const std::vector<int>& coords = {});

/// Monte Carlo check of the chi-squared tail bound P(X >= 2d + 3g) <= e^-g.
struct Chi2TailResult {
  double empirical = 0;
  double bound = 0;
  bool pass = false;
};
Chi2TailResult chi2_tail_check(int d, double gamma, long num_samples, Rng& rng);

/// Per-round record of one simulated episode.
struct RegretTrace {
  struct Round {
    long t = 0;
    int chosen = 0;
    double inst_regret = 0;
    double gap = 0;
    double uncertainty = 0;
  };
  std::string policy_label;
  std::vector<Round> rounds;
  std::vector<double> cumulative;

  std::vector<double> gaps() const;
  double total_uncertainty() const;
};

}  // namespace linbandit
