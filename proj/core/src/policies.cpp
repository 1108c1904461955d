#include "linbandit/policies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace linbandit {

namespace {

void validate_common(const RadiusParams& p) {
  if (p.horizon < 2) throw std::invalid_argument("horizon must be at least 2");
  if (p.d < 1 || p.n < 1 || p.k < 1) throw std::invalid_argument("d, n, k must be >= 1");
  if (p.a_bound <= 0 || p.sigma <= 0 || p.lambda <= 0 || p.theta_bound <= 0) {
    throw std::invalid_argument("radius parameters must be positive");
  }
}

double rho_like(const RadiusParams& p, double log_term) {
  const double t = static_cast<double>(p.horizon);
  double lead = std::sqrt(p.d * std::log(1.0 + t * p.a_bound * p.a_bound /
                                                   (p.d * p.sigma * p.sigma)) +
                          7.0 * log_term);
  if (p.sigma_scaled) lead *= p.sigma;
  return lead + (p.theta_bound + std::sqrt(7.0 * log_term)) / std::sqrt(p.lambda);
}

Vector theta_direction(const RidgeState& state) { return state.theta_hat(); }

}  // namespace

double confidence_radius(RadiusKind kind, const RadiusParams& p) {
  validate_common(p);
  const double t = static_cast<double>(p.horizon);
  switch (kind) {
    case RadiusKind::kRho:
      return rho_like(p, std::log(t));
    case RadiusKind::kRhoPrime: {
      if (p.inflation < 0) throw std::invalid_argument("inflation must be >= 0");
      const double rho = rho_like(p, std::log(t));
      const double spread = std::min(2.0 * p.d + 12.0 * std::log(t),
                                     6.0 * std::log(2.0 * p.n * t));
      return std::max(rho, p.inflation * std::sqrt(spread));
    }
    case RadiusKind::kRhoDoublePrime:
      return std::sqrt(6.0 * std::log(2.0 * p.n * t));
    case RadiusKind::kEta:
      return rho_like(p, std::log(static_cast<double>(p.k) * t));
  }
  throw std::logic_error("unknown radius kind");
}

std::pair<double, double> confidence_interval(const RidgeState& state,
                                              double radius, const Vector& a) {
  const double mid = state.theta_hat().dot(a);
  const double half = radius * std::sqrt(mahalanobis_sq(state, a));
  return {mid - half, mid + half};
}

double baseline(const RidgeState& state, double radius, const ActionSet& set) {
  if (set.actions.empty()) throw std::invalid_argument("empty action set");
  double b = -std::numeric_limits<double>::infinity();
  for (const Vector& a : set.actions) {
    b = std::max(b, confidence_interval(state, radius, a).first);
  }
  return b;
}

int select_greedy(const RidgeState& state, const ActionSet& set) {
  const Vector theta = theta_direction(state);
  return roful_select(set, [&](int i) { return theta.dot(set.actions[i]); });
}

int select_oful(const RidgeState& state, double radius, const ActionSet& set) {
  return roful_select(set, [&](int i) {
    return confidence_interval(state, radius, set.actions[i]).second;
  });
}

int select_ts(const RidgeState& state, double inflation, const ActionSet& set,
              Rng& rng) {
  const Vector theta_tilde = sample_posterior(state, inflation, rng);
  return roful_select(set,
                      [&](int i) { return theta_tilde.dot(set.actions[i]); });
}

std::vector<int> sieve_actions(const RidgeState& state, double radius,
                               double alpha, const ActionSet& set) {
  if (set.actions.empty()) throw std::invalid_argument("empty action set");
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0, 1]");
  const int n = static_cast<int>(set.actions.size());
  std::vector<double> upper(n);
  double b = -std::numeric_limits<double>::infinity();
  double u_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    auto [lo, hi] = confidence_interval(state, radius, set.actions[i]);
    upper[i] = hi;
    b = std::max(b, lo);
    u_max = std::max(u_max, hi);
  }
  // clamp: rounding in alpha*(u_max-b)+b can land one ulp above u_max at
  // alpha=1, which would empty the sieve
  const double threshold = std::min(alpha * (u_max - b) + b, u_max);
  std::vector<int> survivors;
  for (int i = 0; i < n; ++i) {
    if (upper[i] >= threshold) survivors.push_back(i);
  }
  return survivors;
}

int select_sg(const RidgeState& state, double radius, double alpha,
              const ActionSet& set) {
  const std::vector<int> survivors = sieve_actions(state, radius, alpha, set);
  const Vector theta = theta_direction(state);
  int best = survivors.front();
  double best_value = theta.dot(set.actions[best]);
  for (std::size_t j = 1; j < survivors.size(); ++j) {
    const int i = survivors[j];
    const double value = theta.dot(set.actions[i]);
    if (value > best_value) {
      best = i;
      best_value = value;
    }
  }
  return best;
}

int roful_select(const ActionSet& set, const std::function<double(int)>& worth) {
  if (set.actions.empty()) throw std::invalid_argument("empty action set");
  int best = 0;
  double best_value = worth(0);
  for (int i = 1; i < static_cast<int>(set.actions.size()); ++i) {
    const double value = worth(i);
    if (value > best_value) {
      best = i;
      best_value = value;
    }
  }
  return best;
}

std::string PolicyConfig::label() const {
  switch (kind) {
    case PolicyKind::kOful:
      return "oful";
    case PolicyKind::kGreedy:
      return "greedy";
    case PolicyKind::kTs: {
      if (inflation == 1.0) return "ts";
      char buf[32];
      std::snprintf(buf, sizeof(buf), "ts(%g)", inflation);
      return buf;
    }
    case PolicyKind::kSg: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "sg(%g)", alpha);
      return buf;
    }
  }
  return "unknown";
}

}  // namespace linbandit
