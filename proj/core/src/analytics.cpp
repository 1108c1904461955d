#include "linbandit/analytics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace linbandit {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double uncertainty_v(const RidgeState& state, const Vector& a) {
  const double s2 = state.sigma() * state.sigma();
  return std::min(s2, mahalanobis_sq(state, a));
}

double uncertainty_complexity_bound(int d, long horizon, double a_bound,
                                    double lambda, double sigma) {
  if (d < 1 || horizon < 1 || a_bound <= 0 || lambda <= 0 || sigma <= 0) {
    throw std::invalid_argument("complexity-bound parameters must be positive");
  }
  const double s2 = sigma * sigma;
  return 2.0 * s2 * d *
         std::log(1.0 + horizon * a_bound * a_bound * lambda / (d * s2));
}

BoundCertificate regret_bounds(double complexity_k, double optimism_p,
                               double deviation_d, long horizon, double delta,
                               double q_delta) {
  if (complexity_k <= 0 || optimism_p <= 0 || optimism_p > 1 || deviation_d <= 0 ||
      horizon < 1 || delta <= 0 || q_delta < 0 || q_delta > 1) {
    throw std::invalid_argument("invalid certificate inputs");
  }
  BoundCertificate cert;
  cert.complexity_k = complexity_k;
  cert.optimism_p = optimism_p;
  cert.deviation_d = deviation_d;
  cert.delta = delta;
  cert.q_delta = q_delta;
  const double t = static_cast<double>(horizon);
  cert.gap_dependent_bound = 2.0 * complexity_k / (delta * optimism_p) +
                             deviation_d / delta + t * delta * q_delta;
  cert.gap_independent_bound =
      2.0 * std::sqrt((2.0 * complexity_k / optimism_p + deviation_d) * t);
  return cert;
}

double optimism_parameter(const PolicyConfig& config, double rho) {
  double p;
  switch (config.kind) {
    case PolicyKind::kOful:
      p = 1.0;
      break;
    case PolicyKind::kTs:
      if (config.inflation <= 0) {
        throw std::invalid_argument("TS optimism requires positive inflation");
      }
      p = normal_cdf(-rho / config.inflation) / 2.0;
      break;
    case PolicyKind::kSg:
      p = config.alpha * config.alpha;
      break;
    default:
      throw std::invalid_argument("no optimism parameter for this policy");
  }
  return std::max(p, DBL_MIN);
}

double empirical_margin(const std::vector<double>& gaps, double z) {
  if (gaps.empty()) throw std::invalid_argument("empty gap list");
  if (z <= 0) throw std::invalid_argument("z must be positive");
  long hits = 0;
  for (double g : gaps) {
    if (g <= z) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gaps.size());
}

MarginFit fit_margin(const std::vector<double>& gaps, double delta) {
  if (gaps.empty()) throw std::invalid_argument("empty gap list");
  if (delta <= 0.0) {
    std::vector<double> finite;
    for (double g : gaps) {
      if (std::isfinite(g)) finite.push_back(g);
    }
    if (finite.empty()) {
      return MarginFit{0.0, 0.0, {}};  // all gaps infinite: margin trivially holds
    }
    std::sort(finite.begin(), finite.end());
    delta = finite[finite.size() / 10];
    if (delta <= 0.0) delta = finite.back() > 0 ? finite.back() : 1.0;
  }
  MarginFit fit;
  fit.delta = delta;
  double sxx = 0, sxy = 0;
  constexpr int kGridPoints = 20;
  for (int i = 1; i <= kGridPoints; ++i) {
    const double z = delta * i / kGridPoints;
    const double f = empirical_margin(gaps, z);
    fit.grid.emplace_back(z, f);
    sxx += z * z;
    sxy += z * f;
  }
  fit.c0 = sxx > 0 ? sxy / sxx : 0.0;
  return fit;
}

ExpansionTrace linear_expansion_trace(const std::vector<RidgeState>& states,
                                      const std::vector<int>& coords) {
  ExpansionTrace trace;
  trace.values.reserve(states.size());
  std::vector<double> scaled;
  for (std::size_t t = 0; t < states.size(); ++t) {
    const Matrix& cov = states[t].cov();
    Matrix sub;
    if (coords.empty()) {
      sub = cov;
    } else {
      sub.resize(coords.size(), coords.size());
      for (std::size_t i = 0; i < coords.size(); ++i) {
        for (std::size_t j = 0; j < coords.size(); ++j) {
          if (coords[i] < 0 || coords[i] >= states[t].dim()) {
            throw std::invalid_argument("coordinate out of range");
          }
          sub(i, j) = cov(coords[i], coords[j]);
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
    const double op_norm = solver.eigenvalues().maxCoeff();
    trace.values.push_back(op_norm);
    if (t >= 1) scaled.push_back(static_cast<double>(t) * op_norm);
  }
  if (!scaled.empty()) {
    std::sort(scaled.begin(), scaled.end());
    const std::size_t n = scaled.size();
    trace.c2 = n % 2 == 1 ? scaled[n / 2]
                          : 0.5 * (scaled[n / 2 - 1] + scaled[n / 2]);
  }
  return trace;
}

Chi2TailResult chi2_tail_check(int d, double gamma, long num_samples, Rng& rng) {
  if (d < 1 || gamma <= 0 || num_samples < 1) {
    throw std::invalid_argument("chi2 check parameters must be positive");
  }
  const double threshold = 2.0 * d + 3.0 * gamma;
  long exceed = 0;
  for (long s = 0; s < num_samples; ++s) {
    double x = 0;
    for (int i = 0; i < d; ++i) {
      const double z = rng.normal();
      x += z * z;
    }
    if (x >= threshold) ++exceed;
  }
  Chi2TailResult result;
  result.empirical = static_cast<double>(exceed) / static_cast<double>(num_samples);
  result.bound = std::exp(-gamma);
  result.pass = result.empirical <=
                result.bound + 3.0 * std::sqrt(result.bound / num_samples);
  return result;
}

std::vector<double> RegretTrace::gaps() const {
  std::vector<double> out;
  out.reserve(rounds.size());
  for (const Round& r : rounds) out.push_back(r.gap);
  return out;
}

double RegretTrace::total_uncertainty() const {
  double sum = 0;
  for (const Round& r : rounds) sum += r.uncertainty;
  return sum;
}

}  // namespace linbandit
