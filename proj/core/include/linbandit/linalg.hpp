#pragma once

#include <Eigen/Dense>

#include "linbandit/rng.hpp"

namespace linbandit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Full Cholesky refresh cadence for RidgeState; washes out rank-1 drift over
/// long runs.
inline constexpr long kRefactorInterval = 512;

/// Lower-triangular L with L * L^T = m. Requires m symmetric (within 1e-12);
/// throws std::domain_error("not positive definite") on a non-positive pivot.
Matrix cholesky_factor(const Matrix& m);

/// Online ridge / Gaussian-posterior statistics of the observed action-reward
/// stream. Holds both the precision matrix and the covariance: the precision
/// is updated by rank-1 addition, the covariance by the matching
/// Sherman-Morrison downdate, and the pair is re-synced by a full solve every
/// kRefactorInterval updates.
class RidgeState {
 public:
  RidgeState(int dim, double lambda, double sigma);

  /// Rebuilds a state from explicit moments; mainly for diagnostics and tests.
  static RidgeState from_moments(Vector theta_hat, Matrix cov, double lambda,
                                 double sigma);

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  double sigma() const { return sigma_; }
  long count() const { return count_; }
  const Matrix& cov() const { return cov_; }
  const Matrix& inv_cov() const { return inv_cov_; }
  const Vector& theta_hat() const { return theta_hat_; }

  /// In-place observation of (action, reward). O(d^2).
  void update(const Vector& action, double reward);

 private:
  void refactor();

  int dim_;
  double lambda_;
  double sigma_;
  Matrix inv_cov_;
  Matrix cov_;
  Vector theta_hat_;
  long count_ = 0;
};

/// Squared Mahalanobis norm a^T cov a under the state's covariance.
double mahalanobis_sq(const RidgeState& state, const Vector& a);

/// Value-returning variant of RidgeState::update.
RidgeState posterior_update(RidgeState state, const Vector& action, double reward);

/// Draw from N(theta_hat, inflation^2 * cov): theta_hat + inflation * L * z
/// with L = cholesky_factor(cov) and z i.i.d. standard normal.
Vector sample_posterior(const RidgeState& state, double inflation, Rng& rng);

}  // namespace linbandit
