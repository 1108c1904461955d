#include "linbandit/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace linbandit {

namespace {

void require_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("matrix must be square and non-empty");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("matrix is not symmetric");
  }
}

}  // namespace

Matrix cholesky_factor(const Matrix& m) {
  require_symmetric(m, 1e-12);
  const long n = m.rows();
  Matrix l = Matrix::Zero(n, n);
  for (long j = 0; j < n; ++j) {
    double pivot = m(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot <= 0.0) {
      throw std::domain_error("not positive definite");
    }
    l(j, j) = std::sqrt(pivot);
    if (j + 1 < n) {
      // column j below the pivot
      l.col(j).tail(n - j - 1) =
          (m.col(j).tail(n - j - 1) -
           l.bottomLeftCorner(n - j - 1, j) * l.row(j).head(j).transpose()) /
          l(j, j);
    }
  }
  return l;
}

RidgeState::RidgeState(int dim, double lambda, double sigma)
    : dim_(dim), lambda_(lambda), sigma_(sigma) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  if (lambda <= 0.0) throw std::invalid_argument("lambda must be positive");
  if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
  inv_cov_ = Matrix::Identity(dim, dim) / lambda;
  cov_ = Matrix::Identity(dim, dim) * lambda;
  theta_hat_ = Vector::Zero(dim);
}

RidgeState RidgeState::from_moments(Vector theta_hat, Matrix cov, double lambda,
                                    double sigma) {
  require_symmetric(cov, 1e-12);
  if (theta_hat.size() != cov.rows()) {
    throw std::invalid_argument("theta/cov dimension mismatch");
  }
  RidgeState state(static_cast<int>(cov.rows()), lambda, sigma);
  Matrix l = cholesky_factor(cov);  // also validates positive definiteness
  state.inv_cov_ = l.transpose()
                       .triangularView<Eigen::Upper>()
                       .solve(l.triangularView<Eigen::Lower>().solve(
                           Matrix::Identity(cov.rows(), cov.cols())));
  state.inv_cov_ = ((state.inv_cov_ + state.inv_cov_.transpose()) / 2.0).eval();
  state.cov_ = std::move(cov);
  state.theta_hat_ = std::move(theta_hat);
  return state;
}

void RidgeState::update(const Vector& action, double reward) {
  if (action.size() != dim_) {
    throw std::invalid_argument("action dimension mismatch");
  }
  const double inv_noise = 1.0 / (sigma_ * sigma_);

  Vector b = inv_cov_ * theta_hat_ + inv_noise * reward * action;

  inv_cov_.noalias() += inv_noise * action * action.transpose();

  // Sherman-Morrison downdate of the covariance.
  Vector u = cov_ * action;
  const double denom = sigma_ * sigma_ + action.dot(u);
  cov_.noalias() -= (u * u.transpose()) / denom;
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();

  ++count_;
  if (count_ % kRefactorInterval == 0) {
    refactor();
  }

  theta_hat_.noalias() = cov_ * b;
}

void RidgeState::refactor() {
  Matrix l = cholesky_factor(inv_cov_);
  cov_ = l.transpose().triangularView<Eigen::Upper>().solve(
      l.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim_, dim_)));
  cov_ = ((cov_ + cov_.transpose()) / 2.0).eval();
}

double mahalanobis_sq(const RidgeState& state, const Vector& a) {
  if (a.size() != state.dim()) {
    throw std::invalid_argument("action dimension mismatch");
  }
  double q = a.dot(state.cov() * a);
  return q > 0.0 ? q : 0.0;
}

RidgeState posterior_update(RidgeState state, const Vector& action, double reward) {
  state.update(action, reward);
  return state;
}

Vector sample_posterior(const RidgeState& state, double inflation, Rng& rng) {
  if (inflation < 0.0) throw std::invalid_argument("inflation must be >= 0");
  if (inflation == 0.0) return state.theta_hat();
  Matrix l = cholesky_factor(state.cov());
  Vector z(state.dim());
  for (int i = 0; i < state.dim(); ++i) z(i) = rng.normal();
  return state.theta_hat() + inflation * (l * z);
}

}  // namespace linbandit
