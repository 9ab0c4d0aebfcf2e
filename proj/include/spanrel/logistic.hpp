#pragma once

// Ridge-penalized logistic regression fitted by iteratively reweighted least
// squares (Newton's method on the penalized log-likelihood).
//
//   maximize  sum_i [ y_i log p_i + (1 - y_i) log(1 - p_i) ] - (lambda/2) |beta_-0|^2
//
// Column 0 is the intercept and is never penalized.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "spanrel/error.hpp"

namespace spanrel {

struct LogisticOptions {
  double lambda = 1e-4;
  std::size_t max_iterations = 100;
  double tolerance = 1e-8;  // on max |delta beta|
};

struct LogisticFit {
  Eigen::VectorXd coefficients;
  std::size_t iterations = 0;
  bool converged = false;
  double lambda = 0.0;
  double penalized_log_likelihood = 0.0;
};

namespace detail {

inline double log1p_exp(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace detail

inline double penalized_log_likelihood(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& beta, double lambda) {
  const Eigen::VectorXd eta = X * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) ll += y(i) * eta(i) - detail::log1p_exp(eta(i));
  return ll - 0.5 * lambda * beta.tail(beta.size() - 1).squaredNorm();
}

/// Gradient of the penalized log-likelihood.
inline Eigen::VectorXd penalized_score(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                       const Eigen::VectorXd& beta, double lambda) {
  const Eigen::VectorXd eta = X * beta;
  Eigen::VectorXd resid(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) resid(i) = y(i) - detail::sigmoid(eta(i));
  Eigen::VectorXd g = X.transpose() * resid;
  g.tail(g.size() - 1) -= lambda * beta.tail(beta.size() - 1);
  return g;
}

/// Throws ComputationError when lambda == 0 and X is rank deficient. A run
/// that hits max_iterations returns converged == false; raising lambda is
/// the usual remedy.
inline LogisticFit fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const LogisticOptions& options = {}) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (p < 1 || n < 1) throw std::invalid_argument("fit_logistic: empty design");
  if (y.size() != n) throw std::invalid_argument("fit_logistic: outcome length mismatch");
  if (options.lambda < 0) throw std::invalid_argument("fit_logistic: lambda must be >= 0");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0.0 && y(i) != 1.0) throw std::invalid_argument("fit_logistic: outcomes must be 0/1");
  }
  if (options.lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < p) throw ComputationError("design matrix is rank deficient (lambda = 0)");
  }

  Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p, options.lambda);
  penalty(0) = 0.0;

  LogisticFit fit;
  fit.lambda = options.lambda;
  fit.coefficients = Eigen::VectorXd::Zero(p);
  double objective = penalized_log_likelihood(X, y, fit.coefficients, options.lambda);

  for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
    fit.iterations = iter;
    const Eigen::VectorXd eta = X * fit.coefficients;
    Eigen::VectorXd w(n);
    Eigen::VectorXd resid(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mu = detail::sigmoid(eta(i));
      w(i) = std::max(mu * (1.0 - mu), 1e-12);
      resid(i) = y(i) - mu;
    }
    Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    H.diagonal() += penalty;
    const Eigen::VectorXd grad = X.transpose() * resid - penalty.cwiseProduct(fit.coefficients);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw ComputationError("IRLS normal equations are singular");
    }
    Eigen::VectorXd step = ldlt.solve(grad);

    // Step halving keeps the penalized likelihood non-decreasing.
    double scale = 1.0;
    Eigen::VectorXd candidate = fit.coefficients + step;
    double next = penalized_log_likelihood(X, y, candidate, options.lambda);
    for (int halvings = 0; halvings < 30 && next < objective - 1e-12 * std::abs(objective); ++halvings) {
      scale *= 0.5;
      candidate = fit.coefficients + scale * step;
      next = penalized_log_likelihood(X, y, candidate, options.lambda);
    }
    const double change = (scale * step).cwiseAbs().maxCoeff();
    fit.coefficients = candidate;
    objective = next;
    if (!std::isfinite(change)) throw ComputationError("IRLS diverged");
    if (change < options.tolerance) {
      fit.converged = true;
      break;
    }
  }
  fit.penalized_log_likelihood = objective;
  return fit;
}

}  // namespace spanrel
