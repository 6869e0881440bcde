#pragma once

#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "spatgev/math_util.hpp"

namespace spatgev {

struct SiteSet {
  std::vector<std::string> ids;
  Matrix coords;  // n x 2, planar km

  int size() const { return static_cast<int>(coords.rows()); }
  void validate() const;
};

// Exponential-decay GP hyperparameters: marginal variance 1/alpha, range lambda.
struct GpHyper {
  double alpha = 1.0;
  double lambda = 1.0;

  GpHyper() = default;
  GpHyper(double alpha_, double lambda_) : alpha(alpha_), lambda(lambda_) {
    if (!(alpha > 0.0 && lambda > 0.0))
      throw std::invalid_argument("GpHyper: alpha and lambda must be > 0");
  }
};

Matrix pairwise_distances(const Matrix& a, const Matrix& b);

// Correlation part E(lambda): E_ij = exp(-d_ij / lambda).
Matrix exp_corr_matrix(const Matrix& dist, double lambda);

// K_ij = (1/alpha) exp(-d_ij / lambda).
Matrix exp_cov_matrix(const SiteSet& sites, const GpHyper& h);
Matrix exp_cov_cross(const SiteSet& rows, const SiteSet& cols, const GpHyper& h);

// Cholesky factor with an escalating diagonal jitter ladder; short station
// distances routinely make exponential covariances near-singular.
class SpdFactor {
 public:
  explicit SpdFactor(const Matrix& K);

  Vector solve(const Vector& b) const { return llt_.solve(b); }
  Matrix solve(const Matrix& b) const { return llt_.solve(b); }
  double log_det() const { return log_det_; }
  double quad_form(const Vector& x) const { return x.dot(llt_.solve(x)); }
  Matrix inverse() const;
  double jitter() const { return jitter_; }
  const Eigen::LLT<Matrix>& llt() const { return llt_; }

 private:
  Eigen::LLT<Matrix> llt_;
  double log_det_ = 0.0;
  double jitter_ = 0.0;
};

struct GpConditional {
  Vector mean;
  Matrix cov;
};

// Conditional distribution of the field at `targets` given observed values
// tau_given at `given`: the kriging mean/covariance under exp_cov_matrix.
GpConditional gp_conditional(const SiteSet& targets, const SiteSet& given,
                             const Vector& tau_given, const GpHyper& h);

// Precomputed single-target kriging system against a fixed observed set.
struct KrigingSystem {
  // weights w = E(S,S)^{-1} E(S,q); mean = w . tau; the alpha factor cancels
  // in the weights and scales only the variance.
  Vector weights;
  double corr_reduction = 0.0;  // w . E(S,q), in [0,1]

  double mean(const Vector& tau) const { return weights.dot(tau); }
  double variance(double alpha) const {
    const double v = (1.0 - corr_reduction) / alpha;
    return v > 0.0 ? v : 0.0;
  }
};

KrigingSystem kriging_system(const SpdFactor& corr_factor, const Vector& cross_corr);

}  // namespace spatgev
