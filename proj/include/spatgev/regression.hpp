#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spatgev/math_util.hpp"
#include "spatgev/rng.hpp"
#include "spatgev/spatial_field.hpp"

namespace spatgev {

// Design matrix over the observed sites; column 0 is the constant, the rest
// are standardized covariates.
struct CovariateMatrix {
  Matrix X;                        // n x (1+p)
  std::vector<std::string> names;  // size 1+p, names[0] == "const"

  int n_sites() const { return static_cast<int>(X.rows()); }
  int n_cols() const { return static_cast<int>(X.cols()); }
  void validate() const;
};

// Covariate inclusion mask; the constant is always in.
struct InclusionModel {
  std::vector<bool> mask;

  static InclusionModel constant_only(int n_cols);
  static InclusionModel all(int n_cols);
  int n_included() const;
  std::vector<int> included_indices() const;
  void validate() const;

  bool operator==(const InclusionModel& o) const { return mask == o.mask; }
};

// theta | M ~ N(theta0_M, Xi0_M); Xi0 is the prior covariance, submodels take
// the corresponding rows/columns.
struct RegressionPrior {
  Vector theta0;
  Matrix covariance;

  static RegressionPrior standard_normal(int n_cols, double intercept_mean);
  void validate(int n_cols) const;
};

struct ThetaPosterior {
  Vector mean;       // |M|
  Matrix precision;  // |M| x |M|
};

// Full conditional of the included coefficients given the linear predictor
// Upsilon ~ N(X_M theta, K) with K = (1/alpha) E:
//   precision = alpha X_M' E^{-1} X_M + Xi0_M^{-1},
//   mean = precision^{-1} [alpha X_M' E^{-1} Upsilon + Xi0_M^{-1} theta0_M].
ThetaPosterior theta_full_conditional(const Vector& upsilon, const CovariateMatrix& X,
                                      const InclusionModel& M, const SpdFactor& corr_factor,
                                      double alpha, const RegressionPrior& prior);

// Draw from the posterior; returns the full-length coefficient vector with
// excluded entries set to zero.
Vector draw_theta(const ThetaPosterior& post, const InclusionModel& M, int n_cols, Rng& rng);

// Log marginal likelihood of Upsilon under M with theta integrated out:
// log N(Upsilon; X_M theta0_M, K + X_M Xi0_M X_M'). Models with the constant
// included are a priori equally likely, so this is the model score.
double log_model_score(const InclusionModel& M, const Vector& upsilon, const CovariateMatrix& X,
                       const Matrix& K, const RegressionPrior& prior);

// Uniform single-flip neighborhood move over the non-constant covariates.
InclusionModel propose_neighbor_model(const InclusionModel& M, Rng& rng);

}  // namespace spatgev
