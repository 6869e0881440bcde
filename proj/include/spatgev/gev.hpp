#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spatgev/math_util.hpp"
#include "spatgev/rng.hpp"

namespace spatgev {

// Shape values below this threshold are treated as the Gumbel limit; avoids
// catastrophic cancellation in the 1/xi terms.
inline constexpr double kXiEps = 1e-8;

// GEV with location mu, inverse scale kappa > 0 and shape xi. The density is
//   kappa * h(y)^{-(xi+1)/xi} * exp(-h(y)^{-1/xi}),  h(y) = 1 + xi*kappa*(y - mu),
// valid on h(y) > 0.
struct GevParams {
  double mu = 0.0;
  double kappa = 1.0;
  double xi = 0.0;

  GevParams() = default;
  GevParams(double mu_, double kappa_, double xi_) : mu(mu_), kappa(kappa_), xi(xi_) {
    if (!(std::isfinite(mu) && std::isfinite(kappa) && std::isfinite(xi)))
      throw std::invalid_argument("GevParams: non-finite value");
    if (!(kappa > 0.0)) throw std::invalid_argument("GevParams: kappa must be > 0");
  }
};

struct AnnualSeries {
  std::string station_id;
  std::vector<int> years;
  std::vector<double> values;  // annual maxima, > 0

  void validate() const;
};

namespace gev {

// Raw-scalar kernel. Total in (mu, kappa, xi): kappa <= 0 or a support
// violation yields -inf so that M-H acceptance arithmetic never throws.
template <class Scalar>
Scalar log_density(Scalar y, Scalar mu, Scalar kappa, Scalar xi) {
  using std::exp;
  using std::fabs;
  using std::log;
  if (!(kappa > Scalar(0))) return Scalar(kNegInf);
  const Scalar r = kappa * (y - mu);
  if (fabs(xi) < Scalar(kXiEps)) return log(kappa) - r - exp(-r);
  const Scalar h = Scalar(1) + xi * r;
  if (!(h > Scalar(0))) return Scalar(kNegInf);
  const Scalar logh = log(h);
  const Scalar a = exp(-logh / xi);  // h^{-1/xi}
  return log(kappa) - (Scalar(1) + Scalar(1) / xi) * logh - a;
}

template <class Scalar>
Scalar cdf(Scalar y, Scalar mu, Scalar kappa, Scalar xi) {
  using std::exp;
  using std::fabs;
  using std::log;
  const Scalar r = kappa * (y - mu);
  if (fabs(xi) < Scalar(kXiEps)) return exp(-exp(-r));
  const Scalar h = Scalar(1) + xi * r;
  if (!(h > Scalar(0))) return xi > Scalar(0) ? Scalar(0) : Scalar(1);
  return exp(-exp(-log(h) / xi));
}

// u-quantile, u in (0,1).
template <class Scalar>
Scalar quantile(Scalar u, Scalar mu, Scalar kappa, Scalar xi) {
  using std::exp;
  using std::fabs;
  using std::log;
  if (!(u > Scalar(0) && u < Scalar(1))) throw std::domain_error("gev::quantile: u outside (0,1)");
  const Scalar w = -log(u);  // > 0
  if (fabs(xi) < Scalar(kXiEps)) return mu - log(w) / kappa;
  return mu + (exp(-xi * log(w)) - Scalar(1)) / (xi * kappa);
}

inline double log_density(double y, const GevParams& p) { return log_density(y, p.mu, p.kappa, p.xi); }
inline double cdf(double y, const GevParams& p) { return cdf(y, p.mu, p.kappa, p.xi); }
inline double quantile(double u, const GevParams& p) { return quantile(u, p.mu, p.kappa, p.xi); }

// Level exceeded in a year with probability p_exceed; the (1 - p_exceed)
// quantile.
inline double return_level(double p_exceed, const GevParams& p) {
  if (!(p_exceed > 0.0 && p_exceed < 1.0))
    throw std::domain_error("gev::return_level: p_exceed outside (0,1)");
  const double w = -std::log1p(-p_exceed);  // -log(1 - p)
  if (std::fabs(p.xi) < kXiEps) return p.mu - std::log(w) / p.kappa;
  return p.mu - (1.0 - std::exp(-p.xi * std::log(w))) / (p.kappa * p.xi);
}

inline double return_level(double p_exceed, double mu, double kappa, double xi) {
  return return_level(p_exceed, GevParams(mu, kappa, xi));
}

inline double sample(const GevParams& p, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("gev::sample: u outside (0,1)");
  return quantile(u, p);
}

struct Deriv {
  double first = 0.0;
  double second = 0.0;
};

// d/dmu and d^2/dmu^2 of log_density (equivalently the derivatives in the
// location random effect). Requires an in-support y.
inline Deriv dloglik_mu(double y, const GevParams& p) {
  const double eps = y - p.mu;
  if (std::fabs(p.xi) < kXiEps) {
    const double w = std::exp(-p.kappa * eps);
    return {p.kappa * (1.0 - w), -p.kappa * p.kappa * w};
  }
  const double h = 1.0 + p.xi * p.kappa * eps;
  if (!(h > 0.0)) throw std::domain_error("gev::dloglik_mu: off support");
  const double logh = std::log(h);
  const double a = std::exp(-logh / p.xi);  // h^{-1/xi}
  const double k = p.kappa;
  Deriv d;
  d.first = (p.xi + 1.0) * k / h - k * a / h;
  d.second = p.xi * (p.xi + 1.0) * k * k / (h * h) - (p.xi + 1.0) * k * k * a / (h * h);
  return d;
}

// Derivatives in the inverse scale; eps = y - mu is the location residual.
inline Deriv dloglik_kappa(double y, const GevParams& p) {
  const double eps = y - p.mu;
  const double k = p.kappa;
  if (std::fabs(p.xi) < kXiEps) {
    const double w = std::exp(-k * eps);
    return {1.0 / k - eps + eps * w, -1.0 / (k * k) - eps * eps * w};
  }
  const double h = 1.0 + p.xi * k * eps;
  if (!(h > 0.0)) throw std::domain_error("gev::dloglik_kappa: off support");
  const double logh = std::log(h);
  const double a = std::exp(-logh / p.xi);
  Deriv d;
  d.first = 1.0 / k - (p.xi + 1.0) * eps / h + eps * a / h;
  d.second = -1.0 / (k * k) + p.xi * (p.xi + 1.0) * eps * eps / (h * h) -
             (p.xi + 1.0) * eps * eps * a / (h * h);
  return d;
}

// The shape derivatives decompose the log-density as log kappa - f1 - f2;
// the pieces are exposed so each can be checked independently.
struct XiParts {
  double f1, f2, f1dot, f2dot, g1, g2, g3, g4;
};

inline XiParts dloglik_xi_parts(double y, const GevParams& p) {
  const double xi = p.xi;
  if (std::fabs(xi) < kXiEps) throw std::domain_error("gev::dloglik_xi: |xi| below Gumbel threshold");
  const double eps = y - p.mu;
  const double k = p.kappa;
  const double h = 1.0 + xi * k * eps;
  if (!(h > 0.0)) throw std::domain_error("gev::dloglik_xi: off support");
  const double logh = std::log(h);
  const double ke_h = k * eps / h;
  const double xi2 = xi * xi;
  const double xi3 = xi2 * xi;
  XiParts q;
  q.f1 = (xi + 1.0) / xi * logh;
  q.f2 = std::exp(-logh / xi);
  q.f1dot = -logh / xi2 + (xi + 1.0) / xi * ke_h;
  q.f2dot = q.f2 * (logh / xi2 - ke_h / xi);
  q.g1 = -2.0 * logh / xi3 + ke_h / xi2;
  q.g2 = -ke_h / xi2 - (xi + 1.0) / xi * ke_h * ke_h;
  q.g3 = q.f2dot * (logh / xi2) + q.f2 * (-2.0 * logh / xi3 + ke_h / xi2);
  q.g4 = q.f2dot * (ke_h / xi) - q.f2 * k * eps * (1.0 / (xi2 * h) + ke_h / (xi * h));
  return q;
}

inline Deriv dloglik_xi(double y, const GevParams& p) {
  const XiParts q = dloglik_xi_parts(y, p);
  return {-q.f1dot - q.f2dot, q.g1 - q.g2 - q.g3 + q.g4};
}

// Summed derivatives over a series; the proposal-construction workhorse.
// Family: 0 = mu, 1 = kappa, 2 = xi.
Deriv dloglik_sum(const std::vector<double>& ys, const GevParams& p, int family);

struct MleFit {
  GevParams params;
  double max_loglik = kNegInf;
  bool converged = false;
  int evaluations = 0;
  bool short_series = false;  // series shorter than 10, fit still attempted
};

// Nelder-Mead over (mu, log kappa, xi) started from Gumbel moment estimates.
MleFit mle_fit(const AnnualSeries& series);

struct ReturnLevelBand {
  double period = 0.0;  // years; p_exceed = 1/period
  double point = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

// Percentile intervals of return levels over B nonparametric resamples.
std::vector<ReturnLevelBand> bootstrap_return_bands(const AnnualSeries& series,
                                                    const MleFit& fit,
                                                    const std::vector<double>& periods,
                                                    int bootstrap_B, double level, Rng& rng);

}  // namespace gev
}  // namespace spatgev
