#include "spatgev/gev.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

namespace spatgev {

void AnnualSeries::validate() const {
  if (years.size() != values.size())
    throw std::invalid_argument("AnnualSeries: years/values length mismatch");
  if (years.empty()) throw std::invalid_argument("AnnualSeries: empty series");
  std::set<int> uniq(years.begin(), years.end());
  if (uniq.size() != years.size())
    throw std::invalid_argument("AnnualSeries: duplicate year for station " + station_id);
  for (double v : values)
    if (!(std::isfinite(v) && v > 0.0))
      throw std::invalid_argument("AnnualSeries: nonpositive or non-finite value for station " +
                                  station_id);
}

namespace gev {

Deriv dloglik_sum(const std::vector<double>& ys, const GevParams& p, int family) {
  Deriv total;
  for (double y : ys) {
    Deriv d;
    switch (family) {
      case 0: d = dloglik_mu(y, p); break;
      case 1: d = dloglik_kappa(y, p); break;
      case 2: d = dloglik_xi(y, p); break;
      default: throw std::invalid_argument("dloglik_sum: family must be 0, 1 or 2");
    }
    total.first += d.first;
    total.second += d.second;
  }
  return total;
}

namespace {

double neg_loglik(const std::vector<double>& ys, double mu, double log_kappa, double xi) {
  const double kappa = std::exp(log_kappa);
  double s = 0.0;
  for (double y : ys) {
    const double lp = log_density(y, mu, kappa, xi);
    if (!std::isfinite(lp)) return 1e300;
    s -= lp;
  }
  return s;
}

using Point3 = std::array<double, 3>;

// Compact Nelder-Mead; deterministic, good enough for 3-parameter fits.
struct SimplexResult {
  Point3 x;
  double f = 0.0;
  bool converged = false;
  int evals = 0;
};

template <class Fn>
SimplexResult nelder_mead(Fn&& fn, Point3 start, Point3 steps, int max_evals, double ftol) {
  constexpr int n = 3;
  std::array<Point3, n + 1> xs;
  std::array<double, n + 1> fs;
  int evals = 0;
  auto eval = [&](const Point3& x) {
    ++evals;
    return fn(x);
  };
  xs[0] = start;
  fs[0] = eval(start);
  for (int i = 0; i < n; ++i) {
    xs[i + 1] = start;
    xs[i + 1][i] += steps[i];
    fs[i + 1] = eval(xs[i + 1]);
  }
  auto order = [&] {
    std::array<int, n + 1> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    std::array<Point3, n + 1> x2;
    std::array<double, n + 1> f2;
    for (int i = 0; i <= n; ++i) {
      x2[i] = xs[idx[i]];
      f2[i] = fs[idx[i]];
    }
    xs = x2;
    fs = f2;
  };
  order();
  bool converged = false;
  while (evals < max_evals) {
    if (std::fabs(fs[n] - fs[0]) <= ftol * (std::fabs(fs[0]) + ftol)) {
      converged = true;
      break;
    }
    Point3 centroid{0, 0, 0};
    for (int i = 0; i < n; ++i)
      for (int d = 0; d < 3; ++d) centroid[d] += xs[i][d] / n;
    auto blend = [&](double coef) {
      Point3 x;
      for (int d = 0; d < 3; ++d) x[d] = centroid[d] + coef * (xs[n][d] - centroid[d]);
      return x;
    };
    const Point3 xr = blend(-1.0);
    const double fr = eval(xr);
    if (fr < fs[0]) {
      const Point3 xe = blend(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      const Point3 xc = blend(fr < fs[n] ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, fs[n])) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          for (int d = 0; d < 3; ++d) xs[i][d] = xs[0][d] + 0.5 * (xs[i][d] - xs[0][d]);
          fs[i] = eval(xs[i]);
        }
      }
    }
    order();
  }
  return {xs[0], fs[0], converged, evals};
}

MleFit fit_values(const std::vector<double>& ys, const std::string& station_id) {
  const double n = static_cast<double>(ys.size());
  const double mean = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double var = 0.0;
  for (double y : ys) var += (y - mean) * (y - mean);
  var /= std::max(1.0, n - 1.0);
  const double sd = std::sqrt(var);
  if (!(sd > 0.0))
    throw std::invalid_argument("mle_fit: degenerate series (all values equal) for station " +
                                station_id);

  // Gumbel moment start: mu = mean - 0.45 sd, kappa = 1.283 / sd, xi = 0.1.
  const Point3 start{mean - 0.45 * sd, std::log(1.283 / sd), 0.1};
  const Point3 steps{0.1 * sd, 0.2, 0.1};
  auto fn = [&](const Point3& x) { return neg_loglik(ys, x[0], x[1], x[2]); };
  SimplexResult r = nelder_mead(fn, start, steps, 2000, 1e-12);
  // restart once from the incumbent to escape flat shoulders
  SimplexResult r2 = nelder_mead(fn, r.x, {0.02 * sd, 0.05, 0.02}, 2000, 1e-12);
  if (r2.f < r.f) r = r2;

  MleFit fit;
  fit.params = GevParams(r.x[0], std::exp(r.x[1]), r.x[2]);
  fit.max_loglik = -r.f;
  fit.converged = r.converged || r2.converged;
  fit.evaluations = r.evals + r2.evals;
  return fit;
}

}  // namespace

MleFit mle_fit(const AnnualSeries& series) {
  series.validate();
  MleFit fit = fit_values(series.values, series.station_id);
  fit.short_series = series.values.size() < 10;
  return fit;
}

std::vector<ReturnLevelBand> bootstrap_return_bands(const AnnualSeries& series, const MleFit& fit,
                                                    const std::vector<double>& periods,
                                                    int bootstrap_B, double level, Rng& rng) {
  if (bootstrap_B < 2) throw std::invalid_argument("bootstrap_return_bands: B must be >= 2");
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("bootstrap_return_bands: level outside (0,1)");
  const std::size_t n = series.values.size();
  std::vector<std::vector<double>> levels(periods.size());
  for (auto& v : levels) v.reserve(bootstrap_B);
  std::vector<double> resample(n);
  int done = 0;
  for (long attempt = 0; done < bootstrap_B; ++attempt) {
    if (attempt > 10L * bootstrap_B)
      throw std::runtime_error("bootstrap_return_bands: too many degenerate resamples for station " +
                               series.station_id);
    for (std::size_t i = 0; i < n; ++i)
      resample[i] = series.values[rng.uniform_index(n)];
    MleFit bfit;
    try {
      bfit = fit_values(resample, series.station_id);
    } catch (const std::invalid_argument&) {
      continue;  // degenerate resample; redraw
    }
    for (std::size_t k = 0; k < periods.size(); ++k)
      levels[k].push_back(return_level(1.0 / periods[k], bfit.params));
    ++done;
  }
  const double alpha = (1.0 - level) / 2.0;
  std::vector<ReturnLevelBand> bands;
  bands.reserve(periods.size());
  for (std::size_t k = 0; k < periods.size(); ++k) {
    ReturnLevelBand band;
    band.period = periods[k];
    band.point = return_level(1.0 / periods[k], fit.params);
    band.lower = quantile(levels[k], alpha);
    band.upper = quantile(levels[k], 1.0 - alpha);
    bands.push_back(band);
  }
  return bands;
}

}  // namespace gev
}  // namespace spatgev
