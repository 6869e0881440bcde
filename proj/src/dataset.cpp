#include "spatgev/dataset.hpp"

#include <algorithm>

namespace spatgev {

long Dataset::n_observations() const {
  long n = 0;
  for (const auto& s : series) n += static_cast<long>(s.values.size());
  return n;
}

int Dataset::covariate_index(const std::string& name) const {
  for (int j = 0; j < covariates.n_cols(); ++j)
    if (covariates.names[j] == name) return j;
  return -1;
}

Vector Dataset::design_row(const Vector& raw) const {
  const Vector std_vals = standardizer.apply(raw);
  Vector row(std_vals.size() + 1);
  row(0) = 1.0;
  row.tail(std_vals.size()) = std_vals;
  return row;
}

void Dataset::validate() const {
  sites.validate();
  covariates.validate();
  if (static_cast<int>(series.size()) != n_sites())
    throw std::invalid_argument("Dataset: series/sites mismatch");
  for (const auto& s : series) s.validate();
  if (raw_covariates.rows() != n_sites())
    throw std::invalid_argument("Dataset: raw covariate rows mismatch");
}

Dataset assemble_dataset(std::vector<AnnualSeries> series, const Vector& lat, const Vector& lon,
                         const std::vector<std::string>& covariate_names,
                         const Matrix& raw_covariates, Projection::Type projection_type) {
  const int n = static_cast<int>(series.size());
  if (lat.size() != n || lon.size() != n || raw_covariates.rows() != n)
    throw std::invalid_argument("assemble_dataset: size mismatch");
  if (static_cast<Eigen::Index>(covariate_names.size()) != raw_covariates.cols())
    throw std::invalid_argument("assemble_dataset: covariate names/columns mismatch");

  Dataset d;
  d.projection.type = projection_type;
  d.projection.lat0 = lat.mean();
  d.projection.lon0 = lon.mean();
  d.lat = lat;
  d.lon = lon;

  d.sites.coords.resize(n, 2);
  d.sites.ids.reserve(n);
  for (int i = 0; i < n; ++i) {
    d.sites.ids.push_back(series[i].station_id);
    const auto [x, y] = d.projection.to_km(lat(i), lon(i));
    d.sites.coords(i, 0) = x;
    d.sites.coords(i, 1) = y;
  }
  d.series = std::move(series);
  d.raw_covariates = raw_covariates;

  const int p = static_cast<int>(covariate_names.size());
  d.standardizer.names = covariate_names;
  d.standardizer.means.resize(p);
  d.standardizer.sds.resize(p);
  for (int j = 0; j < p; ++j) {
    const double m = raw_covariates.col(j).mean();
    double ss = (raw_covariates.col(j).array() - m).square().sum();
    const double sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    if (!(sd > 0.0))
      throw std::invalid_argument("assemble_dataset: covariate '" + covariate_names[j] +
                                  "' is constant across stations");
    d.standardizer.means(j) = m;
    d.standardizer.sds(j) = sd;
  }

  d.covariates.names.clear();
  d.covariates.names.push_back("const");
  for (const auto& nm : covariate_names) d.covariates.names.push_back(nm);
  d.covariates.X.resize(n, p + 1);
  d.covariates.X.col(0).setOnes();
  for (int i = 0; i < n; ++i)
    d.covariates.X.row(i).tail(p) = d.standardizer.apply(raw_covariates.row(i).transpose()).transpose();

  d.validate();
  return d;
}

Dataset Dataset::subset(const std::vector<int>& keep) const {
  std::vector<AnnualSeries> sub_series;
  Vector sub_lat(keep.size()), sub_lon(keep.size());
  Matrix sub_raw(keep.size(), raw_covariates.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const int i = keep[k];
    if (i < 0 || i >= n_sites()) throw std::out_of_range("Dataset::subset: index out of range");
    sub_series.push_back(series[i]);
    sub_lat(static_cast<Eigen::Index>(k)) = lat(i);
    sub_lon(static_cast<Eigen::Index>(k)) = lon(i);
    sub_raw.row(static_cast<Eigen::Index>(k)) = raw_covariates.row(i);
  }
  Dataset d = assemble_dataset(std::move(sub_series), sub_lat, sub_lon, standardizer.names, sub_raw,
                               projection.type);
  // keep the parent's projection reference point so distances stay comparable
  d.projection = projection;
  for (int i = 0; i < d.n_sites(); ++i) {
    const auto [x, y] = d.projection.to_km(d.lat(i), d.lon(i));
    d.sites.coords(i, 0) = x;
    d.sites.coords(i, 1) = y;
  }
  return d;
}

GridSpec make_grid(const Dataset& data, const std::vector<std::string>& cell_ids,
                   const Vector& lat, const Vector& lon, const Matrix& raw_covariates,
                   const std::vector<std::string>& covariate_names) {
  if (covariate_names != data.standardizer.names)
    throw std::invalid_argument("make_grid: covariate columns do not match the training set");
  const int n = static_cast<int>(cell_ids.size());
  if (lat.size() != n || lon.size() != n || raw_covariates.rows() != n)
    throw std::invalid_argument("make_grid: size mismatch");

  GridSpec g;
  g.cell_ids = cell_ids;
  g.lat = lat;
  g.lon = lon;
  g.cells.ids = cell_ids;
  g.cells.coords.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    const auto [x, y] = data.projection.to_km(lat(i), lon(i));
    g.cells.coords(i, 0) = x;
    g.cells.coords(i, 1) = y;
  }
  g.cells.validate();
  g.X.resize(n, raw_covariates.cols() + 1);
  g.X.col(0).setOnes();
  for (int i = 0; i < n; ++i)
    g.X.row(i).tail(raw_covariates.cols()) =
        data.standardizer.apply(raw_covariates.row(i).transpose()).transpose();
  return g;
}

}  // namespace spatgev
