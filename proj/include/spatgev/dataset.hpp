#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spatgev/gev.hpp"
#include "spatgev/regression.hpp"
#include "spatgev/spatial_field.hpp"

namespace spatgev {

// Planar map projection for station/grid coordinates. "equirectangular"
// projects decimal degrees to km about a reference point; "planar" takes the
// lat/lon columns as already-planar km (y, x).
struct Projection {
  enum class Type { Equirectangular, Planar };
  Type type = Type::Equirectangular;
  double lat0 = 0.0;
  double lon0 = 0.0;

  static constexpr double kEarthRadiusKm = 6371.0;

  std::pair<double, double> to_km(double lat, double lon) const {
    if (type == Type::Planar) return {lon, lat};
    const double rad = kPi / 180.0;
    const double x = kEarthRadiusKm * std::cos(lat0 * rad) * (lon - lon0) * rad;
    const double y = kEarthRadiusKm * (lat - lat0) * rad;
    return {x, y};
  }
};

// Per-column affine map fitted over the observed sites and reused verbatim
// for grid covariates.
struct Standardizer {
  std::vector<std::string> names;  // non-constant columns
  Vector means;
  Vector sds;

  Vector apply(const Vector& raw) const {
    if (raw.size() != means.size()) throw std::invalid_argument("Standardizer: size mismatch");
    return (raw - means).cwiseQuotient(sds);
  }
};

struct Dataset {
  SiteSet sites;                         // projected km
  Vector lat, lon;                       // raw coordinates as read
  std::vector<AnnualSeries> series;      // aligned with sites
  Matrix raw_covariates;                 // n x p, non-constant columns
  CovariateMatrix covariates;            // standardized, with constant column
  Standardizer standardizer;
  Projection projection;

  int n_sites() const { return sites.size(); }
  long n_observations() const;
  int covariate_index(const std::string& name) const;  // -1 when absent

  // Rebuild with a station subset: projection kept, covariates
  // re-standardized over the kept stations.
  Dataset subset(const std::vector<int>& keep) const;

  // Standardized design row (with leading 1) for raw covariate values.
  Vector design_row(const Vector& raw) const;

  void validate() const;
};

// Assembles a dataset from raw pieces; used by the loader and the synthetic
// generator so both produce bit-identical objects from the same raw values.
Dataset assemble_dataset(std::vector<AnnualSeries> series, const Vector& lat, const Vector& lon,
                         const std::vector<std::string>& covariate_names,
                         const Matrix& raw_covariates, Projection::Type projection_type);

struct GridSpec {
  std::vector<std::string> cell_ids;
  Vector lat, lon;  // raw coordinates as read
  SiteSet cells;    // projected with the dataset's projection
  Matrix X;         // standardized design matrix (with constant column)

  int n_cells() const { return cells.size(); }
};

GridSpec make_grid(const Dataset& data, const std::vector<std::string>& cell_ids,
                   const Vector& lat, const Vector& lon, const Matrix& raw_covariates,
                   const std::vector<std::string>& covariate_names);

}  // namespace spatgev
