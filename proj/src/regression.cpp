#include "spatgev/regression.hpp"

namespace spatgev {

void CovariateMatrix::validate() const {
  if (names.size() != static_cast<std::size_t>(X.cols()))
    throw std::invalid_argument("CovariateMatrix: names/columns mismatch");
  if (X.cols() < 1 || names[0] != "const" || (X.col(0).array() != 1.0).any())
    throw std::invalid_argument("CovariateMatrix: first column must be the constant");
  if (!X.allFinite()) throw std::invalid_argument("CovariateMatrix: non-finite entries");
}

InclusionModel InclusionModel::constant_only(int n_cols) {
  InclusionModel m;
  m.mask.assign(n_cols, false);
  m.mask[0] = true;
  return m;
}

InclusionModel InclusionModel::all(int n_cols) {
  InclusionModel m;
  m.mask.assign(n_cols, true);
  return m;
}

int InclusionModel::n_included() const {
  int k = 0;
  for (bool b : mask) k += b;
  return k;
}

std::vector<int> InclusionModel::included_indices() const {
  std::vector<int> idx;
  for (int j = 0; j < static_cast<int>(mask.size()); ++j)
    if (mask[j]) idx.push_back(j);
  return idx;
}

void InclusionModel::validate() const {
  if (mask.empty() || !mask[0])
    throw std::invalid_argument("InclusionModel: constant column must be included");
}

RegressionPrior RegressionPrior::standard_normal(int n_cols, double intercept_mean) {
  RegressionPrior p;
  p.theta0 = Vector::Zero(n_cols);
  p.theta0(0) = intercept_mean;
  p.covariance = Matrix::Identity(n_cols, n_cols);
  return p;
}

void RegressionPrior::validate(int n_cols) const {
  if (theta0.size() != n_cols || covariance.rows() != n_cols || covariance.cols() != n_cols)
    throw std::invalid_argument("RegressionPrior: dimension mismatch with covariate set");
}

namespace {

Matrix select_columns(const Matrix& X, const std::vector<int>& idx) {
  Matrix out(X.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = X.col(idx[k]);
  return out;
}

Matrix select_square(const Matrix& A, const std::vector<int>& idx) {
  Matrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = A(idx[i], idx[j]);
  return out;
}

Vector select_entries(const Vector& v, const std::vector<int>& idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

}  // namespace

ThetaPosterior theta_full_conditional(const Vector& upsilon, const CovariateMatrix& X,
                                      const InclusionModel& M, const SpdFactor& corr_factor,
                                      double alpha, const RegressionPrior& prior) {
  M.validate();
  prior.validate(X.n_cols());
  if (upsilon.size() != X.X.rows())
    throw std::invalid_argument("theta_full_conditional: upsilon/X row mismatch");
  const std::vector<int> idx = M.included_indices();
  const Matrix Xm = select_columns(X.X, idx);
  const Matrix EinvX = corr_factor.solve(Xm);
  const Matrix prior_cov = select_square(prior.covariance, idx);
  const Vector theta0 = select_entries(prior.theta0, idx);
  const Eigen::LLT<Matrix> prior_llt(prior_cov);
  if (prior_llt.info() != Eigen::Success)
    throw std::runtime_error("theta_full_conditional: prior covariance not positive definite");
  const Matrix prior_prec = prior_llt.solve(Matrix::Identity(idx.size(), idx.size()));

  ThetaPosterior post;
  post.precision = alpha * (Xm.transpose() * EinvX) + prior_prec;
  const Vector rhs = alpha * (EinvX.transpose() * upsilon) + prior_prec * theta0;
  const Eigen::LLT<Matrix> post_llt(post.precision);
  if (post_llt.info() != Eigen::Success)
    throw std::runtime_error("theta_full_conditional: singular posterior precision");
  post.mean = post_llt.solve(rhs);
  return post;
}

Vector draw_theta(const ThetaPosterior& post, const InclusionModel& M, int n_cols, Rng& rng) {
  const std::vector<int> idx = M.included_indices();
  const Eigen::LLT<Matrix> llt(post.precision);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("draw_theta: singular posterior precision");
  Vector z(post.mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  // x = mean + L^{-T} z has covariance precision^{-1}
  const Vector shift = llt.matrixU().solve(z);
  Vector theta = Vector::Zero(n_cols);
  for (std::size_t k = 0; k < idx.size(); ++k)
    theta(idx[k]) = post.mean(static_cast<Eigen::Index>(k)) + shift(static_cast<Eigen::Index>(k));
  return theta;
}

double log_model_score(const InclusionModel& M, const Vector& upsilon, const CovariateMatrix& X,
                       const Matrix& K, const RegressionPrior& prior) {
  M.validate();
  prior.validate(X.n_cols());
  const std::vector<int> idx = M.included_indices();
  const Matrix Xm = select_columns(X.X, idx);
  const Matrix prior_cov = select_square(prior.covariance, idx);
  const Vector theta0 = select_entries(prior.theta0, idx);
  const Eigen::Index n = K.rows();

  const Matrix S = K + Xm * prior_cov * Xm.transpose();
  const SpdFactor factor(S);
  const Vector resid = upsilon - Xm * theta0;
  return -0.5 * static_cast<double>(n) * std::log(2.0 * kPi) - 0.5 * factor.log_det() -
         0.5 * factor.quad_form(resid);
}

InclusionModel propose_neighbor_model(const InclusionModel& M, Rng& rng) {
  M.validate();
  const int p = static_cast<int>(M.mask.size()) - 1;
  if (p < 1) throw std::invalid_argument("propose_neighbor_model: no non-constant covariates");
  InclusionModel next = M;
  const int j = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(p)));
  next.mask[j] = !next.mask[j];
  return next;
}

}  // namespace spatgev
