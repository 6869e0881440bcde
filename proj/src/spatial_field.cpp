#include "spatgev/spatial_field.hpp"

#include <set>

namespace spatgev {

void SiteSet::validate() const {
  if (static_cast<int>(ids.size()) != coords.rows())
    throw std::invalid_argument("SiteSet: ids/coords size mismatch");
  if (coords.cols() != 2) throw std::invalid_argument("SiteSet: coords must be n x 2");
  std::set<std::string> uniq(ids.begin(), ids.end());
  if (uniq.size() != ids.size()) throw std::invalid_argument("SiteSet: duplicate site ids");
  if (!coords.allFinite()) throw std::invalid_argument("SiteSet: non-finite coordinates");
}

Matrix pairwise_distances(const Matrix& a, const Matrix& b) {
  Matrix d(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.rows(); ++j)
      d(i, j) = (a.row(i) - b.row(j)).norm();
  if (!d.allFinite()) throw std::invalid_argument("pairwise_distances: non-finite distance");
  return d;
}

Matrix exp_corr_matrix(const Matrix& dist, double lambda) {
  return (-dist / lambda).array().exp().matrix();
}

Matrix exp_cov_matrix(const SiteSet& sites, const GpHyper& h) {
  sites.validate();
  const Matrix d = pairwise_distances(sites.coords, sites.coords);
  return exp_corr_matrix(d, h.lambda) / h.alpha;
}

Matrix exp_cov_cross(const SiteSet& rows, const SiteSet& cols, const GpHyper& h) {
  const Matrix d = pairwise_distances(rows.coords, cols.coords);
  return exp_corr_matrix(d, h.lambda) / h.alpha;
}

SpdFactor::SpdFactor(const Matrix& K) {
  if (K.rows() != K.cols()) throw std::invalid_argument("SpdFactor: matrix not square");
  const double diag_scale = K.diagonal().cwiseAbs().mean();
  double rel_jitter = 0.0;
  for (;;) {
    Matrix Kj = K;
    if (rel_jitter > 0.0)
      Kj.diagonal().array() += rel_jitter * diag_scale;
    llt_.compute(Kj);
    if (llt_.info() == Eigen::Success) {
      jitter_ = rel_jitter * diag_scale;
      log_det_ = 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
      return;
    }
    rel_jitter = rel_jitter == 0.0 ? 1e-10 : rel_jitter * 10.0;
    if (rel_jitter > 1e-6) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(K, Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues().minCoeff();
      const double hi = es.eigenvalues().maxCoeff();
      throw std::runtime_error(
          "SpdFactor: matrix not positive definite after jitter ladder (eigenvalue range [" +
          fmt_double(lo) + ", " + fmt_double(hi) + "], condition ~" +
          fmt_double(hi / std::max(lo, 1e-300)) + ")");
    }
  }
}

Matrix SpdFactor::inverse() const {
  const Eigen::Index n = llt_.matrixLLT().rows();
  return llt_.solve(Matrix::Identity(n, n));
}

GpConditional gp_conditional(const SiteSet& targets, const SiteSet& given,
                             const Vector& tau_given, const GpHyper& h) {
  if (given.size() == 0) throw std::invalid_argument("gp_conditional: empty conditioning set");
  if (tau_given.size() != given.size())
    throw std::invalid_argument("gp_conditional: tau_given/given size mismatch");
  const Matrix Kgg = exp_cov_matrix(given, h);
  const Matrix Ktg = exp_cov_cross(targets, given, h);
  const Matrix Ktt = exp_cov_cross(targets, targets, h);
  const SpdFactor factor(Kgg);
  const Matrix W = factor.solve(Ktg.transpose());  // Kgg^{-1} Kgt
  GpConditional out;
  out.mean = Ktg * factor.solve(tau_given);
  out.cov = Ktt - Ktg * W;
  return out;
}

KrigingSystem kriging_system(const SpdFactor& corr_factor, const Vector& cross_corr) {
  KrigingSystem sys;
  sys.weights = corr_factor.solve(cross_corr);
  sys.corr_reduction = sys.weights.dot(cross_corr);
  return sys;
}

}  // namespace spatgev
