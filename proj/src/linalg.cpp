#include "dsbeta/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dsbeta {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::invalid_dims: return "invalid-dims";
    case ErrorKind::rank: return "rank";
    case ErrorKind::tie: return "tie";
    case ErrorKind::pole: return "pole";
    case ErrorKind::not_psd: return "not-psd";
    case ErrorKind::support: return "support";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::divergence: return "divergence";
  }
  return "unknown";
}

namespace {

void check_ordered(std::span<const double> values, EigRange range) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    require(std::isfinite(v), ErrorKind::invalid_input, "eigenvalue is not finite");
    if (range == EigRange::positive) {
      require(v > 0.0, ErrorKind::support, "eigenvalues must lie in (0, inf)");
    } else {
      require(v > 0.0 && v < 1.0, ErrorKind::support,
              "eigenvalues must lie in (0, 1)");
    }
    if (i > 0) {
      require(values[i - 1] > v, ErrorKind::tie,
              "eigenvalues must be strictly descending");
    }
  }
}

bool has_orthonormal_columns(const Matrix &frame) {
  const Matrix gram = frame.transpose() * frame;
  return max_abs(gram - Matrix::Identity(gram.rows(), gram.cols())) <= kStructureTol;
}

// Rejects values whose gap is below 1e-12 of the largest one.
void reject_ties(const Vector &descending, const char *what) {
  const double scale = descending.size() > 0 ? descending(0) : 0.0;
  for (Eigen::Index i = 1; i < descending.size(); ++i) {
    if (descending(i - 1) - descending(i) < 1e-12 * scale) {
      fail(ErrorKind::tie, std::string(what) + ": numerically tied values");
    }
  }
}

}  // namespace

OrderedEigs::OrderedEigs(std::vector<double> values, EigRange range)
    : values_(std::move(values)), range_(range) {
  require(!values_.empty(), ErrorKind::invalid_input, "empty eigenvalue list");
  check_ordered(values_, range_);
}

OrderedEigs::OrderedEigs(const Vector &values, EigRange range)
    : OrderedEigs(std::vector<double>(values.data(), values.data() + values.size()),
                  range) {}

Vector OrderedEigs::as_vector() const {
  return Eigen::Map<const Vector>(values_.data(),
                                  static_cast<Eigen::Index>(values_.size()));
}

SpectralPSD::SpectralPSD(Matrix frame, Vector eigs)
    : frame_(std::move(frame)), eigs_(std::move(eigs)) {
  require(frame_.rows() > 0 && frame_.cols() > 0 && frame_.cols() <= frame_.rows(),
          ErrorKind::invalid_dims, "spectral frame must be m x k with 1 <= k <= m");
  require(eigs_.size() == frame_.cols(), ErrorKind::invalid_dims,
          "spectral frame and eigenvalue count differ");
  require_finite(frame_, "spectral frame");
  require(has_orthonormal_columns(frame_), ErrorKind::invalid_input,
          "spectral frame columns are not orthonormal");
  for (Eigen::Index i = 0; i < eigs_.size(); ++i) {
    require(std::isfinite(eigs_(i)) && eigs_(i) > 0.0, ErrorKind::invalid_input,
            "spectral eigenvalues must be positive");
    if (i > 0) {
      require(eigs_(i - 1) >= eigs_(i), ErrorKind::invalid_input,
              "spectral eigenvalues must be non-increasing");
    }
  }
}

SpectralPSD SpectralPSD::identity(Eigen::Index m) {
  return SpectralPSD(Matrix::Identity(m, m), Vector::Ones(m));
}

SpectralPSD SpectralPSD::diagonal(const Vector &diag) {
  Matrix d = diag.asDiagonal();
  return spectral_nonsingular(d, kDefaultRelTol, Ties::allow);
}

OrderedEigs SpectralPSD::ordered_eigs(EigRange range) const {
  return OrderedEigs(eigs_, range);
}

Matrix SpectralPSD::reconstruct() const {
  return frame_ * eigs_.asDiagonal() * frame_.transpose();
}

Matrix SpectralPSD::pinv() const {
  return frame_ * eigs_.cwiseInverse().asDiagonal() * frame_.transpose();
}

double SpectralPSD::log_pdet() const { return eigs_.array().log().sum(); }

SVDForm::SVDForm(Matrix left_frame, Matrix right_orth, OrderedEigs svals)
    : left_(std::move(left_frame)), right_(std::move(right_orth)), svals_(std::move(svals)) {
  const auto r = static_cast<Eigen::Index>(svals_.size());
  require(left_.cols() == r && right_.rows() == r && right_.cols() == r,
          ErrorKind::invalid_dims, "SVD factor shapes are inconsistent");
  require(has_orthonormal_columns(left_) && has_orthonormal_columns(right_),
          ErrorKind::invalid_input, "SVD factors are not orthonormal");
}

Matrix SVDForm::reconstruct() const {
  return left_ * svals_.as_vector().asDiagonal() * right_.transpose();
}

DistDims::DistDims(int m, int n, int r, int r_xi, int r_theta)
    : m_(m), n_(n), r_(r), r_xi_(r_xi == 0 ? r : r_xi),
      r_theta_(r_theta == 0 ? m : r_theta) {
  require(m_ > 0 && n_ > 0 && r_ > 0, ErrorKind::invalid_dims,
          "requires m, n, r >= 1");
  require(r_xi_ >= 1 && r_xi_ <= r_, ErrorKind::invalid_dims,
          "requires 1 ≤ r_xi ≤ r");
  require(r_theta_ >= 1 && r_theta_ <= m_, ErrorKind::invalid_dims,
          "requires 1 ≤ r_theta ≤ m");
  require(q() >= r_xi_, ErrorKind::invalid_dims, "requires m ≥ min(m, n) ≥ r_xi > 0");
}

void DistDims::require_full_r() const {
  require(m_ >= n_ && n_ >= r_, ErrorKind::invalid_dims, "requires m ≥ n ≥ r");
}

void DistDims::require_inverted_t() const {
  require(r_ <= n_ && n_ <= m_, ErrorKind::invalid_dims, "requires 0 < r ≤ n ≤ m");
}

void require_finite(const Matrix &m, const char *what) {
  require(m.size() > 0, ErrorKind::invalid_input, std::string(what) + " is empty");
  require(m.allFinite(), ErrorKind::invalid_input,
          std::string(what) + " has non-finite entries");
}

double max_abs(const Matrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Vector normalize_column_signs(Matrix &frame) {
  Vector signs = Vector::Ones(frame.cols());
  for (Eigen::Index j = 0; j < frame.cols(); ++j) {
    Eigen::Index arg = 0;
    frame.col(j).cwiseAbs().maxCoeff(&arg);
    if (frame(arg, j) < 0.0) {
      frame.col(j) *= -1.0;
      signs(j) = -1.0;
    }
  }
  return signs;
}

Vector singular_values(const Matrix &m) {
  require_finite(m, "matrix");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

int rank_with_tol(const Matrix &m, double rel_tol) {
  const Vector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  return static_cast<int>((s.array() > cut).count());
}

Matrix mp_pinv(const Matrix &m, double rel_tol) {
  require_finite(m, "pinv input");
  require(rel_tol > 0.0, ErrorKind::invalid_input, "rel_tol must be positive");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector &s = svd.singularValues();
  Matrix result = Matrix::Zero(m.cols(), m.rows());
  if (s.size() == 0 || s(0) == 0.0) return result;
  const double cut = rel_tol * s(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cut) break;
    result += (svd.matrixV().col(i) / s(i)) * svd.matrixU().col(i).transpose();
  }
  return result;
}

SpectralPSD nnd_sqrt(const SpectralPSD &s) {
  return SpectralPSD(s.frame(), s.eigs().cwiseSqrt());
}

SpectralPSD spectral_nonsingular(const Matrix &s, double rel_tol, Ties ties) {
  require_finite(s, "spectral input");
  require(s.rows() == s.cols(), ErrorKind::invalid_dims, "matrix must be square");
  const double scale = max_abs(s);
  require(max_abs(s - s.transpose()) <= kStructureTol * std::max(1.0, scale),
          ErrorKind::invalid_input, "matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (s + s.transpose()));
  const Vector &values = eig.eigenvalues();  // ascending
  const double largest = values.cwiseAbs().maxCoeff();
  const double cut = rel_tol * largest * static_cast<double>(s.rows());
  require(values(0) >= -cut, ErrorKind::not_psd, "matrix has a negative eigenvalue");

  Eigen::Index k = 0;
  for (Eigen::Index i = values.size() - 1; i >= 0 && values(i) > cut; --i) ++k;
  require(k > 0, ErrorKind::rank, "matrix has an empty nonsingular part");

  Matrix frame = eig.eigenvectors().rightCols(k).rowwise().reverse();
  Vector eigs = values.tail(k).reverse();
  if (ties == Ties::reject) reject_ties(eigs, "spectral decomposition");
  normalize_column_signs(frame);
  return SpectralPSD(std::move(frame), std::move(eigs));
}

SpectralPSD gram_spectral(const Matrix &g, double rel_tol, Ties ties) {
  require_finite(g, "gram factor");
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU);
  const Vector &s = svd.singularValues();
  const double cut =
      rel_tol * s(0) * static_cast<double>(std::max(g.rows(), g.cols()));
  const auto k = static_cast<Eigen::Index>((s.array() > cut).count());
  require(k > 0, ErrorKind::rank, "gram matrix has an empty nonsingular part");
  Matrix frame = svd.matrixU().leftCols(k);
  Vector eigs = s.head(k).array().square();
  if (ties == Ties::reject) reject_ties(eigs, "gram decomposition");
  normalize_column_signs(frame);
  return SpectralPSD(std::move(frame), std::move(eigs));
}

SVDForm svd_nonsingular(const Matrix &m, double rel_tol) {
  require_finite(m, "svd input");
  require(m.rows() >= m.cols(), ErrorKind::invalid_dims,
          "svd_nonsingular needs rows >= cols");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector &s = svd.singularValues();
  const double cut =
      rel_tol * s(0) * static_cast<double>(std::max(m.rows(), m.cols()));
  require(s(0) > 0.0 && s(s.size() - 1) > cut, ErrorKind::rank,
          "matrix does not have full column rank");
  reject_ties(s, "singular value decomposition");

  Matrix left = svd.matrixU();
  Matrix right = svd.matrixV();
  const Vector signs = normalize_column_signs(left);
  right = right * signs.asDiagonal();
  return SVDForm(std::move(left), std::move(right), OrderedEigs(s, EigRange::positive));
}

double log_mv_gamma(int p, double a) {
  require(p >= 1, ErrorKind::invalid_input, "multivariate gamma needs p >= 1");
  require(a > 0.5 * (p - 1), ErrorKind::pole,
          "multivariate gamma argument at or below (p-1)/2");
  double result = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
  for (int i = 1; i <= p; ++i) result += std::lgamma(a - 0.5 * (i - 1));
  return result;
}

double stiefel_log_volume(int r, int m) {
  require(r >= 1 && r <= m, ErrorKind::invalid_dims, "Stiefel volume needs 1 ≤ r ≤ m");
  return r * std::numbers::ln2 + 0.5 * m * r * std::log(std::numbers::pi) -
         log_mv_gamma(r, 0.5 * m);
}

Matrix random_orthogonal_like(const Matrix &gaussian) {
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ() * Matrix::Identity(gaussian.rows(), gaussian.cols());
  const Matrix rr = qr.matrixQR().topRows(gaussian.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    if (rr(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace dsbeta
