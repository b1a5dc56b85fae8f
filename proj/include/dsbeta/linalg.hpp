#ifndef DSBETA_LINALG_HPP_
#define DSBETA_LINALG_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dsbeta/error.hpp"

namespace dsbeta {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRelTol = 1e-12;

// Tolerance used by the structural checks (orthonormality, symmetry).
inline constexpr double kStructureTol = 1e-10;

enum class EigRange { positive, unit };

// Strictly descending values inside an open range: (0, inf) or (0, 1).
// Houses the ordered eigenvalues and singular values the joint laws are
// written in.
class OrderedEigs {
 public:
  OrderedEigs(std::vector<double> values, EigRange range);
  OrderedEigs(const Vector &values, EigRange range);

  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  EigRange range() const { return range_; }
  Vector as_vector() const;

 private:
  std::vector<double> values_;
  EigRange range_;
};

// Rank-k positive semidefinite m x m matrix stored as an orthonormal m x k
// frame and k positive, non-increasing eigenvalues.
class SpectralPSD {
 public:
  SpectralPSD(Matrix frame, Vector eigs);

  static SpectralPSD identity(Eigen::Index m);
  static SpectralPSD diagonal(const Vector &diag);

  Eigen::Index dim() const { return frame_.rows(); }
  Eigen::Index rank() const { return frame_.cols(); }
  const Matrix &frame() const { return frame_; }
  const Vector &eigs() const { return eigs_; }

  // Strictly descending eigenvalues; throws a tie error otherwise.
  OrderedEigs ordered_eigs(EigRange range = EigRange::positive) const;

  Matrix reconstruct() const;
  // Moore-Penrose inverse, read off the spectral coordinates.
  Matrix pinv() const;
  // Sum of log nonzero eigenvalues.
  double log_pdet() const;

 private:
  Matrix frame_;
  Vector eigs_;
};

// Nonsingular part of a thin SVD, M = left_frame * diag(svals) * right_orth'.
class SVDForm {
 public:
  SVDForm(Matrix left_frame, Matrix right_orth, OrderedEigs svals);

  const Matrix &left_frame() const { return left_; }
  const Matrix &right_orth() const { return right_; }
  const OrderedEigs &svals() const { return svals_; }
  Matrix reconstruct() const;

 private:
  Matrix left_;
  Matrix right_;
  OrderedEigs svals_;
};

// Integer bookkeeping shared by every distribution. r_xi and r_theta default
// to full rank.
class DistDims {
 public:
  DistDims(int m, int n, int r, int r_xi = 0, int r_theta = 0);

  int m() const { return m_; }
  int n() const { return n_; }
  int r() const { return r_; }
  int r_xi() const { return r_xi_; }
  int r_theta() const { return r_theta_; }
  int q() const { return m_ < n_ ? m_ : n_; }
  int q1() const { return m_ < n_ + r_xi_ ? m_ : n_ + r_xi_; }

  // Dimension orders required by the individual constructions.
  void require_full_r() const;      // m >= n >= r
  void require_inverted_t() const;  // 0 < r <= n <= m

 private:
  int m_, n_, r_, r_xi_, r_theta_;
};

void require_finite(const Matrix &m, const char *what);
double max_abs(const Matrix &m);

Matrix mp_pinv(const Matrix &m, double rel_tol = kDefaultRelTol);
SpectralPSD nnd_sqrt(const SpectralPSD &s);

enum class Ties { reject, allow };

SpectralPSD spectral_nonsingular(const Matrix &s, double rel_tol = kDefaultRelTol,
                                 Ties ties = Ties::reject);
SVDForm svd_nonsingular(const Matrix &m, double rel_tol = kDefaultRelTol);

// Spectral form of G * G' read off the thin SVD of G (more accurate than
// decomposing the product). Rank is decided as in rank_with_tol.
SpectralPSD gram_spectral(const Matrix &g, double rel_tol = kDefaultRelTol,
                          Ties ties = Ties::reject);

// Singular values in descending order (all of them, including zeros).
Vector singular_values(const Matrix &m);

int rank_with_tol(const Matrix &m, double rel_tol = kDefaultRelTol);

// log Gamma_p[a] = p(p-1)/4 log(pi) + sum_{i=1..p} log Gamma(a - (i-1)/2).
double log_mv_gamma(int p, double a);

// log of the volume of the Stiefel manifold V_{r,m}, 2^r pi^{mr/2} / Gamma_r[m/2].
double stiefel_log_volume(int r, int m);

// Flips column signs so the largest-magnitude entry of each column is
// positive. Returns the applied signs.
Vector normalize_column_signs(Matrix &frame);

Matrix random_orthogonal_like(const Matrix &gaussian);

}  // namespace dsbeta

#endif  // DSBETA_LINALG_HPP_
