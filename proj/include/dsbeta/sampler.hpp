#ifndef DSBETA_SAMPLER_HPP_
#define DSBETA_SAMPLER_HPP_

#include <optional>

#include "dsbeta/linalg.hpp"
#include "dsbeta/random.hpp"

namespace dsbeta {

// Full-column-rank factor C (r x r_xi) of a row covariance Xi = C C'.
class CovFactor {
 public:
  explicit CovFactor(Matrix factor);

  static CovFactor identity(Eigen::Index r);
  // C = [I_{r_xi}; 0], the canonical rank-r_xi factor.
  static CovFactor leading(Eigen::Index r, Eigen::Index r_xi);

  Eigen::Index size() const { return factor_.rows(); }
  Eigen::Index rank() const { return factor_.cols(); }
  const Matrix &factor() const { return factor_; }
  bool is_identity() const { return identity_; }

  const Matrix &pinv() const { return pinv_; }  // C+, r_xi x r
  Matrix xi() const { return factor_ * factor_.transpose(); }
  Matrix xi_pinv() const { return pinv_.transpose() * pinv_; }
  // Nonzero eigenvalues of Xi, descending.
  Vector xi_eigs() const;

 private:
  CovFactor(Matrix factor, bool identity);

  Matrix factor_;
  Matrix pinv_;
  bool identity_;
};

// Scale matrix Theta; std::nullopt stands for the identity.
using Scale = std::optional<SpectralPSD>;

// Parameters of the singular matricvariate t: T = (A^{1/2})+ Y + mu.
struct TParams {
  TParams(DistDims dims, Matrix mu, Scale theta, CovFactor xi);

  static TParams standard(int m, int n, int r);

  DistDims dims;
  Matrix mu;
  Scale theta;
  CovFactor xi;
};

// One independent draw of A = Z Z' (Z m x n, columns N(0, Theta)) and of
// Y = Z_y C' (Z_y m x r_xi standard normal, optionally premultiplied by
// Theta^{1/2}). Every construction below is a deterministic function of it,
// which is what makes the cross-construction identities testable per draw.
struct WishartNormalDraw {
  Matrix a_factor;  // Z, so that A = Z Z'
  SpectralPSD a;
  Matrix y;
};

enum class ThetaOnY { no, yes };

WishartNormalDraw draw_wishart_normal(int m, int n, const CovFactor &xi, RngStream &rng,
                                      const Scale &theta = std::nullopt,
                                      ThetaOnY theta_on_y = ThetaOnY::no);

Matrix construct_t(const WishartNormalDraw &d, const Matrix &mu);
Matrix construct_x(const Matrix &t, const CovFactor &xi);
SpectralPSD construct_beta2_spectral(const WishartNormalDraw &d, const CovFactor &xi);
Matrix construct_beta2_full(const WishartNormalDraw &d);
SpectralPSD construct_beta1_spectral(const WishartNormalDraw &d, const CovFactor &xi);
Matrix construct_beta1_full(const WishartNormalDraw &d);
Matrix construct_inverted_t(const WishartNormalDraw &d);

Matrix sample_matrix_normal(int m, int r, const CovFactor &xi, RngStream &rng,
                            const Scale &theta = std::nullopt);
SpectralPSD sample_pseudo_wishart(int m, int n, RngStream &rng,
                                  const Scale &theta = std::nullopt);
Matrix sample_t(const TParams &params, RngStream &rng);
Matrix sample_x(const TParams &params, RngStream &rng);

// Beta type II. Theta, when given, scales both A and Y.
SpectralPSD sample_beta2_spectral(const DistDims &dims, const CovFactor &xi, RngStream &rng,
                                  const Scale &theta = std::nullopt);
Matrix sample_beta2_full(const DistDims &dims, RngStream &rng,
                         const Scale &theta = std::nullopt);

// Beta type I. The construction puts min(m - n, r_xi) eigenvalues exactly at
// 1 when m > n, so these samplers require m <= n.
SpectralPSD sample_beta1_spectral(const DistDims &dims, const CovFactor &xi, RngStream &rng,
                                  const Scale &theta = std::nullopt);
Matrix sample_beta1_full(const DistDims &dims, RngStream &rng,
                         const Scale &theta = std::nullopt);

// Inverted matricvariate t, R = [(A + YY')+]^{1/2} Y. Requires m = n for the
// same reason as beta type I.
Matrix sample_inverted_t(const DistDims &dims, RngStream &rng);

// Eigenvalues of a symmetric matrix, descending.
Vector symmetric_eigs_desc(const Matrix &s);

}  // namespace dsbeta

#endif  // DSBETA_SAMPLER_HPP_
