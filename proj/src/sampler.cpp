#include "dsbeta/sampler.hpp"

#include <string>

namespace dsbeta {

namespace {

Matrix sqrt_of(const SpectralPSD &theta) { return nnd_sqrt(theta).reconstruct(); }

void require_full_rank_scale(const Scale &theta, int m) {
  if (!theta) return;
  require(theta->dim() == m, ErrorKind::invalid_dims, "Theta must be m x m");
  require(theta->rank() == m, ErrorKind::unsupported,
          "sampling supports identity or full-rank Theta only");
}

void require_xi_matches(const DistDims &dims, const CovFactor &xi) {
  require(xi.size() == dims.r() && xi.rank() == dims.r_xi(), ErrorKind::invalid_dims,
          "Xi factor must be r x r_xi");
}

void require_nonsingular_a(const DistDims &dims, const char *what) {
  require(dims.m() <= dims.n(), ErrorKind::degenerate,
          std::string(what) +
              " construction has eigenvalues equal to 1 when m > n (requires m ≤ n)");
}

Matrix symmetrized(const Matrix &s) { return 0.5 * (s + s.transpose()); }

// Spectral form of A + Y_b Y_b' where Y_b = Y C+' (so Y_b Y_b' = Y Xi+ Y').
SpectralPSD sum_spectral(const WishartNormalDraw &d, const Matrix &yb) {
  Matrix g(d.a_factor.rows(), d.a_factor.cols() + yb.cols());
  g << d.a_factor, yb;
  return gram_spectral(g, kDefaultRelTol, Ties::allow);
}

Matrix inv_sqrt_factor(const SpectralPSD &s) {
  return s.eigs().cwiseSqrt().cwiseInverse().asDiagonal() * s.frame().transpose();
}

}  // namespace

CovFactor::CovFactor(Matrix factor) : CovFactor(std::move(factor), false) {}

CovFactor::CovFactor(Matrix factor, bool identity)
    : factor_(std::move(factor)), identity_(identity) {
  require_finite(factor_, "Xi factor");
  require(factor_.cols() <= factor_.rows(), ErrorKind::invalid_dims,
          "Xi factor must be r x r_xi with r_xi <= r");
  require(rank_with_tol(factor_) == factor_.cols(), ErrorKind::rank,
          "Xi factor must have full column rank");
  pinv_ = identity_ ? Matrix(Matrix::Identity(factor_.cols(), factor_.rows()))
                    : mp_pinv(factor_);
}

CovFactor CovFactor::identity(Eigen::Index r) {
  return CovFactor(Matrix::Identity(r, r), true);
}

CovFactor CovFactor::leading(Eigen::Index r, Eigen::Index r_xi) {
  if (r == r_xi) return identity(r);
  return CovFactor(Matrix::Identity(r, r_xi));
}

Vector CovFactor::xi_eigs() const { return singular_values(factor_).array().square(); }

TParams::TParams(DistDims dims_, Matrix mu_, Scale theta_, CovFactor xi_)
    : dims(dims_), mu(std::move(mu_)), theta(std::move(theta_)), xi(std::move(xi_)) {
  require(mu.rows() == dims.m() && mu.cols() == dims.r(), ErrorKind::invalid_dims,
          "mu must be m x r");
  require(mu.allFinite(), ErrorKind::invalid_input, "mu has non-finite entries");
  if (theta) {
    require(theta->dim() == dims.m(), ErrorKind::invalid_dims, "Theta must be m x m");
    require(theta->rank() == dims.r_theta(), ErrorKind::invalid_dims,
            "Theta rank differs from r_theta");
  } else {
    require(dims.r_theta() == dims.m(), ErrorKind::invalid_dims,
            "identity Theta has rank m");
  }
  require_xi_matches(dims, xi);
}

TParams TParams::standard(int m, int n, int r) {
  return TParams(DistDims(m, n, r), Matrix::Zero(m, r), std::nullopt,
                 CovFactor::identity(r));
}

WishartNormalDraw draw_wishart_normal(int m, int n, const CovFactor &xi, RngStream &rng,
                                      const Scale &theta, ThetaOnY theta_on_y) {
  require(m > 0 && n > 0, ErrorKind::invalid_dims, "requires m, n >= 1");
  require_full_rank_scale(theta, m);
  Matrix z = rng.normal_matrix(m, n);
  Matrix zy = rng.normal_matrix(m, xi.rank());
  if (theta) {
    const Matrix root = sqrt_of(*theta);
    z = root * z;
    if (theta_on_y == ThetaOnY::yes) zy = root * zy;
  }
  SpectralPSD a = gram_spectral(z);
  Matrix y = xi.is_identity() ? zy : Matrix(zy * xi.factor().transpose());
  return WishartNormalDraw{std::move(z), std::move(a), std::move(y)};
}

Matrix construct_t(const WishartNormalDraw &d, const Matrix &mu) {
  require(mu.rows() == d.y.rows() && mu.cols() == d.y.cols(), ErrorKind::invalid_dims,
          "mu must match Y");
  return nnd_sqrt(d.a).pinv() * d.y + mu;
}

Matrix construct_x(const Matrix &t, const CovFactor &xi) {
  require(t.cols() == xi.size(), ErrorKind::invalid_dims, "T must have r columns");
  if (xi.is_identity()) return t;
  return t * xi.pinv().transpose();
}

SpectralPSD construct_beta2_spectral(const WishartNormalDraw &d, const CovFactor &xi) {
  const Matrix x = construct_x(construct_t(d, Matrix::Zero(d.y.rows(), d.y.cols())), xi);
  return gram_spectral(x);
}

Matrix construct_beta2_full(const WishartNormalDraw &d) {
  const Matrix t = construct_t(d, Matrix::Zero(d.y.rows(), d.y.cols()));
  return symmetrized(t.transpose() * t);
}

SpectralPSD construct_beta1_spectral(const WishartNormalDraw &d, const CovFactor &xi) {
  require(d.y.cols() == xi.size(), ErrorKind::invalid_dims, "Y must have r columns");
  const Matrix yb = xi.is_identity() ? d.y : Matrix(d.y * xi.pinv().transpose());
  const SpectralPSD s = sum_spectral(d, yb);
  const Matrix w = s.frame() * inv_sqrt_factor(s);
  return gram_spectral(w * yb);
}

Matrix construct_beta1_full(const WishartNormalDraw &d) {
  const SpectralPSD s = sum_spectral(d, d.y);
  const Matrix v = inv_sqrt_factor(s) * d.y;
  return symmetrized(v.transpose() * v);
}

Matrix construct_inverted_t(const WishartNormalDraw &d) {
  const SpectralPSD s = sum_spectral(d, d.y);
  return s.frame() * (inv_sqrt_factor(s) * d.y);
}

Matrix sample_matrix_normal(int m, int r, const CovFactor &xi, RngStream &rng,
                            const Scale &theta) {
  require(m > 0 && r > 0 && xi.size() == r, ErrorKind::invalid_dims,
          "matrix normal needs m, r >= 1 and an r-row Xi factor");
  require_full_rank_scale(theta, m);
  Matrix z = rng.normal_matrix(m, xi.rank());
  if (theta) z = sqrt_of(*theta) * z;
  if (xi.is_identity()) return z;
  return z * xi.factor().transpose();
}

SpectralPSD sample_pseudo_wishart(int m, int n, RngStream &rng, const Scale &theta) {
  require(m > 0 && n > 0, ErrorKind::invalid_dims, "requires m, n >= 1");
  require_full_rank_scale(theta, m);
  Matrix z = rng.normal_matrix(m, n);
  if (theta) z = sqrt_of(*theta) * z;
  return gram_spectral(z);
}

Matrix sample_t(const TParams &params, RngStream &rng) {
  require_full_rank_scale(params.theta, params.dims.m());
  const auto d = draw_wishart_normal(params.dims.m(), params.dims.n(), params.xi, rng,
                                     params.theta, ThetaOnY::no);
  return construct_t(d, params.mu);
}

Matrix sample_x(const TParams &params, RngStream &rng) {
  require(max_abs(params.mu) == 0.0, ErrorKind::unsupported,
          "X = T C+' is defined for mu = 0 only");
  return construct_x(sample_t(params, rng), params.xi);
}

SpectralPSD sample_beta2_spectral(const DistDims &dims, const CovFactor &xi, RngStream &rng,
                                  const Scale &theta) {
  require_xi_matches(dims, xi);
  const auto d =
      draw_wishart_normal(dims.m(), dims.n(), xi, rng, theta, ThetaOnY::yes);
  return construct_beta2_spectral(d, xi);
}

Matrix sample_beta2_full(const DistDims &dims, RngStream &rng, const Scale &theta) {
  dims.require_full_r();
  const auto d = draw_wishart_normal(dims.m(), dims.n(), CovFactor::identity(dims.r()), rng,
                                     theta, ThetaOnY::yes);
  return construct_beta2_full(d);
}

SpectralPSD sample_beta1_spectral(const DistDims &dims, const CovFactor &xi, RngStream &rng,
                                  const Scale &theta) {
  require_xi_matches(dims, xi);
  require_nonsingular_a(dims, "beta type I");
  const auto d =
      draw_wishart_normal(dims.m(), dims.n(), xi, rng, theta, ThetaOnY::yes);
  return construct_beta1_spectral(d, xi);
}

Matrix sample_beta1_full(const DistDims &dims, RngStream &rng, const Scale &theta) {
  dims.require_full_r();
  require_nonsingular_a(dims, "beta type I");
  const auto d = draw_wishart_normal(dims.m(), dims.n(), CovFactor::identity(dims.r()), rng,
                                     theta, ThetaOnY::yes);
  return construct_beta1_full(d);
}

Matrix sample_inverted_t(const DistDims &dims, RngStream &rng) {
  dims.require_inverted_t();
  require_nonsingular_a(dims, "inverted t");
  const auto d =
      draw_wishart_normal(dims.m(), dims.n(), CovFactor::identity(dims.r()), rng);
  return construct_inverted_t(d);
}

Vector symmetric_eigs_desc(const Matrix &s) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(s), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().reverse();
}

}  // namespace dsbeta
