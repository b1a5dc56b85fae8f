#include "dsbeta/density.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace dsbeta {

std::string_view to_string(Convention c) {
  return c == Convention::paper ? "paper" : "corrected";
}

std::string_view to_string(EigFamily f) {
  switch (f) {
    case EigFamily::sv_t: return "sv-t-eigs";
    case EigFamily::beta2: return "beta2-eigs";
    case EigFamily::beta1: return "beta1-eigs";
    case EigFamily::inv_t: return "inv-t";
  }
  return "unknown";
}

namespace {

const double kLogPi = std::log(std::numbers::pi);

// log of the normalizing constant shared by the t, X and beta II densities,
//   pi^{n(q-r_theta)/2 - (n+r_xi)(q1-r_alpha)/2 - m r_xi/2} Gamma_{q1}[(n+r_xi)/2]
//   / (2^{(m r_xi + n r_theta)/2 - (n+r_xi) r_alpha/2} Gamma_q[n/2]).
double log_t_constant(int m, int n, int q, int q1, int r_theta, int r_xi, int r_alpha) {
  const double pi_power = 0.5 * n * (q - r_theta) - 0.5 * (n + r_xi) * (q1 - r_alpha) -
                          0.5 * m * r_xi;
  const double two_power = 0.5 * (m * r_xi + n * r_theta) - 0.5 * (n + r_xi) * r_alpha;
  return pi_power * kLogPi + log_mv_gamma(q1, 0.5 * (n + r_xi)) -
         two_power * std::numbers::ln2 - log_mv_gamma(q, 0.5 * n);
}

// Constant of the standard t and inverted t densities,
// pi^{-r(r+2n)/2} Gamma_{n+r}[(n+r)/2] / Gamma_n[n/2].
double log_standard_t_constant(int n, int r) {
  return -0.5 * r * (r + 2 * n) * kLogPi + log_mv_gamma(n + r, 0.5 * (n + r)) -
         log_mv_gamma(n, 0.5 * n);
}

// Constant of the r x r beta densities,
// pi^{-r(r+2n-m)/2} Gamma_{n+r}[(n+r)/2] / (Gamma_n[n/2] Gamma_r[m/2]).
double log_full_beta_constant(int m, int n, int r) {
  return -0.5 * r * (r + 2 * n - m) * kLogPi + log_mv_gamma(n + r, 0.5 * (n + r)) -
         log_mv_gamma(n, 0.5 * n) - log_mv_gamma(r, 0.5 * m);
}

// Constant of the identity-scale m x m beta densities,
// pi^{-n r} Gamma_{n+r}[(n+r)/2] / (Gamma_n[n/2] Gamma_r[r/2]).
double log_spectral_beta_constant(int n, int r) {
  return -1.0 * n * r * kLogPi + log_mv_gamma(n + r, 0.5 * (n + r)) -
         log_mv_gamma(n, 0.5 * n) - log_mv_gamma(r, 0.5 * r);
}

struct KernelEigs {
  int rank;
  double log_sum;  // sum of log of the nonzero eigenvalues
};

// rank and log pseudo-determinant of the symmetric PSD matrix Theta- + D Xi- D'.
KernelEigs kernel_eigs(const Matrix &s) {
  const Matrix sym = 0.5 * (s + s.transpose());
  const int rank = rank_with_tol(sym);
  require(rank > 0, ErrorKind::rank, "density kernel matrix is zero");
  const Vector eigs = symmetric_eigs_desc(sym);
  double log_sum = 0.0;
  for (int i = 0; i < rank; ++i) log_sum += std::log(eigs(i));
  return {rank, log_sum};
}

Matrix theta_pinv(const Scale &theta, int m) {
  return theta ? theta->pinv() : Matrix(Matrix::Identity(m, m));
}

double theta_log_pdet(const Scale &theta) { return theta ? theta->log_pdet() : 0.0; }

int theta_rank(const Scale &theta, int m) {
  return theta ? static_cast<int>(theta->rank()) : m;
}

Vector symmetric_eigs_checked(const Matrix &s, const char *what) {
  require_finite(s, what);
  require(s.rows() == s.cols(), ErrorKind::invalid_dims, std::string(what) + " must be square");
  require(max_abs(s - s.transpose()) <= kStructureTol * std::max(1.0, max_abs(s)),
          ErrorKind::invalid_input, std::string(what) + " must be symmetric");
  return symmetric_eigs_desc(s);
}

// Kernel dimensions: for m > n the corrected convention swaps m and n in the
// exponents of the type II and singular-value laws.
std::pair<int, int> kernel_mn(int m, int n, Convention conv) {
  if (conv == Convention::corrected && m > n) return {n, m};
  return {m, n};
}

}  // namespace

EigDensityFamily::EigDensityFamily(EigFamily family_, int m_, int n_, int r_)
    : family(family_), m(m_), n(n_), r(r_) {
  require(r >= 1 && m >= r && n >= r, ErrorKind::invalid_dims,
          "eigenvalue laws require m ≥ r and n ≥ r ≥ 1");
  if (family == EigFamily::inv_t) {
    require(n <= m, ErrorKind::invalid_dims, "requires 0 < r ≤ n ≤ m");
  }
}

EigRange EigDensityFamily::range() const {
  return family == EigFamily::beta1 || family == EigFamily::inv_t ? EigRange::unit
                                                                    : EigRange::positive;
}

EigKernel log_eig_kernel_params(const EigDensityFamily &fam, Convention conv) {
  const int r = fam.r;
  switch (fam.family) {
    case EigFamily::beta2: {
      const auto [m, n] = kernel_mn(fam.m, fam.n, conv);
      return {0.5 * (m - r - 1), -0.5 * (n + r), false, EigRange::positive};
    }
    case EigFamily::sv_t: {
      const auto [m, n] = kernel_mn(fam.m, fam.n, conv);
      return {1.0 * (m - r), -0.5 * (n + r), true, EigRange::positive};
    }
    case EigFamily::beta1:
      return {0.5 * (fam.m - r - 1), 0.5 * (fam.n - fam.m - 1), false, EigRange::unit};
    case EigFamily::inv_t: {
      const double e = conv == Convention::paper ? -0.5 * (fam.n + r)
                                                 : 0.5 * (fam.n - fam.m - 1);
      return {1.0 * (fam.m - r), e, true, EigRange::unit};
    }
  }
  fail(ErrorKind::invalid_input, "unknown eigenvalue family");
}

double log_eig_constant(const EigDensityFamily &fam) {
  const int m = fam.m, n = fam.n, r = fam.r;
  double c = -0.5 * r * (2 * n - m) * kLogPi + log_mv_gamma(n + r, 0.5 * (n + r)) -
             log_mv_gamma(n, 0.5 * n) - log_mv_gamma(r, 0.5 * r) - log_mv_gamma(r, 0.5 * m);
  if (fam.family == EigFamily::sv_t || fam.family == EigFamily::inv_t) {
    c += r * std::numbers::ln2;
  }
  return c;
}

double log_eig_kernel(const EigKernel &kernel, std::span<const double> x) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = kernel.squared ? x[i] * x[i] : x[i];
    const double comp = kernel.range == EigRange::positive ? std::log1p(y) : std::log1p(-y);
    total += kernel.power * std::log(x[i]) + kernel.comp_power * comp;
    for (std::size_t j = 0; j < i; ++j) {
      const double yj = kernel.squared ? x[j] * x[j] : x[j];
      total += std::log(std::abs(yj - y));
    }
  }
  return total;
}

double log_eig_density(const EigDensityFamily &fam, const OrderedEigs &eigs,
                       Convention conv) {
  require(eigs.size() == static_cast<std::size_t>(fam.r), ErrorKind::invalid_dims,
          "expected r eigenvalues");
  require(eigs.range() == fam.range(), ErrorKind::support,
          "eigenvalues are declared on the wrong range for this family");
  return log_eig_constant(fam) + log_eig_kernel(log_eig_kernel_params(fam, conv), eigs.values());
}

double logpdf_t_general(const TParams &params, const Matrix &t) {
  const DistDims &d = params.dims;
  require_finite(t, "T");
  require(t.rows() == d.m() && t.cols() == d.r(), ErrorKind::invalid_dims, "T must be m x r");
  const Matrix dev = t - params.mu;
  const Matrix kernel = theta_pinv(params.theta, d.m()) +
                        dev * params.xi.xi_pinv() * dev.transpose();
  const KernelEigs k = kernel_eigs(kernel);
  const int r_theta = theta_rank(params.theta, d.m());
  const double log_c =
      log_t_constant(d.m(), d.n(), d.q(), d.q1(), r_theta, d.r_xi(), k.rank);
  const double log_xi = params.xi.xi_eigs().array().log().sum();
  const double value = log_c - 0.5 * d.m() * log_xi -
                       0.5 * d.n() * theta_log_pdet(params.theta) -
                       0.5 * (d.n() + d.r_xi()) * k.log_sum;
  require(std::isfinite(value), ErrorKind::invalid_input, "t log density overflowed");
  return value;
}

double logpdf_t_standard(int m, int n, int r, const Matrix &mu, const Matrix &t) {
  require(m >= n && n >= r && r >= 1, ErrorKind::invalid_dims, "requires m ≥ n ≥ r");
  require_finite(t, "T");
  require_finite(mu, "mu");
  require(t.rows() == m && t.cols() == r && mu.rows() == m && mu.cols() == r,
          ErrorKind::invalid_dims, "T and mu must be m x r");
  const Vector kappa = singular_values(t - mu);
  return log_standard_t_constant(n, r) -
         0.5 * (n + r) * kappa.array().square().log1p().sum();
}

double logpdf_x(const TParams &params, const Matrix &x) {
  const DistDims &d = params.dims;
  require(max_abs(params.mu) == 0.0, ErrorKind::unsupported,
          "the X density is defined for mu = 0 only");
  require_finite(x, "X");
  require(x.rows() == d.m() && x.cols() == d.r_xi(), ErrorKind::invalid_dims,
          "X must be m x r_xi");
  const KernelEigs k = kernel_eigs(theta_pinv(params.theta, d.m()) + x * x.transpose());
  const int r_theta = theta_rank(params.theta, d.m());
  const double log_c =
      log_t_constant(d.m(), d.n(), d.q(), d.q1(), r_theta, d.r_xi(), k.rank);
  return log_c - 0.5 * d.n() * theta_log_pdet(params.theta) -
         0.5 * (d.n() + d.r_xi()) * k.log_sum;
}

double logpdf_beta2(const DistDims &dims, const SpectralPSD &f, Convention,
                    const Scale &theta) {
  const int m = dims.m(), n = dims.n(), r = dims.r_xi();
  require(f.dim() == m && f.rank() == r, ErrorKind::invalid_dims,
          "F must be m x m of rank r_xi");
  const OrderedEigs delta = f.ordered_eigs(EigRange::positive);
  double log_delta = 0.0;
  for (double v : delta.values()) log_delta += std::log(v);
  const double jac = 0.5 * (r - m - 1) * log_delta;

  if (!theta) {
    double log_ipf = 0.0;
    for (double v : delta.values()) log_ipf += std::log1p(v);
    return log_spectral_beta_constant(n, r) + jac - 0.5 * (n + r) * log_ipf;
  }

  require(theta->dim() == m, ErrorKind::invalid_dims, "Theta must be m x m");
  const KernelEigs k = kernel_eigs(theta->pinv() + f.reconstruct());
  const int r_theta = static_cast<int>(theta->rank());
  const double log_c = log_t_constant(m, n, dims.q(), dims.q1(), r_theta, r, k.rank);
  return log_c + 0.5 * r * r * kLogPi - log_mv_gamma(r, 0.5 * r) -
         0.5 * n * theta->log_pdet() + jac - 0.5 * (n + r) * k.log_sum;
}

double logpdf_beta2(const DistDims &dims, const Matrix &f_full, Convention conv) {
  dims.require_full_r();
  const int m = dims.m(), n = dims.n(), r = dims.r();
  require(f_full.rows() == r, ErrorKind::invalid_dims, "F must be r x r");
  const Vector f = symmetric_eigs_checked(f_full, "F");
  require(f(f.size() - 1) > 0.0, ErrorKind::support, "F must be positive definite");
  const auto [km, kn] = kernel_mn(m, n, conv);
  return log_full_beta_constant(m, n, r) + 0.5 * (km - r - 1) * f.array().log().sum() -
         0.5 * (kn + r) * f.array().log1p().sum();
}

double logpdf_beta1(const DistDims &dims, const SpectralPSD &u, Convention) {
  const int m = dims.m(), n = dims.n(), r = dims.r_xi();
  require(u.dim() == m && u.rank() == r, ErrorKind::invalid_dims,
          "U must be m x m of rank r_xi");
  const OrderedEigs lambda = u.ordered_eigs(EigRange::unit);
  double log_l = 0.0, log_1ml = 0.0;
  for (double v : lambda.values()) {
    log_l += std::log(v);
    log_1ml += std::log1p(-v);
  }
  return log_spectral_beta_constant(n, r) + 0.5 * (r - m - 1) * log_l +
         0.5 * (n - m - 1) * log_1ml;
}

double logpdf_beta1(const DistDims &dims, const Matrix &u_full, Convention conv) {
  dims.require_full_r();
  const int m = dims.m(), n = dims.n(), r = dims.r();
  require(u_full.rows() == r, ErrorKind::invalid_dims, "U must be r x r");
  const Vector u = symmetric_eigs_checked(u_full, "U");
  require(u(0) < 1.0 && u(u.size() - 1) > 0.0, ErrorKind::support,
          "eigenvalues of U must lie in (0, 1)");
  // The printed exponent on |I_r - U| is -(n-m-1)/2; the change of variables
  // from the type II density gives +(n-m-1)/2.
  const double sign = conv == Convention::paper ? -1.0 : 1.0;
  return log_full_beta_constant(m, n, r) + 0.5 * (m - r - 1) * u.array().log().sum() +
         sign * 0.5 * (n - m - 1) * (-u.array()).log1p().sum();
}

double logpdf_inverted_t(const DistDims &dims, const Matrix &r_mat, Convention conv) {
  dims.require_inverted_t();
  const int m = dims.m(), n = dims.n(), r = dims.r();
  require_finite(r_mat, "R");
  require(r_mat.rows() == m && r_mat.cols() == r, ErrorKind::invalid_dims, "R must be m x r");
  const Vector tau = singular_values(r_mat);
  require(tau(0) < 1.0, ErrorKind::support, "singular values of R must be below 1");
  const double e = conv == Convention::paper ? -0.5 * (n + r) : 0.5 * (n - m - 1);
  return log_standard_t_constant(n, r) + e * (-tau.array().square()).log1p().sum();
}

OrderedEigs eig_transform(const OrderedEigs &eigs, EigTransform direction) {
  const EigRange source =
      direction == EigTransform::beta1_to_beta2 ? EigRange::unit : EigRange::positive;
  require(eigs.range() == source, ErrorKind::support,
          "eigenvalues are on the wrong range for this transform");
  std::vector<double> out(eigs.values().begin(), eigs.values().end());
  for (double &v : out) {
    switch (direction) {
      case EigTransform::beta2_to_beta1: v = v / (1.0 + v); break;
      case EigTransform::beta1_to_beta2: v = v / (1.0 - v); break;
      case EigTransform::sv_to_beta2: v = v * v; break;
      case EigTransform::beta2_to_sv: v = std::sqrt(v); break;
    }
  }
  const EigRange target =
      direction == EigTransform::beta2_to_beta1 ? EigRange::unit : EigRange::positive;
  return OrderedEigs(std::move(out), target);
}

double log_jacobian_eig_transform(const OrderedEigs &eigs, EigTransform direction) {
  const EigRange source =
      direction == EigTransform::beta1_to_beta2 ? EigRange::unit : EigRange::positive;
  require(eigs.range() == source, ErrorKind::support,
          "eigenvalues are on the wrong range for this transform");
  double total = 0.0;
  for (double v : eigs.values()) {
    switch (direction) {
      case EigTransform::beta2_to_beta1: total -= 2.0 * std::log1p(v); break;
      case EigTransform::beta1_to_beta2: total -= 2.0 * std::log1p(-v); break;
      case EigTransform::sv_to_beta2: total += std::log(2.0 * v); break;
      case EigTransform::beta2_to_sv: total -= std::log(2.0 * std::sqrt(v)); break;
    }
  }
  return total;
}

}  // namespace dsbeta
