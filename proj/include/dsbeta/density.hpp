#ifndef DSBETA_DENSITY_HPP_
#define DSBETA_DENSITY_HPP_

#include <span>
#include <string_view>

#include "dsbeta/linalg.hpp"
#include "dsbeta/sampler.hpp"

namespace dsbeta {

// paper: every formula evaluated exactly as printed.
// corrected: documented exponent repairs applied (see log_eig_kernel_params
// and the individual densities); constants are never altered.
enum class Convention { paper, corrected };

std::string_view to_string(Convention c);

// sv_t: singular values of the standard t matrix T.
// beta2 / beta1: nonzero eigenvalues of the beta type II / type I matrices.
// inv_t: singular values of the inverted t matrix R.
enum class EigFamily { sv_t, beta2, beta1, inv_t };

std::string_view to_string(EigFamily f);

struct EigDensityFamily {
  EigDensityFamily(EigFamily family, int m, int n, int r);

  EigFamily family;
  int m, n, r;

  EigRange range() const;
};

// Per-variable kernel x^a (1 +/- y)^b with y = x or x^2, and Vandermonde in y.
struct EigKernel {
  double power;       // exponent a on x
  double comp_power;  // exponent b on (1 + y) or (1 - y)
  bool squared;       // y = x^2 (singular-value laws) instead of y = x
  EigRange range;     // positive: (1 + y); unit: (1 - y)
};

EigKernel log_eig_kernel_params(const EigDensityFamily &fam, Convention conv);
double log_eig_constant(const EigDensityFamily &fam);

// Joint log density of ordered eigenvalues / singular values.
double log_eig_density(const EigDensityFamily &fam, const OrderedEigs &eigs,
                       Convention conv);

// Log of the kernel at unordered points, with |Vandermonde|; no constant.
// Returns -inf where two points coincide.
double log_eig_kernel(const EigKernel &kernel, std::span<const double> x);

double logpdf_t_general(const TParams &params, const Matrix &t);
double logpdf_t_standard(int m, int n, int r, const Matrix &mu, const Matrix &t);
double logpdf_x(const TParams &params, const Matrix &x);

// Beta type II. The spectral form is the m x m rank-r_xi matrix F evaluated on
// its spectral coordinates; the full form is the r x r matrix Y' A+ Y.
double logpdf_beta2(const DistDims &dims, const SpectralPSD &f, Convention conv,
                    const Scale &theta = std::nullopt);
double logpdf_beta2(const DistDims &dims, const Matrix &f_full, Convention conv);

// Beta type I, same two forms.
double logpdf_beta1(const DistDims &dims, const SpectralPSD &u, Convention conv);
double logpdf_beta1(const DistDims &dims, const Matrix &u_full, Convention conv);

double logpdf_inverted_t(const DistDims &dims, const Matrix &r, Convention conv);

enum class EigTransform { beta2_to_beta1, beta1_to_beta2, sv_to_beta2, beta2_to_sv };

OrderedEigs eig_transform(const OrderedEigs &eigs, EigTransform direction);
// Sum of log |d map / d x| at the source point, so that
// density_source(x) = density_target(map(x)) + log_jacobian(x).
double log_jacobian_eig_transform(const OrderedEigs &eigs, EigTransform direction);

}  // namespace dsbeta

#endif  // DSBETA_DENSITY_HPP_
