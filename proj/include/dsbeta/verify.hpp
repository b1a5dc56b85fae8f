#ifndef DSBETA_VERIFY_HPP_
#define DSBETA_VERIFY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsbeta/density.hpp"
#include "dsbeta/quadrature.hpp"

namespace dsbeta {

struct AuditReport {
  EigFamily family;
  int m = 0, n = 0, r = 0;
  Convention convention = Convention::paper;
  // Mass of the full density, printed constant included. Absent when the
  // kernel diverges.
  std::optional<double> numeric_mass;
  std::optional<double> constant_ratio;
  std::optional<double> relative_gap;  // |M_N - M_2N| / |M_2N|
  bool converged = false;
  bool divergence_flag = false;
};

struct McReport {
  std::string family;
  int m = 0, n = 0, r = 0, r_xi = 0;
  std::optional<Convention> convention;
  std::string statistic;
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  double ks_distance = 0.0;
  double p_value_bound = 1.0;
};

// Integrates the joint eigenvalue law over the ordered region with the
// scheme's rule and with twice as many points; converged when the two agree
// within 1e-6 relative.
AuditReport quad_normalize(const EigDensityFamily &fam, Convention conv,
                           const QuadScheme &scheme = {});

// Truncated masses with the outer variable cut at distances 1e-2, 1e-4, 1e-8
// and 1e-16 from the upper end (in substituted coordinates).
struct DivergenceProbe {
  double masses[4];
  bool divergent;
};
DivergenceProbe probe_divergence(const EigDensityFamily &fam, Convention conv,
                                 const QuadScheme &scheme = {});

// CDF of the largest eigenvalue (largest singular value for sv_t and inv_t),
// normalized by the numeric mass. Refuses divergent configurations.
class LargestEigCdf {
 public:
  LargestEigCdf(const EigDensityFamily &fam, Convention conv, const QuadScheme &scheme = {});

  double operator()(double x) const;
  // Kernel mass without the constant.
  double kernel_mass() const { return total_; }

 private:
  double partial(double u) const;

  EigDensityFamily fam_;
  Substitution substitution_;
  bool squared_;
  double upper_;
  int panels_;
  int order_;
  std::vector<double> coef_;        // Legendre coefficients, panels x order
  std::vector<double> cumulative_;  // mass below each panel
  double total_ = 0.0;
};

std::vector<double> quad_cdf(const EigDensityFamily &fam, Convention conv,
                             std::span<const double> grid, const QuadScheme &scheme = {});

// Largest eigenvalue (or singular value) of n_samples construction draws, in
// draw order. Batch b of kBatchSize draws uses stream id b.
std::vector<double> largest_eig_samples(const EigDensityFamily &fam, std::size_t n_samples,
                                        std::uint64_t seed);

McReport mc_compare(const EigDensityFamily &fam, Convention conv, std::size_t n_samples,
                    std::uint64_t seed, const QuadScheme &scheme = {});

// paired: both arms reuse the same streams (common random numbers).
// independent: the scaled arm uses disjoint stream ids.
enum class Arms { paired, independent };

McReport invariance_check(const DistDims &dims, const SpectralPSD &theta,
                          std::size_t n_samples, std::uint64_t seed, Arms arms = Arms::paired);

// Kolmogorov-Smirnov helpers.
double ks_one_sample(std::vector<double> samples, const LargestEigCdf &cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Asymptotic Kolmogorov tail Q(lambda) = P(K > lambda).
double kolmogorov_q(double lambda);
// Tail bound with the usual small-sample correction of lambda.
double ks_p_value(double d, double n_effective);

// Families and dimensions of the shipped audit: m = n in {1, 2, 3},
// r in {1, 2} (r <= m), plus m = 3, n = 2, r = 1, for all four laws.
std::vector<EigDensityFamily> audit_matrix();

}  // namespace dsbeta

#endif  // DSBETA_VERIFY_HPP_
