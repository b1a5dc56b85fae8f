#include "dsbeta/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <numeric>
#include <thread>
#include <utility>

#include "dsbeta/random.hpp"
#include "dsbeta/sampler.hpp"

namespace dsbeta {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr int kMaxQuadRank = 3;
constexpr double kConvergenceTol = 1e-6;
constexpr std::uint64_t kIndependentStreamOffset = std::uint64_t{1} << 32;

// Joint law in y (y = x, or y = x^2 for the singular-value laws):
// exp(log_const) * prod y^p (1 +/- y)^b * |Vandermonde(y)|.
struct YKernel {
  double p;
  double b;
  double log_const;
};

YKernel y_kernel(const EigDensityFamily &fam, Convention conv, bool with_constant) {
  const EigKernel k = log_eig_kernel_params(fam, conv);
  YKernel y{k.power, k.comp_power, with_constant ? log_eig_constant(fam) : 0.0};
  if (k.squared) {
    // x = sqrt(y), dx = dy / (2 sqrt(y))
    y.p = 0.5 * (k.power - 1.0);
    y.log_const -= fam.r * std::numbers::ln2;
  }
  return y;
}

struct Node {
  double u;  // substituted coordinate
  double w;  // distance from u to the upper end
  double log_y;
  double log_comp;  // log(1 + y) or log(1 - y)
  double log_jac;   // log dy/du
  double aux;       // denominator of y_i - y_j in u coordinates
};

class Chart {
 public:
  Chart(Substitution s, EigRange range) {
    const bool positive = range == EigRange::positive;
    switch (s) {
      case Substitution::endpoint: kind_ = positive ? Kind::tan2 : Kind::sin2; break;
      case Substitution::unit_box: kind_ = positive ? Kind::box : Kind::identity; break;
      case Substitution::none:
        require(!positive, ErrorKind::unsupported,
                "substitution none needs a bounded range; use unit_box or endpoint");
        kind_ = Kind::identity;
        break;
    }
  }

  double upper() const { return trig() ? kHalfPi : 1.0; }

  Node at(double u, double w) const {
    Node n{u, w, 0.0, 0.0, 0.0, 0.0};
    switch (kind_) {
      case Kind::tan2: {
        const double ls = std::log(std::sin(u)), lc = std::log(std::sin(w));
        n.log_y = 2.0 * (ls - lc);
        n.log_comp = -2.0 * lc;
        n.log_jac = std::numbers::ln2 + ls - 3.0 * lc;
        n.aux = 2.0 * lc;
        break;
      }
      case Kind::sin2: {
        const double ls = std::log(std::sin(u)), lc = std::log(std::sin(w));
        n.log_y = 2.0 * ls;
        n.log_comp = 2.0 * lc;
        n.log_jac = std::numbers::ln2 + ls + lc;
        break;
      }
      case Kind::box: {
        const double lw = std::log(w);
        n.log_y = std::log(u) - lw;
        n.log_comp = -lw;
        n.log_jac = -2.0 * lw;
        n.aux = lw;
        break;
      }
      case Kind::identity:
        n.log_y = std::log(u);
        n.log_comp = std::log(w);
        break;
    }
    return n;
  }

  // log |y_a - y_b|
  double log_diff(const Node &a, const Node &b) const {
    if (trig()) {
      const double s = a.u + b.u;
      const double sin_sum = s <= kHalfPi ? std::sin(s) : std::sin(a.w + b.w);
      return std::log(std::abs(std::sin(a.u - b.u))) + std::log(sin_sum) - a.aux - b.aux;
    }
    return std::log(std::abs(a.u - b.u)) - a.aux - b.aux;
  }

  // (u, w) of a point y inside the range.
  std::pair<double, double> locate(double y) const {
    switch (kind_) {
      case Kind::tan2: {
        const double s = std::sqrt(y);
        return {std::atan(s), std::atan(1.0 / s)};
      }
      case Kind::sin2: {
        const double s = std::sqrt(y), c = std::sqrt(1.0 - y);
        return {std::atan2(s, c), std::atan2(c, s)};
      }
      case Kind::box: return {y / (1.0 + y), 1.0 / (1.0 + y)};
      case Kind::identity: return {y, 1.0 - y};
    }
    return {0.0, 0.0};
  }

 private:
  enum class Kind { tan2, sin2, box, identity };
  bool trig() const { return kind_ == Kind::tan2 || kind_ == Kind::sin2; }
  Kind kind_ = Kind::identity;
};

// Nested integration over u_1 > u_2 > ... > u_r: level k runs over (0, u_{k-1}).
class OrderedIntegrand {
 public:
  OrderedIntegrand(const YKernel &kernel, const Chart &chart, int r, const UnitRule &inner)
      : kernel_(kernel), chart_(chart), r_(r), inner_(inner) {}

  // Integrand of the outermost variable: everything else integrated out.
  double operator()(const Node &top) const {
    std::array<Node, kMaxQuadRank + 1> nodes;
    nodes[0] = top;
    return level(nodes, 1, term(top));
  }

  const Chart &chart() const { return chart_; }

 private:
  double term(const Node &n) const {
    return kernel_.p * n.log_y + kernel_.b * n.log_comp + n.log_jac;
  }

  double level(std::array<Node, kMaxQuadRank + 1> &nodes, int k, double acc) const {
    if (k >= r_ || k >= kMaxQuadRank) return std::exp(acc + kernel_.log_const);
    const Node prev = nodes[k - 1];
    double sum = 0.0;
    for (std::size_t j = 0; j < inner_.nodes.size(); ++j) {
      const Node n = chart_.at(prev.u * inner_.nodes[j], prev.w + prev.u * inner_.complement[j]);
      double l = acc + term(n);
      for (int i = 0; i < k; ++i) l += chart_.log_diff(nodes[i], n);
      nodes[k] = n;
      sum += prev.u * inner_.weights[j] * level(nodes, k + 1, l);
    }
    return sum;
  }

  YKernel kernel_;
  Chart chart_;
  int r_;
  const UnitRule &inner_;
};

// Integral of the outer variable over (0, upper - cut) with the given rule.
double outer_integral(const OrderedIntegrand &f, const UnitRule &rule, double cut = 0.0) {
  const double span = f.chart().upper() - cut;
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    sum += span * rule.weights[j] *
           f(f.chart().at(span * rule.nodes[j], cut + span * rule.complement[j]));
  }
  return sum;
}

// Integral of the outer variable over distances w in (lo, hi) from the top.
double top_panel(const OrderedIntegrand &f, const UnitRule &rule, double lo, double hi) {
  const double upper = f.chart().upper();
  const double h = hi - lo;
  double sum = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double w = lo + h * rule.nodes[j];
    sum += h * rule.weights[j] * f(f.chart().at(upper - w, w));
  }
  return sum;
}

void require_quad_rank(const EigDensityFamily &fam) {
  require(fam.r <= kMaxQuadRank, ErrorKind::unsupported,
          "quadrature is limited to r ≤ 3");
}

DivergenceProbe probe(const EigDensityFamily &fam, const YKernel &kernel,
                      const QuadScheme &scheme) {
  validate(scheme);
  require_quad_rank(fam);
  const Chart chart(scheme.substitution, fam.range());
  const OrderedIntegrand f(kernel, chart, fam.r, gauss_legendre(32));
  const UnitRule &panel = gauss_legendre(fam.r >= 3 ? 8 : 16);

  DivergenceProbe out{};
  double mass = outer_integral(f, gauss_legendre(32), 1e-2);
  out.masses[0] = mass;
  // Decade panels in w from 1e-2 down to 1e-16.
  const int last_decade[3] = {4, 8, 16};
  int decade = 2;
  for (int slot = 0; slot < 3; ++slot) {
    for (; decade < last_decade[slot]; ++decade) {
      mass += top_panel(f, panel, std::pow(10.0, -(decade + 1)), std::pow(10.0, -decade));
    }
    out.masses[slot + 1] = mass;
  }
  const double d2 = out.masses[2] - out.masses[1];
  const double d3 = out.masses[3] - out.masses[2];
  out.divergent = d3 > 1e-12 * std::abs(out.masses[3]) && d3 > 1.5 * d2;
  return out;
}

void refuse_divergent(const EigDensityFamily &fam, Convention conv, const YKernel &kernel,
                      const QuadScheme &scheme) {
  if (probe(fam, kernel, scheme).divergent) {
    fail(ErrorKind::divergence,
         std::string(to_string(fam.family)) + " is not normalizable under the " +
             std::string(to_string(conv)) + " convention; run the audit for details");
  }
}

// Runs body(b) for b in [0, count). Results must be written per index so the
// outcome does not depend on scheduling.
void for_each_batch(std::size_t count, const std::function<void(std::size_t)> &body) {
  const std::size_t threads =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (threads <= 1) {
    for (std::size_t b = 0; b < count; ++b) body(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t b = next++; b < count; b = next++) body(b);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto &th : pool) th.join();
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t batch_count(std::size_t n) { return (n + kBatchSize - 1) / kBatchSize; }

// Fills out[i] = draw(rng) with batch b of kBatchSize draws on stream
// stream_offset + b.
void fill_batched(std::vector<double> &out, std::uint64_t seed, std::uint64_t stream_offset,
                  const std::function<double(RngStream &)> &draw) {
  for_each_batch(batch_count(out.size()), [&](std::size_t b) {
    RngStream rng(seed, stream_offset + b);
    const std::size_t end = std::min(out.size(), (b + 1) * kBatchSize);
    for (std::size_t i = b * kBatchSize; i < end; ++i) out[i] = draw(rng);
  });
}

std::function<double(RngStream &)> largest_statistic(const EigDensityFamily &fam) {
  const int m = fam.m, n = fam.n, r = fam.r;
  const DistDims dims(m, n, r);
  switch (fam.family) {
    case EigFamily::beta2:
      if (m >= n) {
        return [dims](RngStream &rng) {
          return symmetric_eigs_desc(sample_beta2_full(dims, rng))(0);
        };
      }
      return [dims, xi = CovFactor::identity(r)](RngStream &rng) {
        return sample_beta2_spectral(dims, xi, rng).eigs()(0);
      };
    case EigFamily::beta1:
      require(m <= n, ErrorKind::degenerate,
              "beta type I construction has eigenvalues equal to 1 when m > n (requires m ≤ n)");
      if (m == n) {
        return [dims](RngStream &rng) {
          return symmetric_eigs_desc(sample_beta1_full(dims, rng))(0);
        };
      }
      return [dims, xi = CovFactor::identity(r)](RngStream &rng) {
        return sample_beta1_spectral(dims, xi, rng).eigs()(0);
      };
    case EigFamily::sv_t:
      return [params = TParams::standard(m, n, r)](RngStream &rng) {
        return singular_values(sample_t(params, rng))(0);
      };
    case EigFamily::inv_t:
      dims.require_inverted_t();
      require(m <= n, ErrorKind::degenerate,
              "inverted t construction has singular values equal to 1 when m > n (requires m = n)");
      return [dims](RngStream &rng) {
        return singular_values(sample_inverted_t(dims, rng))(0);
      };
  }
  fail(ErrorKind::invalid_input, "unknown eigenvalue family");
}

}  // namespace

DivergenceProbe probe_divergence(const EigDensityFamily &fam, Convention conv,
                                 const QuadScheme &scheme) {
  return probe(fam, y_kernel(fam, conv, true), scheme);
}

AuditReport quad_normalize(const EigDensityFamily &fam, Convention conv,
                           const QuadScheme &scheme) {
  validate(scheme);
  require_quad_rank(fam);
  AuditReport report;
  report.family = fam.family;
  report.m = fam.m;
  report.n = fam.n;
  report.r = fam.r;
  report.convention = conv;

  const YKernel kernel = y_kernel(fam, conv, true);
  if (probe(fam, kernel, scheme).divergent) {
    report.divergence_flag = true;
    return report;
  }
  const Chart chart(scheme.substitution, fam.range());
  const int n = scheme.points_per_axis;
  const double coarse =
      outer_integral(OrderedIntegrand(kernel, chart, fam.r, gauss_legendre(n)), gauss_legendre(n));
  const double fine = outer_integral(
      OrderedIntegrand(kernel, chart, fam.r, gauss_legendre(2 * n)), gauss_legendre(2 * n));
  const double gap = std::abs(coarse - fine) / std::abs(fine);
  report.numeric_mass = fine;
  report.constant_ratio = fine;
  report.relative_gap = gap;
  report.converged = std::isfinite(gap) && gap <= kConvergenceTol;
  return report;
}

LargestEigCdf::LargestEigCdf(const EigDensityFamily &fam, Convention conv,
                             const QuadScheme &scheme)
    : fam_(fam), substitution_(scheme.substitution), panels_(16), order_(32) {
  validate(scheme);
  require_quad_rank(fam);
  squared_ = log_eig_kernel_params(fam, conv).squared;
  const YKernel kernel = y_kernel(fam, conv, false);
  refuse_divergent(fam, conv, kernel, scheme);

  const Chart chart(substitution_, fam.range());
  upper_ = chart.upper();
  const OrderedIntegrand f(kernel, chart, fam.r, gauss_legendre(scheme.points_per_axis));
  const UnitRule &rule = gauss_legendre(order_);
  const double h = upper_ / panels_;

  coef_.assign(static_cast<std::size_t>(panels_ * order_), 0.0);
  cumulative_.assign(static_cast<std::size_t>(panels_), 0.0);
  std::vector<double> g(rule.nodes.size());
  std::vector<double> legendre(static_cast<std::size_t>(order_));
  for (int p = 0; p < panels_; ++p) {
    const double a = upper_ * p / panels_;
    const double w_top = upper_ * (panels_ - 1 - p) / panels_;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      g[j] = f(chart.at(a + h * rule.nodes[j], w_top + h * rule.complement[j]));
    }
    // Legendre coefficients on [-1, 1] by discrete orthogonality.
    double *c = &coef_[static_cast<std::size_t>(p * order_)];
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double xi = rule.nodes[j] - rule.complement[j];
      legendre[0] = 1.0;
      if (order_ > 1) legendre[1] = xi;
      for (int k = 1; k + 1 < order_; ++k) {
        legendre[k + 1] = ((2 * k + 1) * xi * legendre[k] - k * legendre[k - 1]) / (k + 1);
      }
      for (int k = 0; k < order_; ++k) {
        c[k] += (2 * k + 1) * rule.weights[j] * g[j] * legendre[k];
      }
    }
    cumulative_[p] = total_;
    total_ += h * c[0];
  }
  require(std::isfinite(total_) && total_ > 0.0, ErrorKind::divergence,
          "largest-eigenvalue CDF has no finite positive mass");
}

double LargestEigCdf::partial(double u) const {
  const double h = upper_ / panels_;
  const int p = std::clamp(static_cast<int>(u / h), 0, panels_ - 1);
  const double xi = std::clamp(2.0 * (u - upper_ * p / panels_) / h - 1.0, -1.0, 1.0);
  const double *c = &coef_[static_cast<std::size_t>(p * order_)];
  // Antiderivative from -1: (P_{k+1} - P_{k-1}) / (2k + 1), and xi + 1 for k = 0.
  double prev = 1.0, cur = xi;
  double sum = c[0] * (xi + 1.0);
  for (int k = 1; k < order_; ++k) {
    const double next = ((2 * k + 1) * xi * cur - k * prev) / (k + 1);
    sum += c[k] * (next - prev) / (2 * k + 1);
    prev = cur;
    cur = next;
  }
  return cumulative_[p] + 0.5 * h * sum;
}

double LargestEigCdf::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  const double y = squared_ ? x * x : x;
  if (fam_.range() == EigRange::unit && y >= 1.0) return 1.0;
  if (std::isinf(y)) return 1.0;
  const Chart chart(substitution_, fam_.range());
  const double value = partial(chart.locate(y).first) / total_;
  return std::clamp(value, 0.0, 1.0);
}

std::vector<double> quad_cdf(const EigDensityFamily &fam, Convention conv,
                             std::span<const double> grid, const QuadScheme &scheme) {
  const LargestEigCdf cdf(fam, conv, scheme);
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&grid](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  std::vector<double> out(grid.size());
  double running = 0.0;
  for (std::size_t i : order) {
    require(!std::isnan(grid[i]), ErrorKind::invalid_input, "grid contains NaN");
    running = std::max(running, cdf(grid[i]));
    out[i] = running;
  }
  return out;
}

std::vector<double> largest_eig_samples(const EigDensityFamily &fam, std::size_t n_samples,
                                        std::uint64_t seed) {
  require(n_samples > 0, ErrorKind::invalid_input, "n_samples must be positive");
  const auto draw = largest_statistic(fam);
  std::vector<double> out(n_samples);
  fill_batched(out, seed, 0, draw);
  return out;
}

McReport mc_compare(const EigDensityFamily &fam, Convention conv, std::size_t n_samples,
                    std::uint64_t seed, const QuadScheme &scheme) {
  const LargestEigCdf cdf(fam, conv, scheme);
  McReport report;
  report.family = std::string(to_string(fam.family));
  report.m = fam.m;
  report.n = fam.n;
  report.r = fam.r;
  report.r_xi = fam.r;
  report.convention = conv;
  report.statistic = "largest-eig";
  report.seed = seed;
  report.n_samples = n_samples;
  report.ks_distance = ks_one_sample(largest_eig_samples(fam, n_samples, seed), cdf);
  report.p_value_bound = ks_p_value(report.ks_distance, static_cast<double>(n_samples));
  return report;
}

McReport invariance_check(const DistDims &dims, const SpectralPSD &theta,
                          std::size_t n_samples, std::uint64_t seed, Arms arms) {
  require(n_samples > 0, ErrorKind::invalid_input, "n_samples must be positive");
  require(theta.dim() == dims.m() && theta.rank() == dims.m(), ErrorKind::invalid_input,
          "theta_scale must be a full-rank m x m matrix");
  dims.require_full_r();
  require(dims.r_xi() == dims.r(), ErrorKind::unsupported,
          "the invariance check uses the r x r beta type I matrix (r_xi = r)");
  require(dims.m() <= dims.n(), ErrorKind::degenerate,
          "beta type I construction has eigenvalues equal to 1 when m > n (requires m ≤ n)");

  std::vector<double> base(n_samples), scaled(n_samples);
  fill_batched(base, seed, 0, [&dims](RngStream &rng) {
    return symmetric_eigs_desc(sample_beta1_full(dims, rng))(0);
  });
  const Scale scale = theta;
  fill_batched(scaled, seed, arms == Arms::paired ? 0 : kIndependentStreamOffset,
               [&dims, &scale](RngStream &rng) {
                 return symmetric_eigs_desc(sample_beta1_full(dims, rng, scale))(0);
               });

  McReport report;
  report.family = "beta1";
  report.m = dims.m();
  report.n = dims.n();
  report.r = dims.r();
  report.r_xi = dims.r_xi();
  report.statistic = "largest-eig";
  report.seed = seed;
  report.n_samples = n_samples;
  report.ks_distance = ks_two_sample(std::move(base), std::move(scaled));
  report.p_value_bound = ks_p_value(report.ks_distance, 0.5 * static_cast<double>(n_samples));
  return report;
}

double ks_one_sample(std::vector<double> samples, const LargestEigCdf &cdf) {
  require(!samples.empty(), ErrorKind::invalid_input, "no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorKind::invalid_input, "no samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double kolmogorov_q(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-transformed series for the CDF, fast for small lambda.
    const double x = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double t = std::exp(-(2.0 * k - 1.0) * (2.0 * k - 1.0) * x);
      s += t;
      if (t < 1e-17 * s) break;
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1) ? t : -t;
    if (t < 1e-17) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

double ks_p_value(double d, double n_effective) {
  const double s = std::sqrt(n_effective);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

std::vector<EigDensityFamily> audit_matrix() {
  std::vector<EigDensityFamily> out;
  for (EigFamily family : {EigFamily::beta2, EigFamily::sv_t, EigFamily::beta1, EigFamily::inv_t}) {
    for (int m = 1; m <= 3; ++m) {
      for (int r = 1; r <= std::min(m, 2); ++r) out.emplace_back(family, m, m, r);
    }
    out.emplace_back(family, 3, 2, 1);
  }
  return out;
}

}  // namespace dsbeta
