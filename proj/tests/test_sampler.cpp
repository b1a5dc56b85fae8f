#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dsbeta/random.hpp"
#include "dsbeta/sampler.hpp"
#include "support.hpp"

using namespace dsbeta;
using dsbeta::testing::Gen;
using dsbeta::testing::norm_max;

namespace {

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("streams are reproducible and distinct") {
  RngStream a(42, 0), b(42, 0), c(42, 1), d(43, 0);
  const Matrix ma = a.normal_matrix(3, 3);
  CHECK(ma == b.normal_matrix(3, 3));
  CHECK(ma != c.normal_matrix(3, 3));
  CHECK(ma != d.normal_matrix(3, 3));
}

TEST_CASE("matrix normal, scalar case") {
  RngStream rng(1, 0);
  const CovFactor xi = CovFactor::identity(1);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = sample_matrix_normal(1, 1, xi, rng)(0, 0);
    sum += y;
    sq += y * y;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
  CHECK(std::abs(sq / n - mean * mean - 1.0) < 0.05);
}

TEST_CASE("matrix normal with a rank-one factor has equal columns") {
  Matrix c(2, 1);
  c << 1, 1;
  const CovFactor xi(c);
  RngStream rng(3, 0);
  for (int i = 0; i < 50; ++i) {
    const Matrix y = sample_matrix_normal(4, 2, xi, rng);
    CHECK(y.col(0) == y.col(1));
  }
}

TEST_CASE("pseudo-Wishart moments and rank") {
  RngStream rng(5, 0);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += sample_pseudo_wishart(1, 3, rng).eigs()(0);
  CHECK(std::abs(sum / n - 3.0) < 0.03 * 3.0);

  RngStream r1(6, 0), r2(6, 0);
  for (int i = 0; i < 20; ++i) {
    const SpectralPSD a = sample_pseudo_wishart(3, 1, r1);
    const Matrix z = r2.normal_matrix(3, 1);
    REQUIRE(a.rank() == 1);
    CHECK(a.eigs()(0) == doctest::Approx(z.squaredNorm()).epsilon(1e-12));
  }

  RngStream r3(7, 0);
  double trace = 0.0;
  for (int i = 0; i < n; ++i) trace += sample_pseudo_wishart(2, 2, r3).eigs().sum();
  CHECK(std::abs(trace / n - 4.0) < 0.03 * 4.0);

  Gen g(8);
  RngStream r4(8, 0);
  for (int c = 0; c < 100; ++c) {
    const int m = g.integer(1, 6), k = g.integer(1, 6);
    CHECK(sample_pseudo_wishart(m, k, r4).rank() == std::min(m, k));
  }
}

TEST_CASE("t construction: scalar case is Cauchy") {
  RngStream rng(9, 0);
  const TParams p = TParams::standard(1, 1, 1);
  std::vector<double> v(100000);
  for (double &x : v) x = sample_t(p, rng)(0, 0);
  CHECK(std::abs(median(v)) < 0.02);
  // quartiles of the standard Cauchy are -1 and 1
  std::vector<double> abs_v(v.size());
  std::transform(v.begin(), v.end(), abs_v.begin(), [](double x) { return std::abs(x); });
  CHECK(std::abs(median(abs_v) - 1.0) < 0.03);
}

TEST_CASE("t construction: location shift") {
  RngStream rng(10, 0);
  const TParams p(DistDims(1, 50, 1), Matrix::Constant(1, 1, 5.0), std::nullopt,
                  CovFactor::identity(1));
  std::vector<double> v(20000);
  for (double &x : v) x = sample_t(p, rng)(0, 0);
  CHECK(std::abs(median(v) - 5.0) < 0.02);
}

TEST_CASE("sampling is reproducible") {
  const TParams p = TParams::standard(3, 3, 2);
  RngStream a(11, 4), b(11, 4);
  for (int i = 0; i < 10; ++i) CHECK(sample_t(p, a) == sample_t(p, b));
  const DistDims d(3, 3, 2);
  RngStream c(12, 0), e(12, 0);
  CHECK(sample_beta1_full(d, c) == sample_beta1_full(d, e));
  CHECK(sample_inverted_t(d, c) == sample_inverted_t(d, e));
}

TEST_CASE("X = T C+'") {
  const TParams id = TParams::standard(3, 3, 2);
  RngStream a(13, 0), b(13, 0);
  for (int i = 0; i < 10; ++i) CHECK(sample_x(id, a) == sample_t(id, b));

  const TParams two(DistDims(2, 2, 1), Matrix::Zero(2, 1), std::nullopt,
                    CovFactor(Matrix::Constant(1, 1, 2.0)));
  RngStream c(14, 0), d(14, 0);
  for (int i = 0; i < 10; ++i) {
    CHECK(norm_max(sample_x(two, c) - sample_t(two, d) / 2.0) < 1e-15);
  }

  Gen g(15);
  for (int k = 0; k < 100; ++k) {
    const int r = g.integer(1, 4), r_xi = g.integer(1, r), m = g.integer(r_xi, 5);
    const int n = g.integer(r_xi, 6);
    const CovFactor xi(g.gaussian(r, r_xi));
    const TParams p(DistDims(m, n, r, r_xi), Matrix::Zero(m, r), std::nullopt, xi);
    RngStream s1(16, static_cast<std::uint64_t>(k)), s2(16, static_cast<std::uint64_t>(k));
    const Matrix x = sample_x(p, s1);
    const Matrix t = sample_t(p, s2);
    const Matrix lhs = x * x.transpose();
    CHECK(norm_max(lhs - t * xi.xi_pinv() * t.transpose()) < 1e-9 * std::max(1.0, norm_max(lhs)));
  }

  const TParams shifted(DistDims(2, 2, 1), Matrix::Ones(2, 1), std::nullopt,
                        CovFactor::identity(1));
  RngStream e(17, 0);
  CHECK_THROWS_AS(sample_x(shifted, e), Error);
}

TEST_CASE("beta type II: scalar case is a squared Cauchy") {
  RngStream rng(18, 0);
  const DistDims d(1, 1, 1);
  int below = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) below += sample_beta2_full(d, rng)(0, 0) <= 1.0;
  CHECK(std::abs(static_cast<double>(below) / n - 0.5) < 0.01);
}

TEST_CASE("beta type II: rank and matched eigenvalues") {
  const DistDims d1(3, 3, 1);
  RngStream rng(19, 0);
  CHECK(sample_beta2_spectral(d1, CovFactor::identity(1), rng).rank() == 1);

  Gen g(20);
  for (int k = 0; k < 100; ++k) {
    const int r = g.integer(1, 3), n = g.integer(r, 4), m = g.integer(n, 5);
    const DistDims d(m, n, r);
    RngStream s(21, static_cast<std::uint64_t>(k));
    const auto draw = draw_wishart_normal(m, n, CovFactor::identity(r), s);
    const SpectralPSD f = construct_beta2_spectral(draw, CovFactor::identity(r));
    const Vector full = symmetric_eigs_desc(construct_beta2_full(draw));
    REQUIRE(f.rank() == r);
    for (int i = 0; i < r; ++i) {
      CHECK(f.eigs()(i) == doctest::Approx(full(i)).epsilon(1e-9));
    }
    CHECK(full(r - 1) > 0.0);
  }
}

TEST_CASE("beta type I: support and link to type II") {
  Gen g(22);
  const int draws = 10000;
  RngStream rng(23, 0);
  for (int k = 0; k < draws; ++k) {
    const int r = 1 + k % 3, m = r + k % 2, n = m + (k / 2) % 2;
    const DistDims d(m, n, r);
    const auto draw = draw_wishart_normal(m, n, CovFactor::identity(r), rng);
    const Matrix u = construct_beta1_full(draw);
    const Vector lam = symmetric_eigs_desc(u);
    CHECK(norm_max(u - u.transpose()) == 0.0);
    CHECK(lam(0) < 1.0 - 1e-10);
    CHECK(lam(lam.size() - 1) > 0.0);
    const SpectralPSD spec = construct_beta1_spectral(draw, CovFactor::identity(r));
    CHECK(spec.eigs()(0) < 1.0 - 1e-10);
    const Vector delta = symmetric_eigs_desc(construct_beta2_full(draw));
    for (int i = 0; i < r; ++i) {
      CHECK(std::abs(lam(i) - delta(i) / (1.0 + delta(i))) < 1e-9);
    }
  }
  RngStream one(24, 0);
  const DistDims d(1, 1, 1);
  for (int k = 0; k < 100; ++k) {
    const double u = sample_beta1_full(d, one)(0, 0);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("beta type I construction is degenerate for m > n") {
  RngStream rng(25, 0);
  for (int k = 0; k < 20; ++k) {
    const auto draw = draw_wishart_normal(3, 2, CovFactor::identity(1), rng);
    const double u = construct_beta1_full(draw)(0, 0);
    CHECK(std::abs(u - 1.0) < 1e-10);
  }
  RngStream s(26, 0);
  try {
    sample_beta1_full(DistDims(3, 2, 1), s);
    FAIL("expected a degenerate error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::degenerate);
  }
  CHECK_THROWS_AS(sample_inverted_t(DistDims(3, 2, 1), s), Error);
}

TEST_CASE("inverted t: support and R R' = U") {
  RngStream rng(27, 0);
  for (int k = 0; k < 10000; ++k) {
    const int m = 1 + k % 3, r = 1 + (k / 3) % m;
    const auto draw = draw_wishart_normal(m, m, CovFactor::identity(r), rng);
    const Matrix rr = construct_inverted_t(draw);
    const Vector tau = singular_values(rr);
    CHECK(tau(0) <= 1.0);  // heavy tail: 1 - tau can underflow
    CHECK(tau(tau.size() - 1) > 0.0);
    const SpectralPSD u = construct_beta1_spectral(draw, CovFactor::identity(r));
    CHECK(norm_max(rr * rr.transpose() - u.reconstruct()) < 1e-9);
  }
  RngStream one(28, 0);
  for (int k = 0; k < 100; ++k) CHECK(std::abs(sample_inverted_t(DistDims(1, 1, 1), one)(0, 0)) < 1.0);
  CHECK_THROWS_AS(sample_inverted_t(DistDims(2, 3, 1), one), Error);
}

TEST_CASE("beta type I with Theta on both A and Y is unchanged per draw") {
  Gen g(29);
  for (int k = 0; k < 100; ++k) {
    const int m = g.integer(1, 4), r = g.integer(1, m);
    const DistDims d(m, m, r);
    const SpectralPSD theta = spectral_nonsingular(g.psd(m, m, 0.3, 6.0));
    RngStream a(30, static_cast<std::uint64_t>(k)), b(30, static_cast<std::uint64_t>(k));
    const Matrix plain = sample_beta1_full(d, a);
    const Matrix scaled = sample_beta1_full(d, b, theta);
    CHECK(norm_max(plain - scaled) < 1e-9);
  }
}

TEST_CASE("spectral beta outputs have rank r_xi") {
  Gen g(31);
  for (int k = 0; k < 100; ++k) {
    const int r = g.integer(1, 3), r_xi = g.integer(1, r), n = g.integer(r_xi + 1, 5);
    const int m = g.integer(r_xi, n);
    const DistDims d(m, n, r, r_xi);
    const CovFactor xi(g.gaussian(r, r_xi));
    RngStream s(32, static_cast<std::uint64_t>(k));
    CHECK(sample_beta2_spectral(d, xi, s).rank() == r_xi);
    CHECK(sample_beta1_spectral(d, xi, s).rank() == r_xi);
  }
}

TEST_CASE("sampler dimension checks") {
  RngStream rng(33, 0);
  CHECK_THROWS_AS(sample_beta2_full(DistDims(2, 3, 1), rng), Error);
  CHECK_THROWS_AS(TParams(DistDims(2, 2, 1), Matrix::Zero(3, 1), std::nullopt, CovFactor::identity(1)),
                  Error);
  CHECK_THROWS_AS(CovFactor(Matrix::Zero(2, 1)), Error);
}
