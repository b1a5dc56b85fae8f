#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dsbeta/density.hpp"
#include "support.hpp"

using namespace dsbeta;
using dsbeta::testing::Gen;

namespace {

const double kLogPi = std::log(std::numbers::pi);

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

OrderedEigs eigs1(double v, EigRange range) { return OrderedEigs(std::vector<double>{v}, range); }

// symmetric r x r coordinates (i <= j) of F = U (I - U)^{-1}
Vector sym_coords(const Matrix &s) {
  const Eigen::Index r = s.rows();
  Vector v(r * (r + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = i; j < r; ++j) v(k++) = s(i, j);
  return v;
}

Matrix u_to_f(const Matrix &u) {
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  return (id - u).inverse() * u;
}

double numeric_log_jacobian(const Matrix &u) {
  const Eigen::Index r = u.rows();
  const Eigen::Index d = r * (r + 1) / 2;
  Matrix jac(d, d);
  const double h = 1e-6;
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = i; j < r; ++j) {
      Matrix e = Matrix::Zero(r, r);
      e(i, j) = 1.0;
      e(j, i) = 1.0;
      jac.col(col++) = (sym_coords(u_to_f(u + h * e)) - sym_coords(u_to_f(u - h * e))) / (2 * h);
    }
  }
  return std::log(std::abs(jac.determinant()));
}

double map_scalar(double v, EigTransform t) {
  return eig_transform(eigs1(v, t == EigTransform::beta1_to_beta2 ? EigRange::unit
                                                                   : EigRange::positive),
                       t)
      .values()[0];
}

}  // namespace

TEST_CASE("t density examples") {
  CHECK(logpdf_t_standard(1, 1, 1, scalar(0), scalar(0)) == doctest::Approx(-kLogPi).epsilon(1e-14));
  CHECK(logpdf_t_standard(1, 1, 1, scalar(0), scalar(1)) ==
        doctest::Approx(-std::log(2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(logpdf_t_general(TParams::standard(1, 1, 1), scalar(0)) ==
        doctest::Approx(-kLogPi).epsilon(1e-14));
}

TEST_CASE("scalar reductions on a grid") {
  const DistDims d(1, 1, 1);
  const EigDensityFamily sv(EigFamily::sv_t, 1, 1, 1), b2(EigFamily::beta2, 1, 1, 1),
      b1(EigFamily::beta1, 1, 1, 1), it(EigFamily::inv_t, 1, 1, 1);
  for (int i = 0; i < 20; ++i) {
    const double t = -4.0 + 8.0 * i / 19.0;   // real line
    const double p = 0.05 + 4.0 * i / 19.0;   // positive
    const double u = 0.02 + 0.96 * i / 19.0;  // unit interval
    const double rho = -0.97 + 1.94 * i / 19.0;
    const double cauchy = -kLogPi - std::log1p(t * t);
    CHECK(std::abs(logpdf_t_standard(1, 1, 1, scalar(0), scalar(t)) - cauchy) < 1e-12);
    CHECK(std::abs(logpdf_t_general(TParams::standard(1, 1, 1), scalar(t)) - cauchy) < 1e-12);

    const double half_cauchy = std::log(2.0 / std::numbers::pi) - std::log1p(p * p);
    CHECK(std::abs(log_eig_density(sv, eigs1(p, EigRange::positive), Convention::paper) -
                   half_cauchy) < 1e-12);

    const double sq_cauchy = -kLogPi - 0.5 * std::log(p) - std::log1p(p);
    CHECK(std::abs(logpdf_beta2(d, scalar(p), Convention::paper) - sq_cauchy) < 1e-12);
    CHECK(std::abs(log_eig_density(b2, eigs1(p, EigRange::positive), Convention::paper) -
                   sq_cauchy) < 1e-12);
    CHECK(std::abs(logpdf_beta2(d, SpectralPSD::diagonal(scalar(p)), Convention::paper) -
                   sq_cauchy) < 1e-12);

    const double arcsine = -kLogPi - 0.5 * std::log(u) - 0.5 * std::log1p(-u);
    CHECK(std::abs(logpdf_beta1(d, scalar(u), Convention::corrected) - arcsine) < 1e-12);
    CHECK(std::abs(log_eig_density(b1, eigs1(u, EigRange::unit), Convention::corrected) -
                   arcsine) < 1e-12);

    const double arcsine_pm = -kLogPi - 0.5 * std::log1p(-rho * rho);
    CHECK(std::abs(logpdf_inverted_t(d, scalar(rho), Convention::corrected) - arcsine_pm) < 1e-12);
    if (rho > 0.0) {
      CHECK(std::abs(log_eig_density(it, eigs1(rho, EigRange::unit), Convention::corrected) -
                     (std::log(2.0) + arcsine_pm)) < 1e-12);
    }
  }
}

TEST_CASE("beta densities at documented points") {
  const DistDims d22(2, 2, 1), d11(1, 1, 1);
  CHECK(logpdf_beta2(d22, scalar(0.0 + 1e-300), Convention::paper) ==
        doctest::Approx(-std::log(2.0) + 0.0).epsilon(1e-12));
  CHECK(logpdf_beta2(d11, scalar(1.0), Convention::paper) ==
        doctest::Approx(-std::log(2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(logpdf_beta1(d22, scalar(1e-300), Convention::corrected) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  CHECK(logpdf_beta1(d11, scalar(0.5), Convention::corrected) ==
        doctest::Approx(std::log(2.0 / std::numbers::pi)).epsilon(1e-14));
  CHECK(logpdf_inverted_t(d11, scalar(0.0), Convention::corrected) ==
        doctest::Approx(-kLogPi).epsilon(1e-14));

  // (1/2)(1 - u)^{-1/2} corrected versus the printed (1/2)(1 - u)^{1/2}
  const double u = 0.4;
  CHECK(logpdf_beta1(d22, scalar(u), Convention::corrected) ==
        doctest::Approx(-std::log(2.0) - 0.5 * std::log1p(-u)).epsilon(1e-14));
  CHECK(logpdf_beta1(d22, scalar(u), Convention::paper) ==
        doctest::Approx(-std::log(2.0) + 0.5 * std::log1p(-u)).epsilon(1e-14));
  // printed exponent -(n+r)/2 = -1 at m = n = r = 1
  CHECK(logpdf_inverted_t(d11, scalar(0.6), Convention::paper) ==
        doctest::Approx(-kLogPi - std::log1p(-0.36)).epsilon(1e-14));
}

TEST_CASE("eigenvalue law examples") {
  CHECK(log_eig_density(EigDensityFamily(EigFamily::sv_t, 1, 1, 1), eigs1(1.0, EigRange::positive),
                        Convention::paper) == doctest::Approx(-kLogPi).epsilon(1e-14));
  CHECK(log_eig_density(EigDensityFamily(EigFamily::beta2, 2, 2, 1),
                        eigs1(3.0, EigRange::positive),
                        Convention::paper) == doctest::Approx(std::log(1.0 / 16.0)).epsilon(1e-14));
  CHECK(log_eig_density(EigDensityFamily(EigFamily::beta1, 2, 2, 1), eigs1(0.75, EigRange::unit),
                        Convention::corrected) ==
        doctest::Approx(-std::log(2.0) - 0.5 * std::log(0.25)).epsilon(1e-14));
  CHECK_THROWS_AS(log_eig_density(EigDensityFamily(EigFamily::beta2, 2, 2, 1),
                                  eigs1(0.5, EigRange::unit), Convention::paper),
                  Error);
  CHECK_THROWS_AS(log_eig_density(EigDensityFamily(EigFamily::beta2, 2, 2, 2),
                                  eigs1(0.5, EigRange::positive), Convention::paper),
                  Error);
  CHECK_THROWS_AS(EigDensityFamily(EigFamily::inv_t, 2, 3, 1), Error);
  CHECK_THROWS_AS(EigDensityFamily(EigFamily::beta2, 1, 2, 2), Error);
}

TEST_CASE("m > n kernel swap only under the corrected convention") {
  const EigDensityFamily fam(EigFamily::beta2, 3, 2, 1);
  const EigKernel paper = log_eig_kernel_params(fam, Convention::paper);
  const EigKernel corr = log_eig_kernel_params(fam, Convention::corrected);
  CHECK(paper.power == 0.5);
  CHECK(paper.comp_power == -1.5);
  CHECK(corr.power == 0.0);
  CHECK(corr.comp_power == -2.0);
  const EigDensityFamily eq(EigFamily::beta2, 3, 3, 2);
  CHECK(log_eig_kernel_params(eq, Convention::paper).power ==
        log_eig_kernel_params(eq, Convention::corrected).power);
}

TEST_CASE("general and standard t densities agree") {
  Gen g(101);
  for (int k = 0; k < 100; ++k) {
    const int r = g.integer(1, 3), n = g.integer(r, 4), m = g.integer(n + r, n + r + 2);
    const Matrix t = g.gaussian(m, r) * g.uniform(0.2, 3.0);
    const double a = logpdf_t_general(TParams::standard(m, n, r), t);
    const double b = logpdf_t_standard(m, n, r, Matrix::Zero(m, r), t);
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(b)));
  }
}

TEST_CASE("location shift") {
  Gen g(102);
  for (int k = 0; k < 50; ++k) {
    const int r = g.integer(1, 3), n = g.integer(r, 4), m = g.integer(n, 5);
    const DistDims d(m, n, r);
    const Matrix mu = g.gaussian(m, r);
    const Matrix t = g.gaussian(m, r);
    const TParams shifted(d, mu, std::nullopt, CovFactor::identity(r));
    const Matrix dev = t - mu;
    CHECK(logpdf_t_general(shifted, t) == logpdf_t_general(TParams::standard(m, n, r), dev));
  }
}

TEST_CASE("X density") {
  Gen g(103);
  for (int k = 0; k < 50; ++k) {
    const int r = g.integer(1, 3), n = g.integer(r, 4), m = g.integer(n, 5);
    const Matrix x = g.gaussian(m, r);
    const TParams p = TParams::standard(m, n, r);
    CHECK(logpdf_x(p, x) == logpdf_t_general(p, x));
  }
  const TParams two(DistDims(1, 1, 1), Matrix::Zero(1, 1), std::nullopt, CovFactor(scalar(2.0)));
  for (double x : {-2.0, -0.3, 0.0, 0.7, 5.0}) {
    CHECK(logpdf_x(two, scalar(x)) ==
          doctest::Approx(logpdf_t_general(two, scalar(2 * x)) + std::log(2.0)).epsilon(1e-13));
  }
  const TParams id = TParams::standard(1, 1, 1);
  CHECK(logpdf_x(id, scalar(0)) == doctest::Approx(-kLogPi).epsilon(1e-14));
  const TParams shifted(DistDims(1, 1, 1), scalar(1.0), std::nullopt, CovFactor::identity(1));
  CHECK_THROWS_AS(logpdf_x(shifted, scalar(0)), Error);
}

TEST_CASE("orthogonal invariance") {
  Gen g(104);
  for (int k = 0; k < 100; ++k) {
    const int r = g.integer(1, 3), n = g.integer(r, 4), m = g.integer(n, 5);
    const Matrix t = g.gaussian(m, r);
    const Matrix h = g.orthonormal(m, m), o = g.orthonormal(r, r);
    const Matrix z = Matrix::Zero(m, r);
    CHECK(std::abs(logpdf_t_standard(m, n, r, z, t) - logpdf_t_standard(m, n, r, z, h * t * o)) <
          1e-10);

    const DistDims d(m, n, r);
    const Vector tau = g.descending(r, 0.05, 0.95);
    const Matrix rr = g.orthonormal(m, r) * tau.asDiagonal() * g.orthonormal(r, r).transpose();
    for (Convention c : {Convention::paper, Convention::corrected}) {
      CHECK(std::abs(logpdf_inverted_t(d, rr, c) - logpdf_inverted_t(d, h * rr * o, c)) < 1e-10);
    }
  }
}

// m = n only: for m > n the type I construction sits on the boundary and the
// corrected type II kernel is swapped.
TEST_CASE("beta type I is the image of type II under F = (I - U)^{-1} U") {
  Gen g(105);
  for (int k = 0; k < 60; ++k) {
    const int r = 1 + k % 2, m = g.integer(r, 5), n = m;
    const DistDims d(m, n, r);
    const Matrix q = g.orthonormal(r, r);
    const Vector lam = g.descending(r, 0.05, 0.95);
    Matrix u = q * lam.asDiagonal() * q.transpose();
    u = 0.5 * (u + u.transpose());
    const Matrix f = u_to_f(u);
    const double analytic = -(r + 1) * (-lam.array()).log1p().sum();
    CHECK(std::abs(numeric_log_jacobian(u) - analytic) < 1e-6 * std::max(1.0, std::abs(analytic)));
    const double lhs = logpdf_beta1(d, u, Convention::corrected);
    const double rhs = logpdf_beta2(d, Matrix(0.5 * (f + f.transpose())), Convention::corrected) +
                       analytic;
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("eigenvalue-law transform coherence") {
  Gen g(106);
  for (int k = 0; k < 100; ++k) {
    const int r = g.integer(1, 3), m = g.integer(r, 5);
    const EigDensityFamily b1(EigFamily::beta1, m, m, r), b2(EigFamily::beta2, m, m, r),
        sv(EigFamily::sv_t, m, m, r);
    for (Convention c : {Convention::paper, Convention::corrected}) {
      const OrderedEigs lam(g.descending(r, 0.02, 0.98), EigRange::unit);
      const double lhs = log_eig_density(b1, lam, c);
      const double rhs = log_eig_density(b2, eig_transform(lam, EigTransform::beta1_to_beta2), c) +
                         log_jacobian_eig_transform(lam, EigTransform::beta1_to_beta2);
      CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));

      const OrderedEigs kappa(g.descending(r, 0.05, 4.0), EigRange::positive);
      const double a = log_eig_density(sv, kappa, c);
      const double b = log_eig_density(b2, eig_transform(kappa, EigTransform::sv_to_beta2), c) +
                       log_jacobian_eig_transform(kappa, EigTransform::sv_to_beta2);
      CHECK(std::abs(a - b) < 1e-10 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST_CASE("eig_transform examples") {
  CHECK(eig_transform(eigs1(1.0, EigRange::positive), EigTransform::beta2_to_beta1).values()[0] ==
        0.5);
  const OrderedEigs lam(std::vector<double>{0.75, 0.25}, EigRange::unit);
  const OrderedEigs delta = eig_transform(lam, EigTransform::beta1_to_beta2);
  CHECK(delta.values()[0] == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(delta.values()[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(delta.range() == EigRange::positive);

  CHECK(log_jacobian_eig_transform(eigs1(0.5, EigRange::unit), EigTransform::beta1_to_beta2) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(log_jacobian_eig_transform(eigs1(2.0, EigRange::positive), EigTransform::sv_to_beta2) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK_THROWS_AS(eig_transform(lam, EigTransform::beta2_to_beta1), Error);

  Gen g(107);
  for (int k = 0; k < 100; ++k) {
    const OrderedEigs d(g.descending(3, 0.01, 50.0), EigRange::positive);
    const OrderedEigs back =
        eig_transform(eig_transform(d, EigTransform::beta2_to_beta1), EigTransform::beta1_to_beta2);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(back.values()[i] - d.values()[i]) < 1e-14 * std::max(1.0, d.values()[i]) * 4);
    }
  }
}

TEST_CASE("transforms are strictly increasing") {
  for (EigTransform t : {EigTransform::beta2_to_beta1, EigTransform::beta1_to_beta2,
                         EigTransform::sv_to_beta2, EigTransform::beta2_to_sv}) {
    const bool unit = t == EigTransform::beta1_to_beta2;
    double prev = -1.0;
    for (int i = 1; i < 1000; ++i) {
      const double x = unit ? i / 1000.0 : 1e-3 * i * i / 10.0;
      const double y = map_scalar(x, t);
      CHECK(y > prev);
      prev = y;
    }
  }
}

TEST_CASE("log Jacobian matches finite differences") {
  Gen g(108);
  for (EigTransform t : {EigTransform::beta2_to_beta1, EigTransform::beta1_to_beta2,
                         EigTransform::sv_to_beta2, EigTransform::beta2_to_sv}) {
    const bool unit = t == EigTransform::beta1_to_beta2;
    for (int r = 1; r <= 3; ++r) {
      for (int k = 0; k < 50; ++k) {
        const Vector v = unit ? g.descending(r, 0.05, 0.95) : g.descending(r, 0.1, 6.0);
        const OrderedEigs x(v, unit ? EigRange::unit : EigRange::positive);
        double numeric = 0.0;
        for (int i = 0; i < r; ++i) {
          const double h = 1e-5 * std::max(1e-2, v(i));
          numeric += std::log((map_scalar(v(i) + h, t) - map_scalar(v(i) - h, t)) / (2 * h));
        }
        const double analytic = log_jacobian_eig_transform(x, t);
        CHECK(std::abs(numeric - analytic) <= 1e-6 * std::max(1.0, std::abs(analytic)));
      }
    }
  }
}

TEST_CASE("no overflow at m = n = 50, r = 10") {
  Gen g(109);
  const int m = 50, n = 50, r = 10;
  const Matrix t = g.gaussian(m, r) * 30.0;
  CHECK(std::isfinite(logpdf_t_standard(m, n, r, Matrix::Zero(m, r), t)));
  CHECK(std::isfinite(logpdf_t_general(TParams::standard(m, n, r), t)));
  const DistDims d(m, n, r);
  const Matrix q = g.orthonormal(r, r);
  const Matrix f = q * g.descending(r, 1e-3, 1e4).asDiagonal() * q.transpose();
  CHECK(std::isfinite(logpdf_beta2(d, Matrix(0.5 * (f + f.transpose())), Convention::paper)));
  const Matrix u = q * g.descending(r, 1e-3, 0.999).asDiagonal() * q.transpose();
  CHECK(std::isfinite(logpdf_beta1(d, Matrix(0.5 * (u + u.transpose())), Convention::corrected)));
  for (EigFamily fam : {EigFamily::sv_t, EigFamily::beta2, EigFamily::beta1, EigFamily::inv_t}) {
    const EigDensityFamily ef(fam, m, n, r);
    const bool unit = ef.range() == EigRange::unit;
    const OrderedEigs e(unit ? g.descending(r, 1e-3, 0.999) : g.descending(r, 1e-3, 1e3),
                        ef.range());
    CHECK(std::isfinite(log_eig_density(ef, e, Convention::paper)));
    CHECK(std::isfinite(log_eig_density(ef, e, Convention::corrected)));
  }
}

TEST_CASE("density input validation") {
  const DistDims d(2, 2, 1);
  CHECK_THROWS_AS(logpdf_beta1(d, scalar(1.2), Convention::corrected), Error);
  CHECK_THROWS_AS(logpdf_beta2(d, scalar(-1.0), Convention::paper), Error);
  CHECK_THROWS_AS(logpdf_inverted_t(d, Matrix::Constant(2, 1, 0.9), Convention::paper), Error);
  CHECK_THROWS_AS(logpdf_t_standard(1, 2, 1, scalar(0), scalar(0)), Error);
  try {
    logpdf_beta2(DistDims(1, 2, 1), scalar(1.0), Convention::paper);
    FAIL("expected a dimension error");
  } catch (const Error &e) {
    CHECK(e.kind() == ErrorKind::invalid_dims);
    CHECK(std::string(e.what()).find("requires m ≥ n ≥ r") != std::string::npos);
  }
}
