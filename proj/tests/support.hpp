#ifndef DSBETA_TESTS_SUPPORT_HPP_
#define DSBETA_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "dsbeta/linalg.hpp"

namespace dsbeta::testing {

// Seeded case generator for the property suites.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = nd(eng_);
    return m;
  }

  Matrix orthonormal(Eigen::Index rows, Eigen::Index cols) {
    return random_orthogonal_like(gaussian(rows, cols));
  }

  // Q diag(eigs) Q' with distinct eigenvalues in (lo, hi), descending.
  Matrix psd(Eigen::Index m, Eigen::Index rank, double lo = 0.5, double hi = 5.0) {
    Vector e = descending(rank, lo, hi);
    const Matrix q = orthonormal(m, rank);
    return q * e.asDiagonal() * q.transpose();
  }

  // Well-separated descending values in (lo, hi).
  Vector descending(Eigen::Index k, double lo, double hi) {
    Vector v(k);
    const double step = (hi - lo) / static_cast<double>(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      v(i) = hi - step * (static_cast<double>(i) + uniform(0.15, 0.85));
    }
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline double norm_max(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace dsbeta::testing

#endif  // DSBETA_TESTS_SUPPORT_HPP_
