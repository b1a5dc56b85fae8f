#ifndef DSBETA_QUADRATURE_HPP_
#define DSBETA_QUADRATURE_HPP_

#include <vector>

namespace dsbeta {

// none: integrate in the eigenvalue itself (unit range only).
// unit_box: y = s / (1 - s) on the positive range, identity on (0, 1).
// endpoint: y = tan^2(theta) on the positive range, y = sin^2(theta) on (0, 1).
enum class Substitution { none, unit_box, endpoint };

struct QuadScheme {
  int points_per_axis = 64;  // 32, 64 or 128
  Substitution substitution = Substitution::endpoint;
};

void validate(const QuadScheme &scheme);

// Gauss-Legendre rule mapped to (0, 1). complement[i] = 1 - nodes[i], kept
// separately so distances to the upper end stay accurate.
struct UnitRule {
  std::vector<double> nodes;
  std::vector<double> complement;
  std::vector<double> weights;
};

// n in {8, 16, 32, 64, 128, 256}.
const UnitRule &gauss_legendre(int n);

}  // namespace dsbeta

#endif  // DSBETA_QUADRATURE_HPP_
