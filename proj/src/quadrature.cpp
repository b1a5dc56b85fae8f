#include "dsbeta/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "dsbeta/error.hpp"

namespace dsbeta {

namespace {

template <int N>
UnitRule make_rule() {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const auto &abscissa = Rule::abscissa();
  const auto &weights = Rule::weights();
  UnitRule rule;
  rule.nodes.reserve(N);
  rule.complement.reserve(N);
  rule.weights.reserve(N);
  // Boost stores the nonnegative half in ascending order.
  auto push = [&rule](double x, double w) {
    rule.nodes.push_back(0.5 * (1.0 + x));
    rule.complement.push_back(0.5 * (1.0 - x));
    rule.weights.push_back(0.5 * w);
  };
  for (std::size_t i = abscissa.size(); i-- > 0;) {
    if (abscissa[i] != 0.0) push(-abscissa[i], weights[i]);
  }
  for (std::size_t i = 0; i < abscissa.size(); ++i) push(abscissa[i], weights[i]);
  return rule;
}

}  // namespace

void validate(const QuadScheme &scheme) {
  const int n = scheme.points_per_axis;
  require(n == 32 || n == 64 || n == 128, ErrorKind::invalid_input,
          "points_per_axis must be 32, 64 or 128");
}

const UnitRule &gauss_legendre(int n) {
  static const UnitRule r8 = make_rule<8>();
  static const UnitRule r16 = make_rule<16>();
  static const UnitRule r32 = make_rule<32>();
  static const UnitRule r64 = make_rule<64>();
  static const UnitRule r128 = make_rule<128>();
  static const UnitRule r256 = make_rule<256>();
  switch (n) {
    case 8: return r8;
    case 16: return r16;
    case 32: return r32;
    case 64: return r64;
    case 128: return r128;
    case 256: return r256;
    default: fail(ErrorKind::invalid_input, "no Gauss-Legendre rule with that many points");
  }
}

}  // namespace dsbeta
