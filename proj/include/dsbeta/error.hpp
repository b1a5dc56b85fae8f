#ifndef DSBETA_ERROR_HPP_
#define DSBETA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsbeta {

enum class ErrorKind {
  invalid_input,  // non-finite entries, malformed values
  invalid_dims,   // dimension-order or shape violations
  rank,           // numerical rank differs from what the operation needs
  tie,            // equal eigen/singular values where distinct ones are required
  pole,           // gamma-function argument at or below a pole
  not_psd,        // matrix has a clearly negative eigenvalue
  support,        // value outside the support of a density
  unsupported,    // valid request outside what is implemented
  degenerate,     // construction is almost surely on the boundary of the support
  divergence,     // density is not normalizable under the requested convention
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // True for failures caused by the numbers rather than by the request.
  bool is_numerical() const noexcept {
    return kind_ == ErrorKind::rank || kind_ == ErrorKind::tie ||
           kind_ == ErrorKind::not_psd || kind_ == ErrorKind::divergence ||
           kind_ == ErrorKind::degenerate;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) {
  throw Error(kind, what);
}

inline void require(bool condition, ErrorKind kind, const std::string &what) {
  if (!condition) fail(kind, what);
}

}  // namespace dsbeta

#endif  // DSBETA_ERROR_HPP_
