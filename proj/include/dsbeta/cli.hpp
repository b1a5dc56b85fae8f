#ifndef DSBETA_CLI_HPP_
#define DSBETA_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace dsbeta::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// Runs one command line (without the program name). Results go to `out`
// unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace dsbeta::cli

#endif  // DSBETA_CLI_HPP_
