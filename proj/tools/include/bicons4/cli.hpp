#pragma once

// Command line front end. `run` is the whole program minus process
// plumbing, so tests can drive it in-process.
//
// Exit codes: 0 success, 1 residual/check failure, 2 usage, domain or
// parameter error.

#include <iosfwd>
#include <string>
#include <vector>

namespace bicons4::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitResidual = 1;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitInternal = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bicons4::cli
