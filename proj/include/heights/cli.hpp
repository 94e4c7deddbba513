#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heights::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;     // bad flags, malformed JSON/CSV, domain errors
inline constexpr int kExitResource = 3;  // resource limits and poles

// `args` excludes the program name. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heights::cli
