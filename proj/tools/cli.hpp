#pragma once

#include <iosfwd>

namespace bihc::cli {

/// Exit codes: 0 success, 1 input error, 2 certification refusal.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitRefused = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bihc::cli
