#pragma once

// Command-line front end. `run` is the whole program minus process setup, so
// tests can drive it in-process.

#include <ostream>
#include <string>
#include <vector>

namespace kgnu::cli {

inline constexpr const char *kVersion = "1.0.0";

/// Exit codes: 0 success, 1 numerical or physical failure, 2 usage or config error.
enum ExitCode : int { kOk = 0, kNumerical = 1, kUsage = 2 };

/// args excludes the program name. Data goes to `out` unless --output is
/// given; diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// printf("%.17g") in the C locale.
std::string format_number(double v);

/// Worker count from KGNU_THREADS, else the hardware concurrency; at least 1.
unsigned thread_budget();

} // namespace kgnu::cli
