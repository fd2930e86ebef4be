#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fourphoton::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumeric = 3, kIo = 4 };

/// Relative --out paths resolve against this directory when it is set.
inline constexpr const char* kOutDirEnv = "FOURPHOTON_OUT_DIR";

/// Runs the tool with argv-style arguments (args[0] is ignored). Normal
/// output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parses "0.125pi", "pi", "-0.5" or "0.3927" into radians. Throws
/// std::invalid_argument on anything else.
double parse_angle(const std::string& text);

}  // namespace fourphoton::cli
