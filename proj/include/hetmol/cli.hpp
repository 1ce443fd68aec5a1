#pragma once

#include <ostream>

namespace hetmol::cli {

// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;    // bad flags or invalid parameters
inline constexpr int kExitFailure = 3;  // numerical failure or unwritable output

// Parses argv, runs one subcommand and writes its CSV to --out (stdout when
// "-"). Diagnostics and run summaries go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hetmol::cli
