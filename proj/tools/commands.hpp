#pragma once

#include <string>
#include <vector>

namespace recnav::cli {

/// Process exit codes. Every failure also prints one JSON line on stderr:
/// {"error":"<kind>","exit_code":<n>,"message":"..."}.
enum ExitCode : int {
    kOk = 0,
    kInternalError = 1,
    kInvalidParameter = 2,
    kMissingInput = 3,
    kSchemaMismatch = 4,
};

/// Runs one `recnav` command line (argv[0] is the program name). Never throws.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

} // namespace recnav::cli
