#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace qrm::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalidInput = 2 };

// Runs the command line `args` (without the program name) and returns the
// process exit code. Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Regenerated tables with a per-row diff against the embedded golden values.
// Each result carries "rows" and a boolean "match".
nlohmann::json table_1a();
nlohmann::json table_1b();

nlohmann::json golden_1a();
nlohmann::json golden_1b();

}  // namespace qrm::cli
