#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace asmf::cli {

/// Runs one `asmf-tree` invocation. `args` excludes the program name.
/// Returns the process exit status; failures write exactly one line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace asmf::cli
