#pragma once

#include <iosfwd>
#include <string>

namespace reicqed::cli {

// Command-line entry point. Exit codes: 0 success, 2 validation error,
// 3 numerical failure.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
               const std::string& default_catalog);

}  // namespace reicqed::cli
