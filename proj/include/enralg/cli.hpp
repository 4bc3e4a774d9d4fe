#pragma once

// Command-line front end. Exit status: 0 success, equal or valid; 1 semantic
// failure (invalid, differ, unsatisfied); 2 usage, parse or unsupported.

#include <ostream>

namespace enralg {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace enralg
