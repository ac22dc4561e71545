#pragma once

#include <iosfwd>

namespace gdlog::cli {

/// Runs the command line. Exit status: 0 success, 1 usage, parse or
/// validation errors, 2 runtime errors, 3 a failed `check`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gdlog::cli
