#pragma once

#include <iosfwd>

namespace qchrome::cli {

/// Entry point of the qchrome command. Exit codes: 0 ran (including
/// "undetermined", "failure" and rejected certificates), 1 internal failure,
/// 2 usage error.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qchrome::cli
