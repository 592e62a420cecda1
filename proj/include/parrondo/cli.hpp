#pragma once

#include <iosfwd>

namespace parrondo::cli {

/// Exit codes: 0 success, 1 a requested check did not match, 2 usage or
/// parse error, 3 domain error, 4 internal failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parrondo::cli
