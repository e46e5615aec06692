#pragma once

#include <iosfwd>

namespace z2lgt {

/// Exit codes: 0 success, 1 configuration error, 2 solver failure.
int cli_main(int argc, const char* const* argv, std::istream& in, std::ostream& out,
             std::ostream& err);

}  // namespace z2lgt
