#pragma once

#include <iosfwd>

namespace reeb {

/// Entry point of the reeb-spectra tool. Returns 0 on success (refusals
/// included), 1 on numerical failure and 2 on invalid input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace reeb
