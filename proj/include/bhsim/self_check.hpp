#pragma once

#include <iosfwd>

namespace bh::self_check {

/// Runs the built-in property and oracle checks, one line per check.
/// Returns the number of failures.
int run_all(std::ostream& out);

}  // namespace bh::self_check
