#pragma once

#include <cstdint>
#include <iosfwd>

/// Runs every library-versus-oracle comparison on `trials` random instances
/// each, prints one line per check and returns 0 when all pass.
int run_selfcheck(std::uint64_t seed, int trials, std::ostream& out);
