#pragma once

#include "pitgen/field.hpp"

namespace pitgen {

// binom(n, k) mod p from Pascal's recurrence (never factorials), so small
// characteristic is handled without special cases.  Zero when k > n.
Felt binomial(u64 n, u64 k, const Field& f);

}  // namespace pitgen
