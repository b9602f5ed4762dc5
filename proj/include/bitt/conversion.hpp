#pragma once

#include <cstdint>

#include "bitt/reduction.hpp"
#include "bitt/syntax.hpp"

namespace bitt {

/// Conv is ≅ (sorts must match exactly); Cumul is ≼ (sorts may grow, and
/// Π codomains are compared covariantly). Conv implies Cumul.
enum class RelKind : std::uint8_t { Conv, Cumul };

/// Decide `t rel u` by simultaneous weak-head reduction and structural
/// recursion. No η. Both sides are assumed well-formed in a common context.
bool compare(const Term& t, const Term& u, RelKind rel, Fuel& fuel);

bool convertible(const Term& t, const Term& u, Fuel& fuel);
bool convertible(const Term& t, const Term& u, std::uint64_t fuel = kDefaultFuel);

bool cumul(const Term& t, const Term& u, Fuel& fuel);
bool cumul(const Term& t, const Term& u, std::uint64_t fuel = kDefaultFuel);

}  // namespace bitt
