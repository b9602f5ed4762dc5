#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "bitt/syntax.hpp"

namespace bitt {

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Raised when a reduction budget runs out. Well-typed terms normalize, so
/// this signals a caller bug or a deliberately tiny budget.
class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(std::uint64_t limit);
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
};

/// Budget of contraction steps shared by every reduction performed under it.
class Fuel {
 public:
  explicit Fuel(std::uint64_t limit = kDefaultFuel) : limit_(limit) {}

  void consume() {
    if (used_ >= limit_) throw FuelExhausted(limit_);
    ++used_;
  }
  std::uint64_t used() const { return used_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

struct WhnfResult {
  Term term;
  std::uint64_t steps = 0;
};

/// Is the root of `t` a β- or ι-redex?
bool is_redex(const Term& t);

/// Contract the redex at the root of `t`. Precondition: is_redex(t).
Term contract(const Term& t);

/// One leftmost-outermost reduction step, or nothing on a normal form.
std::optional<Term> step(const Term& t);

/// One weak-head step: contracts the redex in head position (the head of an
/// application spine or the scrutinee of a recursor), if any.
std::optional<Term> head_step(const Term& t);

/// Number of redexes anywhere in `t`.
std::size_t count_redexes(const Term& t);

/// Contract the `n`-th redex of `t` in pre-order (0 = leftmost-outermost).
std::optional<Term> reduce_at(const Term& t, std::size_t n);

WhnfResult whnf(const Term& t, Fuel& fuel);
WhnfResult whnf(const Term& t, std::uint64_t fuel = kDefaultFuel);

/// β/ι-normal form: weak-head reduce, then normalize every subterm.
Term normalize(const Term& t, Fuel& fuel);
Term normalize(const Term& t, std::uint64_t fuel = kDefaultFuel);

}  // namespace bitt
