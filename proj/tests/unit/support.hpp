#pragma once

#include <gtest/gtest.h>

#include <string>
#include <string_view>
#include <vector>

#include "bitt/oracle.hpp"
#include "bitt/surface.hpp"

namespace bitt::test {

inline Term parse(std::string_view text, const std::vector<std::string>& scope = {}) {
  return surface::parse_term(text, scope);
}

inline ::testing::AssertionResult alpha_equal(const Term& a, const Term& b) {
  if (alpha_eq(a, b)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << surface::print(a) << "  vs  " << surface::print(b);
}

// Well-typed instances from the generator, fixed seeds.
inline std::vector<oracle::Generated> sample(unsigned count, unsigned depth = 4,
                                             std::uint64_t salt = 0) {
  std::vector<oracle::Generated> out;
  out.reserve(count);
  oracle::GenConfig cfg;
  cfg.max_depth = depth;
  for (unsigned i = 0; i < count; ++i) {
    cfg.seed = salt * 7919 + i;
    out.push_back(oracle::generate(cfg));
  }
  return out;
}

}  // namespace bitt::test

#define EXPECT_ALPHA(a, b) EXPECT_TRUE(::bitt::test::alpha_equal((a), (b)))
