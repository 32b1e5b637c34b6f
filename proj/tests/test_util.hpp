#pragma once

#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "wlmp/error.hpp"

#define EXPECT_WLMP_ERROR(statement, expected_code)                                        \
  do {                                                                                     \
    try {                                                                                  \
      statement;                                                                           \
      ADD_FAILURE() << "expected wlmp::Error(" << wlmp::to_string(expected_code) << ")";  \
    } catch (const wlmp::Error& e) {                                                       \
      EXPECT_EQ(e.code(), expected_code) << e.what();                                      \
    }                                                                                      \
  } while (false)

namespace wlmp::test {

inline std::vector<std::size_t> random_permutation(std::size_t m, std::uint64_t seed) {
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace wlmp::test
