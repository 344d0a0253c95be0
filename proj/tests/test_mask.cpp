#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "simt/mask.hpp"

using namespace simt;

namespace {

std::vector<int> random_boundaries(std::mt19937& rng, int n) {
  std::bernoulli_distribution final_dist(0.4);
  std::vector<int> out;
  for (int j = 1; j < n; ++j) {
    if (final_dist(rng)) out.push_back(j);
  }
  out.push_back(n);
  return out;
}

int row_sum(const AttentionMask& mask, int i) {
  int sum = 0;
  for (int j = 1; j <= mask.cols(); ++j) sum += mask.allowed(i, j) ? 1 : 0;
  return sum;
}

}  // namespace

TEST_CASE("causal mask is lower triangular") {
  AttentionMask one = causal_mask(1);
  CHECK(one.allowed(1, 1));

  AttentionMask three = causal_mask(3);
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) CHECK(three.allowed(i, j) == (j <= i));
  }

  AttentionMask five = causal_mask(5);
  for (int i = 1; i <= 5; ++i) CHECK(row_sum(five, i) == i);

  CHECK_THROWS_AS(causal_mask(0), InvalidParameterError);
}

TEST_CASE("intra-word mask is bidirectional inside words") {
  AttentionMask mask = intra_word_mask({1, 3, 4, 10}, 10);
  // Token 2 sits in the word spanning 2..3, so it sees through column 3.
  for (int j = 1; j <= 10; ++j) CHECK(mask.allowed(2, j) == (j <= 3));

  SECTION("singleton words degenerate to the causal mask") {
    CHECK(intra_word_mask({1, 2, 3}, 3) == causal_mask(3));
  }

  SECTION("a single word is fully bidirectional") {
    AttentionMask full = intra_word_mask({4}, 4);
    for (int i = 1; i <= 4; ++i) {
      for (int j = 1; j <= 4; ++j) CHECK(full.allowed(i, j));
    }
  }

  SECTION("inconsistent boundary sets are rejected") {
    CHECK_THROWS_AS(intra_word_mask({2}, 3), BoundaryError);
    CHECK_THROWS_AS(intra_word_mask({}, 3), BoundaryError);
    CHECK_THROWS_AS(intra_word_mask({3, 2}, 3), BoundaryError);
  }
}

TEST_CASE("cross mask mirrors the schedule prefix widths") {
  AttentionMask mask = cross_mask(Schedule{{1, 3, 3}, 3});
  CHECK(row_sum(mask, 1) == 1);
  CHECK(row_sum(mask, 2) == 3);
  CHECK(row_sum(mask, 3) == 3);
  CHECK_FALSE(mask.allowed(1, 2));

  AttentionMask offline = cross_mask(Schedule{{4, 4}, 4});
  for (int i = 1; i <= 2; ++i) CHECK(row_sum(offline, i) == 4);

  AttentionMask word_w1 = cross_mask(Schedule{{1, 3, 3, 4, 10, 10, 10}, 10});
  std::vector<int> widths;
  for (int i = 1; i <= word_w1.rows(); ++i) widths.push_back(row_sum(word_w1, i));
  CHECK(widths == std::vector<int>{1, 3, 3, 4, 10, 10, 10});
}

TEST_CASE("intra-word mask properties on random boundary sets") {
  std::mt19937 rng(20240631);
  std::uniform_int_distribution<int> size(1, 16);
  for (int trial = 0; trial < 500; ++trial) {
    int n = size(rng);
    auto boundaries = random_boundaries(rng, n);
    AttentionMask intra = intra_word_mask(boundaries, n);
    AttentionMask causal = causal_mask(n);

    // Superset of the causal permissions, equal only for singleton words.
    REQUIRE(causal.subset_of(intra));
    bool all_singletons = static_cast<int>(boundaries.size()) == n;
    REQUIRE((intra == causal) == all_singletons);

    // Every row allows self-attention.
    for (int i = 1; i <= n; ++i) REQUIRE(intra.allowed(i, i));

    // Within each word the block is all-true; later words are invisible.
    int first = 1;
    for (int b : boundaries) {
      for (int i = first; i <= b; ++i) {
        for (int j = first; j <= b; ++j) REQUIRE(intra.allowed(i, j));
        for (int j = b + 1; j <= n; ++j) REQUIRE_FALSE(intra.allowed(i, j));
      }
      first = b + 1;
    }

    // Prefix consistency: the mask of the first p words is the top-left
    // corner of the full mask, for every prefix length.
    for (std::size_t p = 1; p <= boundaries.size(); ++p) {
      int len = boundaries[p - 1];
      std::vector<int> prefix(boundaries.begin(), boundaries.begin() + p);
      AttentionMask sub = intra_word_mask(prefix, len);
      REQUIRE(sub == intra.top_left(len, len));
    }
  }
}
