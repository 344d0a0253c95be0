#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <vector>

#include "simt/policy.hpp"

using namespace simt;

namespace {

// Exhaustive evaluation of the defining min-sets, independent of the
// binary-search implementation path.
int min_boundary_at_or_after(int value, const std::vector<int>& boundaries) {
  std::set<int> set(boundaries.begin(), boundaries.end());
  for (int j = value;; ++j) {
    if (set.count(j)) return j;
  }
}

std::vector<int> refine_oracle(const std::vector<int>& g, const std::vector<int>& src_boundaries) {
  std::vector<int> r;
  for (int gi : g) r.push_back(min_boundary_at_or_after(gi, src_boundaries));
  return r;
}

std::vector<int> word_end_oracle(int m, const std::vector<int>& tgt_boundaries) {
  std::vector<int> b;
  for (int i = 1; i <= m; ++i) b.push_back(min_boundary_at_or_after(i, tgt_boundaries));
  return b;
}

std::vector<int> word_schedule_oracle(const std::vector<int>& r, const std::vector<int>& b) {
  std::vector<int> w(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    w[i] = (i == 0 || b[i - 1] != b[i]) ? r[i] : w[i - 1];
  }
  return w;
}

std::vector<int> random_boundaries(std::mt19937& rng, int n) {
  std::bernoulli_distribution final_dist(0.45);
  std::vector<int> out;
  for (int j = 1; j < n; ++j) {
    if (final_dist(rng)) out.push_back(j);
  }
  out.push_back(n);
  return out;
}

Schedule random_schedule(std::mt19937& rng, int n, int m) {
  std::uniform_int_distribution<int> value(1, n);
  std::vector<int> g(m);
  for (int& v : g) v = value(rng);
  std::sort(g.begin(), g.end());
  return Schedule{std::move(g), n};
}

}  // namespace

TEST_CASE("waitk_token ramps and saturates") {
  CHECK(waitk_token(1, 10, 7).g == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
  CHECK(waitk_token(3, 5, 4).g == std::vector<int>{3, 4, 5, 5});
  CHECK(waitk_token(1, 9, 15).g == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 9, 9, 9, 9});
  CHECK_THROWS_AS(waitk_token(0, 5, 5), InvalidParameterError);
}

TEST_CASE("word_read_refine lifts reads to source word boundaries") {
  Schedule g{{1, 2, 3, 4, 5, 6, 7}, 10};
  CHECK(word_read_refine(g, {1, 3, 4, 10}) == std::vector<int>{1, 3, 3, 4, 10, 10, 10});

  Schedule at_bounds{{1, 3, 4, 10}, 10};
  CHECK(word_read_refine(at_bounds, {1, 3, 4, 10}) == at_bounds.g);

  Schedule two{{2}, 10};
  CHECK(word_read_refine(two, {1, 3, 4, 10}) == std::vector<int>{3});
}

TEST_CASE("target_word_end finds the enclosing word's last token") {
  CHECK(target_word_end(2, {1, 3, 4, 7}) == 3);
  CHECK(target_word_end(4, {1, 3, 4, 7}) == 4);
  CHECK(target_word_end(1, {2, 3}) == 2);
  CHECK_THROWS_AS(target_word_end(0, {2, 3}), IndexError);
  CHECK_THROWS_AS(target_word_end(4, {2, 3}), IndexError);
}

TEST_CASE("to_word_policy composes whole words") {
  // Token Wait-1 on the first golden sentence pair.
  ConversionResult conv =
      to_word_policy(waitk_token(1, 10, 7), {1, 3, 4, 10}, {1, 3, 4, 7});
  CHECK(conv.word_schedule.g == std::vector<int>{1, 3, 3, 4, 10, 10, 10});

  // All-singleton words: the conversion is the identity.
  Schedule g{{1, 2, 3}, 3};
  ConversionResult identity = to_word_policy(g, {1, 2, 3}, {1, 2, 3});
  CHECK(identity.word_schedule.g == g.g);

  // Second golden pair: the strict conversion front-loads the writes; the
  // printed word Wait-1 trace is the word-unit wait-k policy, not this one.
  ConversionResult conv2 =
      to_word_policy(waitk_token(1, 9, 7), {4, 5, 6, 7, 9}, {2, 3, 4, 5, 7});
  CHECK(conv2.refined_read == std::vector<int>{4, 4, 4, 4, 5, 6, 7});
  CHECK(conv2.word_end == std::vector<int>{2, 2, 3, 4, 5, 7, 7});
  CHECK(conv2.word_schedule.g == std::vector<int>{4, 4, 4, 4, 5, 6, 6});
}

TEST_CASE("conversion matches exhaustive min-set evaluation") {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> size(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = size(rng);
    int m = size(rng);
    auto src_b = random_boundaries(rng, n);
    auto tgt_b = random_boundaries(rng, m);
    Schedule g = random_schedule(rng, n, m);

    auto r_expect = refine_oracle(g.g, src_b);
    auto b_expect = word_end_oracle(m, tgt_b);
    auto w_expect = word_schedule_oracle(r_expect, b_expect);

    ConversionResult conv = to_word_policy(g, src_b, tgt_b);
    REQUIRE(conv.refined_read == r_expect);
    REQUIRE(conv.word_end == b_expect);
    REQUIRE(conv.word_schedule.g == w_expect);

    // Refinement properties.
    for (int i = 0; i < m; ++i) {
      REQUIRE(conv.refined_read[i] >= g.g[i]);
      REQUIRE(std::binary_search(src_b.begin(), src_b.end(), conv.refined_read[i]));
      if (i > 0) REQUIRE(conv.refined_read[i] >= conv.refined_read[i - 1]);
    }
    // The word schedule is constant per word and equals r at word starts.
    REQUIRE_NOTHROW(conv.word_schedule.validate());
    for (int i = 1; i <= m; ++i) {
      bool starts = i == 1 || conv.word_end[i - 2] != conv.word_end[i - 1];
      if (starts) {
        REQUIRE(conv.word_schedule.g[i - 1] == conv.refined_read[i - 1]);
      } else {
        REQUIRE(conv.word_schedule.g[i - 1] == conv.word_schedule.g[i - 2]);
      }
    }
    // Converting the converted policy changes nothing.
    ConversionResult again = to_word_policy(conv.word_schedule, src_b, tgt_b);
    REQUIRE(again.word_schedule.g == conv.word_schedule.g);
  }
}

TEST_CASE("waitk_word waits in word units") {
  // First golden pair, word Wait-1.
  CHECK(waitk_word(1, std::vector<int>{1, 3, 4, 10}, {1, 3, 4, 7}).g ==
        std::vector<int>{1, 3, 3, 4, 10, 10, 10});

  // k at or past the source word count degenerates to offline.
  CHECK(waitk_word(4, std::vector<int>{2, 4}, {1, 2, 3}).g == std::vector<int>{4, 4, 4});

  // Word-delay formula checked by direct enumeration.
  CHECK(waitk_word(2, std::vector<int>{2, 4, 6}, {1, 2, 3}).g == std::vector<int>{4, 6, 6});
  {
    std::mt19937 rng(20240612);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> k_dist(1, 6);
    for (int trial = 0; trial < 300; ++trial) {
      int n = size(rng);
      int m = size(rng);
      int k = k_dist(rng);
      auto src_b = random_boundaries(rng, n);
      auto tgt_b = random_boundaries(rng, m);
      Schedule s = waitk_word(k, src_b, tgt_b);
      REQUIRE_NOTHROW(s.validate());
      int src_words = static_cast<int>(src_b.size());
      for (int i = 1; i <= m; ++i) {
        int t = static_cast<int>(std::lower_bound(tgt_b.begin(), tgt_b.end(), i) - tgt_b.begin()) + 1;
        int delay = std::min(k + t - 1, src_words);
        REQUIRE(s.g[i - 1] == src_b[delay - 1]);
      }
    }
  }
  CHECK_THROWS_AS(waitk_word(0, std::vector<int>{1}, {1}), InvalidParameterError);
}

TEST_CASE("word wait-k and the converted token wait-k coincide only by accident") {
  // They agree on the first golden pair...
  Schedule converted = to_word_policy(waitk_token(1, 10, 7), {1, 3, 4, 10}, {1, 3, 4, 7}).word_schedule;
  Schedule word = waitk_word(1, std::vector<int>{1, 3, 4, 10}, {1, 3, 4, 7});
  CHECK(converted.g == word.g);

  // ...but not on the second: the conversion waits between 1 and k tokens.
  Schedule converted2 = to_word_policy(waitk_token(1, 9, 7), {4, 5, 6, 7, 9}, {2, 3, 4, 5, 7}).word_schedule;
  Schedule word2 = waitk_word(1, std::vector<int>{4, 5, 6, 7, 9}, {2, 3, 4, 5, 7});
  CHECK(word2.g == std::vector<int>{4, 4, 5, 6, 7, 9, 9});
  CHECK(converted2.g != word2.g);
}

TEST_CASE("ablation policies") {
  Schedule base = waitk_token(1, 10, 7);
  std::vector<int> src_b{1, 3, 4, 10};
  std::vector<int> tgt_b{1, 3, 4, 7};
  AblationParams params;
  params.base = &base;
  params.src_boundaries = &src_b;
  params.tgt_boundaries = &tgt_b;

  SECTION("WT is the refined read sequence") {
    Schedule wt = ablation_policy(AblationKind::WT, params);
    CHECK(wt.g == word_read_refine(base, src_b));
    CHECK(wt.g == std::vector<int>{1, 3, 3, 4, 10, 10, 10});
  }

  SECTION("WW is the full conversion") {
    Schedule ww = ablation_policy(AblationKind::WW, params);
    CHECK(ww.g == to_word_policy(base, src_b, tgt_b).word_schedule.g);
  }

  SECTION("TW groups raw reads by target word") {
    Schedule tw = ablation_policy(AblationKind::TW, params);
    auto b = word_end_oracle(7, tgt_b);
    auto expect = word_schedule_oracle(base.g, b);
    CHECK(tw.g == expect);
  }

  SECTION("TkTk alternates fixed blocks") {
    AblationParams tk;
    tk.k = 1;
    tk.n = 10;
    tk.m = 7;
    CHECK(ablation_policy(AblationKind::TkTk, tk).g == waitk_token(1, 10, 7).g);

    // Enumeration of the read-k/write-k rule.
    CHECK(tktk_policy(2, 6, 5).g == std::vector<int>{2, 2, 4, 4, 6});
    std::mt19937 rng(20240613);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> k_dist(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
      int n = size(rng);
      int m = size(rng);
      int k = k_dist(rng);
      Schedule s = tktk_policy(k, n, m);
      int read = 0;
      int written = 0;
      std::vector<int> expect;
      while (written < m) {
        read = std::min(read + k, n);
        for (int w = 0; w < k && written < m; ++w) {
          expect.push_back(read);
          ++written;
        }
      }
      REQUIRE(s.g == expect);
    }
  }

  SECTION("invalid kinds and missing inputs") {
    CHECK_THROWS_AS(parse_ablation_kind("wtw"), InvalidParameterError);
    AblationParams empty;
    CHECK_THROWS_AS(ablation_policy(AblationKind::WW, empty), InvalidParameterError);
  }
}

TEST_CASE("itst_required_counts thresholds accumulated mass") {
  SECTION("uniform rows hit the closed form") {
    auto uniform = [](int m, int n) {
      std::vector<std::vector<double>> rows(m, std::vector<double>(n, 1.0 / n));
      return TransportMatrix::from_rows(rows);
    };
    Schedule s = itst_required_counts(uniform(7, 10), 0.5);
    CHECK(s.g == std::vector<int>(7, 5));

    Schedule first = itst_required_counts(uniform(3, 10), 1e-6);
    CHECK(first.g == std::vector<int>(3, 1));
  }

  SECTION("mass concentrated on the last column forces a full read") {
    std::vector<std::vector<double>> rows(2, std::vector<double>(5, 0.0));
    rows[0][4] = 1.0;
    rows[1][4] = 1.0;
    Schedule s = itst_required_counts(TransportMatrix::from_rows(rows), 0.4);
    CHECK(s.g == std::vector<int>{5, 5});
  }

  SECTION("delta bounds") {
    std::vector<std::vector<double>> rows{{0.5, 0.5}};
    auto t = TransportMatrix::from_rows(rows);
    CHECK_THROWS_AS(itst_required_counts(t, 0.0), InvalidParameterError);
    CHECK_THROWS_AS(itst_required_counts(t, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(itst_required_counts(t, -0.5), InvalidParameterError);
  }

  SECTION("smaller thresholds never read more") {
    std::mt19937 rng(20240614);
    std::uniform_int_distribution<int> size(1, 10);
    std::uniform_real_distribution<double> mass(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      int m = size(rng);
      int n = size(rng);
      std::vector<std::vector<double>> rows(m, std::vector<double>(n));
      for (auto& row : rows) {
        double sum = 0.0;
        for (double& v : row) {
          v = mass(rng);
          sum += v;
        }
        for (double& v : row) v /= sum;  // proper distribution
      }
      auto t = TransportMatrix::from_rows(rows);
      Schedule prev;
      for (int step = 1; step <= 10; ++step) {
        double delta = step / 11.0;
        Schedule s = itst_required_counts(t, delta);
        REQUIRE_NOTHROW(s.validate());
        if (step > 1) {
          for (int i = 0; i < m; ++i) REQUIRE(prev.g[i] <= s.g[i]);
        }
        prev = s;
      }
    }
  }

  SECTION("transport matrix validation") {
    CHECK_THROWS_AS(TransportMatrix::from_rows({{0.5, -0.1}}), InvalidParameterError);
    CHECK_THROWS_AS(TransportMatrix::from_rows({{0.9, 0.9}}), InvalidParameterError);
    CHECK_THROWS_AS(TransportMatrix::from_rows({{0.0, 0.0}}), InvalidParameterError);
    CHECK_THROWS_AS(TransportMatrix::from_rows({{0.5, 0.5}, {1.0}}), DimensionError);
  }
}

TEST_CASE("itst_word_policy lifts word starts to boundaries") {
  Schedule g{{5, 5, 5, 5, 5, 5, 5}, 10};
  CHECK(itst_word_policy(g, {1, 3, 4, 10}, {1, 3, 4, 7}).g == std::vector<int>(7, 10));

  Schedule aligned{{1, 2, 3}, 3};
  CHECK(itst_word_policy(aligned, {1, 2, 3}, {1, 2, 3}).g == aligned.g);

  Schedule small{{1, 2, 2}, 3};
  CHECK(itst_word_policy(small, {2, 3}, {1, 3}).g == std::vector<int>{2, 2, 2});

  // Same effect as the generic conversion on any schedule.
  std::mt19937 rng(20240615);
  std::uniform_int_distribution<int> size(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    int n = size(rng);
    int m = size(rng);
    auto src_b = random_boundaries(rng, n);
    auto tgt_b = random_boundaries(rng, m);
    Schedule s = random_schedule(rng, n, m);
    REQUIRE(itst_word_policy(s, src_b, tgt_b).g == to_word_policy(s, src_b, tgt_b).word_schedule.g);
  }
}

TEST_CASE("schedule and action trace are mutually inverse") {
  Schedule s{{1, 3, 3}, 3};
  ActionTrace trace = schedule_to_actions(s);
  ActionTrace expect{
      {Action::Kind::Read, 1, false},  {Action::Kind::Write, 1, false}, {Action::Kind::Read, 2, false},
      {Action::Kind::Read, 3, false},  {Action::Kind::Write, 2, false}, {Action::Kind::Write, 3, false},
  };
  CHECK(trace == expect);
  CHECK(actions_to_schedule(trace) == s);

  SECTION("offline: all reads then all writes") {
    Schedule offline{{4, 4, 4}, 4};
    ActionTrace t = schedule_to_actions(offline);
    for (int p = 0; p < 4; ++p) CHECK(t[p].kind == Action::Kind::Read);
    for (int p = 4; p < 7; ++p) CHECK(t[p].kind == Action::Kind::Write);
  }

  SECTION("unread source tokens become post-final reads") {
    Schedule s2{{1, 2}, 5};
    ActionTrace t = schedule_to_actions(s2);
    REQUIRE(t.size() == 7);
    CHECK(t[4] == Action{Action::Kind::Read, 3, true});
    CHECK(t[6] == Action{Action::Kind::Read, 5, true});
    CHECK(actions_to_schedule(t) == s2);
  }

  SECTION("round trip on random schedules") {
    std::mt19937 rng(20240616);
    std::uniform_int_distribution<int> size(1, 20);
    for (int trial = 0; trial < 1000; ++trial) {
      int n = size(rng);
      int m = size(rng);
      Schedule s3 = random_schedule(rng, n, m);
      REQUIRE(actions_to_schedule(schedule_to_actions(s3)) == s3);
    }
  }

  SECTION("malformed inputs") {
    CHECK_THROWS_AS(schedule_to_actions(Schedule{{3, 1}, 3}), InvalidScheduleError);
    CHECK_THROWS_AS(schedule_to_actions(Schedule{{0}, 3}), InvalidScheduleError);
    CHECK_THROWS_AS(schedule_to_actions(Schedule{{4}, 3}), InvalidScheduleError);

    CHECK_THROWS_AS(actions_to_schedule({}), InvalidTraceError);
    CHECK_THROWS_AS(actions_to_schedule({{Action::Kind::Write, 1, false}}), InvalidTraceError);
    CHECK_THROWS_AS(actions_to_schedule({{Action::Kind::Read, 2, false}, {Action::Kind::Write, 1, false}}),
                    InvalidTraceError);
    // Mis-flagged post-final read.
    CHECK_THROWS_AS(actions_to_schedule({{Action::Kind::Read, 1, true}, {Action::Kind::Write, 1, false}}),
                    InvalidTraceError);
    CHECK_THROWS_AS(actions_to_schedule({{Action::Kind::Read, 1, false}, {Action::Kind::Write, 1, false},
                                         {Action::Kind::Read, 2, false}}),
                    InvalidTraceError);
  }
}
