#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "simt/errors.hpp"
#include "simt/policy.hpp"
#include "simt/token.hpp"

namespace simt {

// Average Lagging conventions, pinned so numbers are reproducible:
// gamma = hypothesis length / source length, and the sum runs to the first
// position that reads the full source (all positions when none does). Every
// report carries the convention string.
struct ALParams {
  enum class Gamma { HypothesisOverSource };
  enum class Tau { FirstFullReadFallbackAll };

  Gamma gamma_convention = Gamma::HypothesisOverSource;
  Tau tau_convention = Tau::FirstFullReadFallbackAll;

  std::string describe() const { return "gamma=hypothesis/source, tau=first_full_read, fallback_m"; }
};

struct ALBreakdown {
  double value = 0.0;
  double gamma = 0.0;
  int tau = 0;
};

inline ALBreakdown average_lagging_breakdown(const Schedule& s, const ALParams& params = {}) {
  s.validate();
  (void)params;  // one supported convention; kept explicit in reports
  int n = s.source_len;
  int m = s.target_len();
  ALBreakdown out;
  out.gamma = static_cast<double>(m) / static_cast<double>(n);
  out.tau = m;
  for (int i = 1; i <= m; ++i) {
    if (s.g[i - 1] == n) {
      out.tau = i;
      break;
    }
  }
  double sum = 0.0;
  for (int i = 1; i <= out.tau; ++i) {
    sum += s.g[i - 1] - (i - 1) / out.gamma;
  }
  out.value = sum / out.tau;
  return out;
}

inline double average_lagging(const Schedule& s, const ALParams& params = {}) {
  return average_lagging_breakdown(s, params).value;
}

// Per-target-word delays in source-word units: a source word counts as read
// once its first token is, a target word counts as written once its last
// token is. This is what makes the metric independent of the tokenization.
struct WordDelays {
  std::vector<int> delays;
  int source_words = 0;
  int target_words = 0;

  Schedule as_schedule() const { return Schedule{delays, source_words}; }
};

inline WordDelays project_word_delays(const Schedule& s, const std::vector<int>& src_boundaries,
                                      const std::vector<int>& tgt_boundaries) {
  s.validate();
  if (src_boundaries.empty() || src_boundaries.back() != s.source_len) {
    throw DimensionError("source boundaries do not match the schedule's source length");
  }
  if (tgt_boundaries.empty() || tgt_boundaries.back() != s.target_len()) {
    throw DimensionError("target boundaries do not match the schedule's target length");
  }
  validate_boundaries(src_boundaries, s.source_len);
  validate_boundaries(tgt_boundaries, s.target_len());

  // First token of source word u is one past the previous boundary.
  std::vector<int> word_first;
  word_first.reserve(src_boundaries.size());
  int first = 1;
  for (int b : src_boundaries) {
    word_first.push_back(first);
    first = b + 1;
  }

  WordDelays out;
  out.source_words = static_cast<int>(src_boundaries.size());
  out.target_words = static_cast<int>(tgt_boundaries.size());
  out.delays.reserve(tgt_boundaries.size());
  for (int end : tgt_boundaries) {
    int read = s.g[end - 1];
    auto it = std::upper_bound(word_first.begin(), word_first.end(), read);
    out.delays.push_back(static_cast<int>(it - word_first.begin()));
  }
  return out;
}

inline double word_average_lagging(const Schedule& s, const std::vector<int>& src_boundaries,
                                   const std::vector<int>& tgt_boundaries, const ALParams& params = {}) {
  return average_lagging(project_word_delays(s, src_boundaries, tgt_boundaries).as_schedule(), params);
}

// The wire format for metric reports: token- and word-level AL plus the
// token-level gamma/tau and the convention they were computed under.
struct LatencyReport {
  double token_al = 0.0;
  double word_al = 0.0;
  double gamma = 0.0;
  int tau = 0;
  std::string convention;
};

inline LatencyReport latency_report(const Schedule& s, const std::vector<int>& src_boundaries,
                                    const std::vector<int>& tgt_boundaries, const ALParams& params = {}) {
  LatencyReport report;
  ALBreakdown token = average_lagging_breakdown(s, params);
  report.token_al = token.value;
  report.gamma = token.gamma;
  report.tau = token.tau;
  report.word_al = word_average_lagging(s, src_boundaries, tgt_boundaries, params);
  report.convention = params.describe();
  return report;
}

}  // namespace simt
