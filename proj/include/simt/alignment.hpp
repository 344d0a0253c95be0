#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simt/errors.hpp"
#include "simt/policy.hpp"
#include "simt/token.hpp"

namespace simt {

// Word-level source-target alignment pairs, 1-based and deduplicated.
struct AlignmentSet {
  std::vector<std::pair<int, int>> pairs;

  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

inline bool operator==(const AlignmentSet& a, const AlignmentSet& b) { return a.pairs == b.pairs; }

// Parses one pharaoh line: whitespace-separated "i-j" pairs, 0-based on disk.
// Errors carry the 1-based character column of the offending pair.
inline AlignmentSet parse_pharaoh(std::string_view line) {
  AlignmentSet out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size()) break;
    std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    std::string_view pair = line.substr(start, pos - start);

    auto fail = [&]() -> AlignmentSet {
      throw ParseError("malformed alignment pair '" + std::string(pair) + "' at column " +
                       std::to_string(start + 1));
    };
    std::size_t dash = pair.find('-');
    if (dash == std::string_view::npos || dash == 0 || dash + 1 >= pair.size()) return fail();
    int values[2] = {0, 0};
    std::string_view fields[2] = {pair.substr(0, dash), pair.substr(dash + 1)};
    for (int f = 0; f < 2; ++f) {
      for (char c : fields[f]) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
        values[f] = values[f] * 10 + (c - '0');
      }
    }
    out.pairs.emplace_back(values[0] + 1, values[1] + 1);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  out.pairs.erase(std::unique(out.pairs.begin(), out.pairs.end()), out.pairs.end());
  return out;
}

// Counts of alignment pairs whose source word was fully read in time.
struct QualityReport {
  long satisfied = 0;
  long total = 0;

  std::optional<double> proportion() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(satisfied) / static_cast<double>(total);
  }
};

// A pair (s, t) counts as satisfied when the last token of source word s is
// read before the first token of target word t is written.
inline QualityReport aligned_read_proportion(const Schedule& g, const std::vector<int>& src_boundaries,
                                             const std::vector<int>& tgt_boundaries,
                                             const AlignmentSet& alignment) {
  g.validate();
  validate_boundaries(src_boundaries, g.source_len);
  validate_boundaries(tgt_boundaries, g.target_len());
  int src_words = static_cast<int>(src_boundaries.size());
  int tgt_words = static_cast<int>(tgt_boundaries.size());

  QualityReport report;
  for (auto [s, t] : alignment.pairs) {
    if (s < 1 || s > src_words || t < 1 || t > tgt_words) {
      throw IndexError("alignment pair (" + std::to_string(s) + ", " + std::to_string(t) +
                       ") outside word counts " + std::to_string(src_words) + "x" +
                       std::to_string(tgt_words));
    }
    int source_last = src_boundaries[s - 1];
    int target_first = t == 1 ? 1 : tgt_boundaries[t - 2] + 1;
    ++report.total;
    if (source_last <= g.g[target_first - 1]) ++report.satisfied;
  }
  return report;
}

// Micro-average: pair counts summed over sentences, so zero-pair sentences
// contribute nothing.
inline QualityReport corpus_quality(const std::vector<QualityReport>& reports) {
  QualityReport out;
  for (const QualityReport& r : reports) {
    out.satisfied += r.satisfied;
    out.total += r.total;
  }
  return out;
}

}  // namespace simt
