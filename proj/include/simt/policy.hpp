#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "simt/errors.hpp"
#include "simt/token.hpp"

namespace simt {

// A READ/WRITE policy in prefix form: entry i-1 holds the number of source
// tokens read before target token i is written. Entries are non-decreasing
// and lie in [1, source_len]; at least one token is read before any write.
struct Schedule {
  std::vector<int> g;
  int source_len = 0;

  int target_len() const { return static_cast<int>(g.size()); }

  void validate() const {
    if (source_len < 1) throw InvalidScheduleError("source length must be >= 1");
    if (g.empty()) throw InvalidScheduleError("schedule has no target positions");
    int prev = 1;
    for (int v : g) {
      if (v < 1) throw InvalidScheduleError("schedule reads no source before a write");
      if (v > source_len) {
        throw InvalidScheduleError("schedule value " + std::to_string(v) + " exceeds source length " +
                                   std::to_string(source_len));
      }
      if (v < prev) throw InvalidScheduleError("schedule is not non-decreasing");
      prev = v;
    }
  }
};

inline bool operator==(const Schedule& a, const Schedule& b) {
  return a.source_len == b.source_len && a.g == b.g;
}

// Wait-k at the token level: read k tokens, then alternate single reads and
// writes, capped at the source length.
inline Schedule waitk_token(int k, int n, int m) {
  if (k < 1) throw InvalidParameterError("wait-k requires k >= 1");
  if (n < 1 || m < 1) throw InvalidParameterError("sentence lengths must be >= 1");
  Schedule s;
  s.source_len = n;
  s.g.reserve(m);
  for (int i = 1; i <= m; ++i) s.g.push_back(std::min(k + i - 1, n));
  return s;
}

// Delays each read target until it reaches the nearest source word boundary:
// r_i = min{ j >= g_i : j in B_S }.
inline std::vector<int> word_read_refine(const Schedule& s, const std::vector<int>& src_boundaries) {
  validate_boundaries(src_boundaries, s.source_len);
  std::vector<int> r;
  r.reserve(s.g.size());
  for (int gi : s.g) {
    auto it = std::lower_bound(src_boundaries.begin(), src_boundaries.end(), gi);
    r.push_back(*it);
  }
  return r;
}

// Index of the last token of the target word containing token i:
// b_i = min{ j >= i : j in B_T }.
inline int target_word_end(int i, const std::vector<int>& tgt_boundaries) {
  int m = tgt_boundaries.empty() ? 0 : tgt_boundaries.back();
  if (i < 1 || i > m) {
    throw IndexError("target token index " + std::to_string(i) + " out of range [1, " +
                     std::to_string(m) + "]");
  }
  auto it = std::lower_bound(tgt_boundaries.begin(), tgt_boundaries.end(), i);
  return *it;
}

struct ConversionResult {
  std::vector<int> refined_read;    // r: reads delayed to source word boundaries
  std::vector<int> word_end;        // b: enclosing target word's last token
  Schedule word_schedule;           // w: the full word-level policy
};

// Token-to-word policy conversion. The word schedule takes the refined read
// value at each target word's first token and holds it across the word, so
// writes always compose entire words.
inline ConversionResult to_word_policy(const Schedule& s, const std::vector<int>& src_boundaries,
                                       const std::vector<int>& tgt_boundaries) {
  s.validate();
  int m = s.target_len();
  validate_boundaries(tgt_boundaries, m);

  ConversionResult out;
  out.refined_read = word_read_refine(s, src_boundaries);
  out.word_end.reserve(m);
  for (int i = 1; i <= m; ++i) out.word_end.push_back(target_word_end(i, tgt_boundaries));

  out.word_schedule.source_len = s.source_len;
  out.word_schedule.g.reserve(m);
  for (int i = 1; i <= m; ++i) {
    bool starts_word = i == 1 || out.word_end[i - 2] != out.word_end[i - 1];
    out.word_schedule.g.push_back(starts_word ? out.refined_read[i - 1] : out.word_schedule.g[i - 2]);
  }
  return out;
}

// Wait-k in word units: target word t waits for the first min(k+t-1, W_src)
// source words, expanded so every token of word t reads through the last
// token of that source word.
inline Schedule waitk_word(int k, const std::vector<int>& src_boundaries,
                           const std::vector<int>& tgt_boundaries) {
  if (k < 1) throw InvalidParameterError("wait-k requires k >= 1");
  int n = src_boundaries.empty() ? 0 : src_boundaries.back();
  int m = tgt_boundaries.empty() ? 0 : tgt_boundaries.back();
  validate_boundaries(src_boundaries, n);
  validate_boundaries(tgt_boundaries, m);
  int src_words = static_cast<int>(src_boundaries.size());

  Schedule s;
  s.source_len = n;
  s.g.reserve(m);
  int t = 1;
  for (int i = 1; i <= m; ++i) {
    int delay_words = std::min(k + t - 1, src_words);
    s.g.push_back(src_boundaries[delay_words - 1]);
    if (i == tgt_boundaries[t - 1]) ++t;  // token i closes target word t
  }
  return s;
}

inline Schedule waitk_word(int k, const TokenizedSentence& src, const std::vector<int>& tgt_boundaries) {
  return waitk_word(k, src.boundaries(), tgt_boundaries);
}

// Ablation policies over a base token schedule (WW/TW/WT) or a plain k-token
// alternation (TkTk).
enum class AblationKind {
  WW,    // word-level READ and WRITE: the full conversion
  TW,    // token-level READ, word-level WRITE
  WT,    // word-level READ, token-level WRITE
  TkTk,  // read k tokens, write k tokens, ignore word boundaries
};

inline AblationKind parse_ablation_kind(std::string_view name) {
  if (name == "ww") return AblationKind::WW;
  if (name == "tw") return AblationKind::TW;
  if (name == "wt") return AblationKind::WT;
  if (name == "tktk") return AblationKind::TkTk;
  throw InvalidParameterError("unknown ablation kind: '" + std::string(name) + "'");
}

inline Schedule tktk_policy(int k, int n, int m) {
  if (k < 1) throw InvalidParameterError("tktk requires k >= 1");
  if (n < 1 || m < 1) throw InvalidParameterError("sentence lengths must be >= 1");
  Schedule s;
  s.source_len = n;
  s.g.reserve(m);
  for (int i = 1; i <= m; ++i) s.g.push_back(std::min(k * ((i + k - 1) / k), n));
  return s;
}

struct AblationParams {
  int k = 0;                    // TkTk block size
  int n = 0;                    // TkTk source length
  int m = 0;                    // TkTk target length
  const Schedule* base = nullptr;             // WW/TW/WT base token schedule
  const std::vector<int>* src_boundaries = nullptr;
  const std::vector<int>* tgt_boundaries = nullptr;
};

inline Schedule ablation_policy(AblationKind kind, const AblationParams& p) {
  switch (kind) {
    case AblationKind::TkTk:
      return tktk_policy(p.k, p.n, p.m);
    case AblationKind::WW: {
      if (!p.base || !p.src_boundaries || !p.tgt_boundaries)
        throw InvalidParameterError("ww needs a base schedule and both boundary sets");
      return to_word_policy(*p.base, *p.src_boundaries, *p.tgt_boundaries).word_schedule;
    }
    case AblationKind::TW: {
      // Word-level WRITE grouping applied to the raw reads: the base value at
      // each target word's first token, held across the word.
      if (!p.base || !p.tgt_boundaries)
        throw InvalidParameterError("tw needs a base schedule and target boundaries");
      p.base->validate();
      int m = p.base->target_len();
      validate_boundaries(*p.tgt_boundaries, m);
      Schedule s;
      s.source_len = p.base->source_len;
      s.g.reserve(m);
      for (int i = 1; i <= m; ++i) {
        bool starts_word = i == 1 || target_word_end(i - 1, *p.tgt_boundaries) !=
                                         target_word_end(i, *p.tgt_boundaries);
        s.g.push_back(starts_word ? p.base->g[i - 1] : s.g[i - 2]);
      }
      return s;
    }
    case AblationKind::WT: {
      if (!p.base || !p.src_boundaries)
        throw InvalidParameterError("wt needs a base schedule and source boundaries");
      p.base->validate();
      Schedule s;
      s.source_len = p.base->source_len;
      s.g = word_read_refine(*p.base, *p.src_boundaries);
      return s;
    }
  }
  throw InvalidParameterError("unknown ablation kind");
}

// Information-transport weights from each source token to each target token.
// Rows are (sub-)distributions: non-negative, summing to at most 1.
class TransportMatrix {
public:
  TransportMatrix(int rows, int cols) : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {
    if (rows < 1 || cols < 1) throw InvalidParameterError("transport matrix must be non-empty");
  }

  static TransportMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw InvalidParameterError("transport matrix must be non-empty");
    TransportMatrix t(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 1; i <= t.rows_; ++i) {
      const auto& row = rows[i - 1];
      if (static_cast<int>(row.size()) != t.cols_) throw DimensionError("ragged transport matrix rows");
      double sum = 0.0;
      for (int j = 1; j <= t.cols_; ++j) {
        if (row[j - 1] < 0.0) throw InvalidParameterError("negative transport weight");
        t.set(i, j, row[j - 1]);
        sum += row[j - 1];
      }
      if (sum <= 0.0 || sum > 1.0 + 1e-6) {
        throw InvalidParameterError("transport row sum " + std::to_string(sum) + " outside (0, 1]");
      }
    }
    return t;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double at(int i, int j) const { return values_[index(i, j)]; }
  void set(int i, int j, double v) { values_[index(i, j)] = v; }

private:
  std::size_t index(int i, int j) const {
    if (i < 1 || i > rows_ || j < 1 || j > cols_) throw IndexError("transport matrix index out of range");
    return static_cast<std::size_t>(i - 1) * cols_ + (j - 1);
  }

  int rows_;
  int cols_;
  std::vector<double> values_;
};

// Comparison slack for accumulated transport mass; keeps exact-threshold rows
// (e.g. uniform weights) from spilling over on rounding.
inline constexpr double kTransportEps = 1e-9;

// Writes target token i once the accumulated source mass reaches delta:
// g_i = min{ j : sum_{l<=j} T[i,l] >= delta }, falling back to a full read
// when the row never gets there. Monotonicity is then enforced.
inline Schedule itst_required_counts(const TransportMatrix& t, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidParameterError("itst delta must lie in (0, 1)");
  Schedule s;
  s.source_len = t.cols();
  s.g.reserve(t.rows());
  for (int i = 1; i <= t.rows(); ++i) {
    int required = t.cols();
    double cum = 0.0;
    for (int j = 1; j <= t.cols(); ++j) {
      cum += t.at(i, j);
      if (cum >= delta - kTransportEps) {
        required = j;
        break;
      }
    }
    if (!s.g.empty()) required = std::max(required, s.g.back());
    s.g.push_back(required);
  }
  return s;
}

// Word-level ITST conversion: the required count at each target word's first
// token is lifted to the enclosing source word boundary and held across the
// word, with monotonicity enforced across words.
inline Schedule itst_word_policy(const Schedule& s, const std::vector<int>& src_boundaries,
                                 const std::vector<int>& tgt_boundaries) {
  s.validate();
  int m = s.target_len();
  validate_boundaries(src_boundaries, s.source_len);
  validate_boundaries(tgt_boundaries, m);

  Schedule out;
  out.source_len = s.source_len;
  out.g.resize(m);
  int first = 1;
  int prev = 1;
  for (int b : tgt_boundaries) {
    auto it = std::lower_bound(src_boundaries.begin(), src_boundaries.end(), s.g[first - 1]);
    int required = std::max(*it, prev);
    for (int i = first; i <= b; ++i) out.g[i - 1] = required;
    prev = required;
    first = b + 1;
  }
  return out;
}

// A schedule unrolled into the explicit event stream. Source tokens that were
// never needed for a write still appear as trailing reads, flagged post-final
// so latency code can ignore them.
struct Action {
  enum class Kind { Read, Write };
  Kind kind = Kind::Read;
  int index = 0;
  bool post_final = false;
};

inline bool operator==(const Action& a, const Action& b) {
  return a.kind == b.kind && a.index == b.index && a.post_final == b.post_final;
}

using ActionTrace = std::vector<Action>;

inline ActionTrace schedule_to_actions(const Schedule& s) {
  s.validate();
  ActionTrace trace;
  trace.reserve(s.source_len + s.target_len());
  int read = 0;
  for (int i = 1; i <= s.target_len(); ++i) {
    while (read < s.g[i - 1]) trace.push_back({Action::Kind::Read, ++read, false});
    trace.push_back({Action::Kind::Write, i, false});
  }
  while (read < s.source_len) trace.push_back({Action::Kind::Read, ++read, true});
  return trace;
}

inline Schedule actions_to_schedule(const ActionTrace& trace) {
  std::size_t last_write = trace.size();
  for (std::size_t p = 0; p < trace.size(); ++p) {
    if (trace[p].kind == Action::Kind::Write) last_write = p;
  }
  if (last_write == trace.size()) throw InvalidTraceError("trace contains no writes");

  Schedule s;
  int read = 0;
  int written = 0;
  for (std::size_t p = 0; p < trace.size(); ++p) {
    const Action& a = trace[p];
    if (a.kind == Action::Kind::Read) {
      if (a.index != read + 1) throw InvalidTraceError("reads must cover source tokens in order");
      if (a.post_final != (p > last_write)) {
        throw InvalidTraceError("post-final flag must mark exactly the reads after the last write");
      }
      ++read;
    } else {
      if (a.index != written + 1) throw InvalidTraceError("writes must cover target tokens in order");
      if (read == 0) throw InvalidTraceError("write before any read");
      s.g.push_back(read);
      ++written;
    }
  }
  s.source_len = read;
  s.validate();
  return s;
}

}  // namespace simt
