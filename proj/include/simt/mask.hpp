#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "simt/errors.hpp"
#include "simt/policy.hpp"
#include "simt/token.hpp"

namespace simt {

// Boolean attention permission matrix: allowed(i, j) means position i may
// attend to position j. Additive -inf masking is up to the consumer.
class AttentionMask {
public:
  AttentionMask(int rows, int cols, bool value = false)
      : rows_(rows), cols_(cols), allow_(static_cast<std::size_t>(rows) * cols, value) {
    if (rows < 1 || cols < 1) throw InvalidParameterError("mask dimensions must be >= 1");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool allowed(int i, int j) const { return allow_[index(i, j)]; }
  void set(int i, int j, bool v) { allow_[index(i, j)] = v; }

  // Entrywise comparison: true when every permission of this mask is also a
  // permission of `other`.
  bool subset_of(const AttentionMask& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (std::size_t p = 0; p < allow_.size(); ++p) {
      if (allow_[p] && !other.allow_[p]) return false;
    }
    return true;
  }

  // The top-left rows x cols corner.
  AttentionMask top_left(int rows, int cols) const {
    AttentionMask out(rows, cols);
    for (int i = 1; i <= rows; ++i) {
      for (int j = 1; j <= cols; ++j) out.set(i, j, allowed(i, j));
    }
    return out;
  }

  // Row-major 0/1 grid, one row per line.
  std::string render() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(rows_) * (cols_ + 1));
    for (int i = 1; i <= rows_; ++i) {
      for (int j = 1; j <= cols_; ++j) out += allowed(i, j) ? '1' : '0';
      out += '\n';
    }
    return out;
  }

  friend bool operator==(const AttentionMask& a, const AttentionMask& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.allow_ == b.allow_;
  }

private:
  std::size_t index(int i, int j) const {
    if (i < 1 || i > rows_ || j < 1 || j > cols_) throw IndexError("mask index out of range");
    return static_cast<std::size_t>(i - 1) * cols_ + (j - 1);
  }

  int rows_;
  int cols_;
  std::vector<bool> allow_;
};

// Unidirectional encoding: each position sees itself and everything before.
inline AttentionMask causal_mask(int n) {
  if (n < 1) throw InvalidParameterError("mask size must be >= 1");
  AttentionMask mask(n, n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= i; ++j) mask.set(i, j, true);
  }
  return mask;
}

// Unidirectional across words, fully bidirectional inside each word: position
// i sees every token up to the end of its own word. Because reads land on
// word boundaries, a single forward pass suffices; the mask for any word
// prefix is the top-left corner of the full one.
inline AttentionMask intra_word_mask(const std::vector<int>& src_boundaries, int n) {
  validate_boundaries(src_boundaries, n);
  AttentionMask mask(n, n);
  int word_end = 0;
  auto next_boundary = src_boundaries.begin();
  for (int i = 1; i <= n; ++i) {
    if (i > word_end) word_end = *next_boundary++;
    for (int j = 1; j <= word_end; ++j) mask.set(i, j, true);
  }
  return mask;
}

// Decoder-to-source permissions under a policy: target position i sees the
// source prefix it had read when written.
inline AttentionMask cross_mask(const Schedule& s) {
  s.validate();
  AttentionMask mask(s.target_len(), s.source_len);
  for (int i = 1; i <= s.target_len(); ++i) {
    for (int j = 1; j <= s.g[i - 1]; ++j) mask.set(i, j, true);
  }
  return mask;
}

}  // namespace simt
