#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simt/errors.hpp"

namespace simt {

// The word-boundary marker used by sentencepiece-style subword encodings
// (U+2581, LOWER ONE EIGHTH BLOCK).
inline constexpr std::string_view kBoundaryMarker = "\xE2\x96\x81";

// How the marker is attached to tokens in input files. Under the suffix
// convention a token ending with the marker closes a word; under the prefix
// convention a token starting with the marker opens a new word. Internally
// everything is kept in the suffix (end-of-word) representation.
enum class MarkerConvention { Suffix, Prefix };

struct Token {
  std::string text;  // marker stripped, never empty
  bool word_final = false;
};

inline bool operator==(const Token& a, const Token& b) {
  return a.text == b.text && a.word_final == b.word_final;
}

// Inclusive [first, last] token range of one word, 1-based.
struct WordSpan {
  int word_index = 0;
  int first = 0;
  int last = 0;
};

inline bool operator==(const WordSpan& a, const WordSpan& b) {
  return a.word_index == b.word_index && a.first == b.first && a.last == b.last;
}

// A subword token sequence plus the recovered word boundaries. Token and word
// indices are 1-based everywhere in the public interface. `boundaries()` is
// the sorted set of indices of word-final tokens; it always contains the
// sentence length, so words tile the sentence.
class TokenizedSentence {
public:
  TokenizedSentence() = default;

  // Validates the token sequence and derives the boundary set. The last token
  // is forced word-final; `final_forced` records whether that changed it.
  explicit TokenizedSentence(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
    if (tokens_.empty()) throw EmptyInputError("empty token sequence");
    for (const Token& t : tokens_) {
      if (t.text.empty()) throw MalformedTokenError("token with empty text");
    }
    if (!tokens_.back().word_final) {
      tokens_.back().word_final = true;
      final_forced_ = true;
    }
    for (int j = 1; j <= size(); ++j) {
      if (tokens_[j - 1].word_final) boundaries_.push_back(j);
    }
  }

  int size() const { return static_cast<int>(tokens_.size()); }
  int word_count() const { return static_cast<int>(boundaries_.size()); }
  const std::vector<Token>& tokens() const { return tokens_; }
  const Token& token(int j) const { return tokens_[check_index(j) - 1]; }
  const std::vector<int>& boundaries() const { return boundaries_; }

  // True when the input's last token lacked an explicit end-of-word marker.
  bool final_forced() const { return final_forced_; }

  std::vector<WordSpan> word_spans() const {
    std::vector<WordSpan> spans;
    spans.reserve(boundaries_.size());
    int first = 1;
    for (int k = 0; k < word_count(); ++k) {
      spans.push_back({k + 1, first, boundaries_[k]});
      first = boundaries_[k] + 1;
    }
    return spans;
  }

  // Word containing token j.
  int word_index_of(int j) const {
    check_index(j);
    auto it = std::lower_bound(boundaries_.begin(), boundaries_.end(), j);
    return static_cast<int>(it - boundaries_.begin()) + 1;
  }

  int word_first_token(int word_index) const {
    check_word_index(word_index);
    return word_index == 1 ? 1 : boundaries_[word_index - 2] + 1;
  }

  int word_last_token(int word_index) const {
    check_word_index(word_index);
    return boundaries_[word_index - 1];
  }

  // Concatenated token text of one word, markers already stripped.
  std::string word_surface(int word_index) const {
    std::string out;
    for (int j = word_first_token(word_index); j <= word_last_token(word_index); ++j) {
      out += tokens_[j - 1].text;
    }
    return out;
  }

  // Plain text: token texts concatenated, one space after each word-final
  // token except the last.
  std::string detokenize() const {
    std::string out;
    for (int j = 1; j <= size(); ++j) {
      out += tokens_[j - 1].text;
      if (tokens_[j - 1].word_final && j != size()) out += ' ';
    }
    return out;
  }

  std::string detokenize_prefix(int token_count) const {
    if (token_count < 0 || token_count > size()) {
      throw IndexError("prefix length " + std::to_string(token_count) + " out of range");
    }
    std::string out;
    for (int j = 1; j <= token_count; ++j) {
      out += tokens_[j - 1].text;
      if (tokens_[j - 1].word_final && j != token_count) out += ' ';
    }
    return out;
  }

  // Space-joined marked tokens under the requested convention.
  std::string to_marked(MarkerConvention convention = MarkerConvention::Suffix) const {
    std::string out;
    for (int j = 1; j <= size(); ++j) {
      if (j > 1) out += ' ';
      const Token& t = tokens_[j - 1];
      if (convention == MarkerConvention::Suffix) {
        out += t.text;
        if (t.word_final) out += kBoundaryMarker;
      } else {
        bool starts_word = j == 1 || tokens_[j - 2].word_final;
        if (starts_word) out += kBoundaryMarker;
        out += t.text;
      }
    }
    return out;
  }

  friend bool operator==(const TokenizedSentence& a, const TokenizedSentence& b) {
    return a.tokens_ == b.tokens_;
  }

private:
  int check_index(int j) const {
    if (j < 1 || j > size()) {
      throw IndexError("token index " + std::to_string(j) + " out of range [1, " +
                       std::to_string(size()) + "]");
    }
    return j;
  }

  void check_word_index(int k) const {
    if (k < 1 || k > word_count()) {
      throw IndexError("word index " + std::to_string(k) + " out of range [1, " +
                       std::to_string(word_count()) + "]");
    }
  }

  std::vector<Token> tokens_;
  std::vector<int> boundaries_;
  bool final_forced_ = false;
};

namespace detail {

inline bool starts_with_marker(std::string_view s) {
  return s.substr(0, kBoundaryMarker.size()) == kBoundaryMarker;
}

inline bool ends_with_marker(std::string_view s) {
  return s.size() >= kBoundaryMarker.size() &&
         s.substr(s.size() - kBoundaryMarker.size()) == kBoundaryMarker;
}

}  // namespace detail

// Parses one whitespace-separated line of marked subword tokens. Prefix-marked
// input is converted to the internal suffix representation: a token opening a
// new word means the previous token was word-final.
inline TokenizedSentence parse_marked(std::string_view line, MarkerConvention convention) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> raw;
  for (std::string piece; in >> piece;) raw.push_back(std::move(piece));
  if (raw.empty()) throw EmptyInputError("empty input line");

  std::vector<Token> tokens;
  tokens.reserve(raw.size());
  if (convention == MarkerConvention::Suffix) {
    for (const std::string& piece : raw) {
      Token t;
      t.word_final = detail::ends_with_marker(piece);
      t.text = t.word_final ? piece.substr(0, piece.size() - kBoundaryMarker.size()) : piece;
      if (t.text.empty()) throw MalformedTokenError("token is only a boundary marker: '" + piece + "'");
      tokens.push_back(std::move(t));
    }
  } else {
    for (const std::string& piece : raw) {
      Token t;
      bool starts_word = detail::starts_with_marker(piece);
      t.text = starts_word ? piece.substr(kBoundaryMarker.size()) : piece;
      if (t.text.empty()) throw MalformedTokenError("token is only a boundary marker: '" + piece + "'");
      if (starts_word && !tokens.empty()) tokens.back().word_final = true;
      tokens.push_back(std::move(t));
    }
    tokens.back().word_final = true;
  }
  return TokenizedSentence(std::move(tokens));
}

// Checks that `boundaries` is a well-formed word-boundary set for a sentence
// of n tokens: strictly increasing, 1-based, and closing the last word at n.
inline void validate_boundaries(const std::vector<int>& boundaries, int n) {
  if (boundaries.empty()) throw BoundaryError("boundary set is empty");
  int prev = 0;
  for (int b : boundaries) {
    if (b <= prev) throw BoundaryError("boundary set is not strictly increasing");
    if (b > n) throw BoundaryError("boundary " + std::to_string(b) + " exceeds length " + std::to_string(n));
    prev = b;
  }
  if (boundaries.back() != n) {
    throw BoundaryError("boundary set does not close the sentence at " + std::to_string(n));
  }
}

}  // namespace simt
