#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "simt/errors.hpp"
#include "simt/token.hpp"

namespace simt {

// One surface word as seen by two different subword vocabularies.
struct DualWord {
  std::string surface;
  int simt_first = 0;
  int simt_last = 0;
  int lm_first = 0;
  int lm_last = 0;
};

// Word-by-word correspondence between a sentence encoded with the SiMT
// model's vocabulary and the same sentence encoded with the LM's vocabulary.
struct DualSegmentation {
  std::vector<DualWord> words;
  int simt_len = 0;
  int lm_len = 0;

  int word_count() const { return static_cast<int>(words.size()); }
};

// Aligns the two tokenizations at word boundaries. Word counts must agree and
// every word's detokenized surface must match byte for byte, with no
// normalization; anything else is reported as a vocabulary mismatch.
inline DualSegmentation align_dual(const TokenizedSentence& simt_ts, const TokenizedSentence& lm_ts) {
  if (simt_ts.word_count() != lm_ts.word_count()) {
    throw VocabularyAlignmentError(
        "word counts differ: " + std::to_string(simt_ts.word_count()) + " vs " +
        std::to_string(lm_ts.word_count()) + " (first mismatch at word " +
        std::to_string(std::min(simt_ts.word_count(), lm_ts.word_count()) + 1) + ")");
  }
  DualSegmentation out;
  out.simt_len = simt_ts.size();
  out.lm_len = lm_ts.size();
  auto simt_spans = simt_ts.word_spans();
  auto lm_spans = lm_ts.word_spans();
  for (int w = 1; w <= simt_ts.word_count(); ++w) {
    std::string simt_surface = simt_ts.word_surface(w);
    std::string lm_surface = lm_ts.word_surface(w);
    if (simt_surface != lm_surface) {
      throw VocabularyAlignmentError("word " + std::to_string(w) + " surfaces differ: '" +
                                     simt_surface + "' vs '" + lm_surface + "'");
    }
    out.words.push_back({std::move(simt_surface), simt_spans[w - 1].first, simt_spans[w - 1].last,
                         lm_spans[w - 1].first, lm_spans[w - 1].last});
  }
  return out;
}

// Cumulative (SiMT tokens, LM tokens) consumed after each word-level read
// event. Both counts strictly increase.
struct SyncSchedule {
  std::vector<std::pair<int, int>> events;
};

inline bool operator==(const SyncSchedule& a, const SyncSchedule& b) { return a.events == b.events; }

// Turns a word-unit read schedule (cumulative word counts, non-decreasing;
// repeats collapse into one event) into the paired token horizons that keep
// both models on an equal input prefix.
inline SyncSchedule sync_schedule(const std::vector<int>& words_read, const DualSegmentation& dual) {
  SyncSchedule out;
  int prev = 0;
  for (int w : words_read) {
    if (w < 1 || w > dual.word_count()) {
      throw IndexError("word count " + std::to_string(w) + " out of range [1, " +
                       std::to_string(dual.word_count()) + "]");
    }
    if (w < prev) throw IndexError("word-read events must be non-decreasing");
    if (w == prev) continue;
    const DualWord& word = dual.words[w - 1];
    out.events.emplace_back(word.simt_last, word.lm_last);
    prev = w;
  }
  return out;
}

// Cross-attention horizon into the LM after `words_read` words: the last LM
// token of that word, zero before anything is read.
inline int lm_attend_limit(int words_read, const DualSegmentation& dual) {
  if (words_read < 0 || words_read > dual.word_count()) {
    throw IndexError("word count " + std::to_string(words_read) + " out of range [0, " +
                     std::to_string(dual.word_count()) + "]");
  }
  return words_read == 0 ? 0 : dual.words[words_read - 1].lm_last;
}

}  // namespace simt
