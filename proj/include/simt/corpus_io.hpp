#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "simt/harness.hpp"

namespace simt {

struct CorpusFiles {
  std::string source;
  std::string hypothesis;
  std::string reference;
  std::string alignment;
  std::string transport;  // JSON Lines, one m x n array of arrays per record
  MarkerConvention convention = MarkerConvention::Suffix;
};

// Loads parallel line-oriented files into records. File-level problems
// (missing file, unequal line counts, empty corpus) throw; per-line problems
// are captured on the record so evaluation can continue without --strict.
inline std::vector<CorpusRecord> load_corpus(const CorpusFiles& files) {
  if (files.source.empty()) throw InvalidParameterError("a source file is required");
  std::vector<std::string> source_lines = read_lines(files.source);
  if (source_lines.empty()) throw EmptyCorpusError("corpus is empty: " + files.source);

  auto read_parallel = [&](const std::string& path, const char* role) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.size() != source_lines.size()) {
      throw DimensionError(std::string(role) + " file has " + std::to_string(lines.size()) +
                           " lines, source has " + std::to_string(source_lines.size()));
    }
    return lines;
  };

  std::vector<std::string> hypothesis_lines, reference_lines, alignment_lines, transport_lines;
  if (!files.hypothesis.empty()) hypothesis_lines = read_parallel(files.hypothesis, "hypothesis");
  if (!files.reference.empty()) reference_lines = read_parallel(files.reference, "reference");
  if (!files.alignment.empty()) alignment_lines = read_parallel(files.alignment, "alignment");
  if (!files.transport.empty()) transport_lines = read_parallel(files.transport, "transport");

  std::vector<CorpusRecord> records;
  records.reserve(source_lines.size());
  for (std::size_t r = 0; r < source_lines.size(); ++r) {
    CorpusRecord record;
    record.id = static_cast<int>(r) + 1;
    try {
      record.source = parse_marked(source_lines[r], files.convention);
      if (!hypothesis_lines.empty()) {
        record.hypothesis = parse_marked(hypothesis_lines[r], files.convention);
      }
      if (!reference_lines.empty()) {
        record.reference = parse_marked(reference_lines[r], files.convention);
      }
      if (!alignment_lines.empty()) {
        record.alignment = parse_pharaoh(alignment_lines[r]);
      }
      if (!transport_lines.empty()) {
        nlohmann::json parsed = nlohmann::json::parse(transport_lines[r]);
        record.transport = TransportMatrix::from_rows(parsed.get<std::vector<std::vector<double>>>());
      }
    } catch (const std::exception& e) {
      record.load_error = e.what();
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace simt
