#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "simt/alignment.hpp"
#include "simt/errors.hpp"
#include "simt/latency.hpp"
#include "simt/policy.hpp"
#include "simt/token.hpp"

namespace simt {

// ---------------------------------------------------------------------------
// Policy specification mini-language
//
//   waitk-token:k=3
//   waitk-word:k=1
//   convert:waitk-token:k=1          (word-level conversion of a token policy)
//   convert:itst:delta=0.6,transport=FILE
//   ablation:ww:k=1   ablation:tw:k=3   ablation:wt:k=3   ablation:tktk:k=2
//   itst:delta=0.6,transport=FILE
// ---------------------------------------------------------------------------

struct PolicySpec {
  enum class Family { WaitkToken, WaitkWord, TkTk, Itst, AblationWW, AblationTW, AblationWT };

  Family family = Family::WaitkToken;
  bool convert = false;  // word-level conversion wrapped around a token policy
  int k = 0;
  double delta = 0.0;
  std::string transport_path;
  std::string text;  // the original spec string, echoed in reports

  bool needs_transport() const { return family == Family::Itst; }
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct PolicyParams {
  std::optional<int> k;
  std::optional<double> delta;
  std::optional<std::string> transport;
};

inline PolicyParams parse_policy_params(std::string_view text, std::string_view spec) {
  PolicyParams params;
  for (const std::string& item : split(text, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw InvalidParameterError("bad policy parameter '" + item + "' in '" + std::string(spec) + "'");
    }
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    try {
      if (key == "k") {
        params.k = std::stoi(value);
      } else if (key == "delta") {
        params.delta = std::stod(value);
      } else if (key == "transport") {
        params.transport = value;
      } else {
        throw InvalidParameterError("unknown policy parameter '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw InvalidParameterError("bad value for '" + key + "' in '" + std::string(spec) + "'");
    } catch (const std::out_of_range&) {
      throw InvalidParameterError("bad value for '" + key + "' in '" + std::string(spec) + "'");
    }
  }
  return params;
}

}  // namespace detail

inline PolicySpec parse_policy_spec(std::string_view text) {
  PolicySpec spec;
  spec.text = std::string(text);
  std::vector<std::string> parts = detail::split(text, ':');
  std::size_t at = 0;
  auto need = [&](std::size_t extra) {
    if (parts.size() != at + extra) throw InvalidParameterError("bad policy spec: '" + spec.text + "'");
  };

  if (parts[at] == "convert") {
    spec.convert = true;
    ++at;
    if (at >= parts.size()) throw InvalidParameterError("bad policy spec: '" + spec.text + "'");
  }

  detail::PolicyParams params;
  const std::string& head = parts[at];
  if (head == "waitk-token" || head == "waitk-word" || head == "itst" || head == "tktk") {
    need(2);
    params = detail::parse_policy_params(parts[at + 1], text);
    if (head == "waitk-token") spec.family = PolicySpec::Family::WaitkToken;
    if (head == "waitk-word") spec.family = PolicySpec::Family::WaitkWord;
    if (head == "itst") spec.family = PolicySpec::Family::Itst;
    if (head == "tktk") spec.family = PolicySpec::Family::TkTk;
  } else if (head == "ablation") {
    need(3);
    AblationKind kind = parse_ablation_kind(parts[at + 1]);
    params = detail::parse_policy_params(parts[at + 2], text);
    switch (kind) {
      case AblationKind::WW: spec.family = PolicySpec::Family::AblationWW; break;
      case AblationKind::TW: spec.family = PolicySpec::Family::AblationTW; break;
      case AblationKind::WT: spec.family = PolicySpec::Family::AblationWT; break;
      case AblationKind::TkTk: spec.family = PolicySpec::Family::TkTk; break;
    }
  } else {
    throw InvalidParameterError("unknown policy kind: '" + head + "'");
  }

  if (spec.convert && (spec.family == PolicySpec::Family::WaitkWord ||
                       spec.family == PolicySpec::Family::AblationWW ||
                       spec.family == PolicySpec::Family::AblationTW ||
                       spec.family == PolicySpec::Family::AblationWT)) {
    throw InvalidParameterError("'convert:' only wraps token-level policies: '" + spec.text + "'");
  }

  if (spec.family == PolicySpec::Family::Itst) {
    if (!params.delta) throw InvalidParameterError("itst needs delta: '" + spec.text + "'");
    spec.delta = *params.delta;
    if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
      throw InvalidParameterError("itst delta must lie in (0, 1): '" + spec.text + "'");
    }
    if (params.transport) spec.transport_path = *params.transport;
  } else {
    if (!params.k) throw InvalidParameterError("policy needs k: '" + spec.text + "'");
    spec.k = *params.k;
    if (spec.k < 1) throw InvalidParameterError("k must be >= 1: '" + spec.text + "'");
  }
  return spec;
}

// Builds the full schedule for a known target length. The transport matrix is
// only consulted for itst policies.
inline Schedule build_schedule(const PolicySpec& spec, int n, int m, const std::vector<int>& src_boundaries,
                               const std::vector<int>& tgt_boundaries,
                               const TransportMatrix* transport = nullptr) {
  auto token_base = [&]() -> Schedule {
    switch (spec.family) {
      case PolicySpec::Family::WaitkToken:
      case PolicySpec::Family::AblationWW:
      case PolicySpec::Family::AblationTW:
      case PolicySpec::Family::AblationWT:
        return waitk_token(spec.k, n, m);
      case PolicySpec::Family::TkTk:
        return tktk_policy(spec.k, n, m);
      case PolicySpec::Family::Itst: {
        if (!transport) throw InvalidParameterError("itst policy needs a transport matrix");
        if (transport->rows() != m || transport->cols() != n) {
          throw DimensionError("transport matrix is " + std::to_string(transport->rows()) + "x" +
                               std::to_string(transport->cols()) + ", expected " + std::to_string(m) +
                               "x" + std::to_string(n));
        }
        return itst_required_counts(*transport, spec.delta);
      }
      case PolicySpec::Family::WaitkWord:
        throw InvalidParameterError("waitk-word has no token-level base");
    }
    throw InvalidParameterError("unknown policy family");
  };

  switch (spec.family) {
    case PolicySpec::Family::WaitkWord:
      return waitk_word(spec.k, src_boundaries, tgt_boundaries);
    case PolicySpec::Family::AblationWW:
    case PolicySpec::Family::AblationTW:
    case PolicySpec::Family::AblationWT: {
      Schedule base = token_base();
      AblationParams params;
      params.base = &base;
      params.src_boundaries = &src_boundaries;
      params.tgt_boundaries = &tgt_boundaries;
      AblationKind kind = spec.family == PolicySpec::Family::AblationWW   ? AblationKind::WW
                          : spec.family == PolicySpec::Family::AblationTW ? AblationKind::TW
                                                                          : AblationKind::WT;
      return ablation_policy(kind, params);
    }
    default: {
      Schedule base = token_base();
      if (!spec.convert) return base;
      if (spec.family == PolicySpec::Family::Itst) {
        return itst_word_policy(base, src_boundaries, tgt_boundaries);
      }
      return to_word_policy(base, src_boundaries, tgt_boundaries).word_schedule;
    }
  }
}

// ---------------------------------------------------------------------------
// Corpus records and simulation
// ---------------------------------------------------------------------------

struct CorpusRecord {
  int id = 0;
  std::optional<TokenizedSentence> source;
  std::optional<TokenizedSentence> hypothesis;
  std::optional<TokenizedSentence> reference;
  std::optional<AlignmentSet> alignment;
  std::optional<TransportMatrix> transport;
  std::string load_error;  // non-empty when ingestion failed for this record
};

// Stands in for the trained model's next-token distribution: given the
// current source prefix size and the tokens emitted so far, produce the next
// target token, or nothing at end of sentence.
using WriterOracle = std::function<std::optional<Token>(int source_tokens_read, const std::vector<Token>& emitted)>;

struct SimulateOptions {
  // Hard cap on oracle output; defaults to 4x the source token count.
  std::optional<int> max_target_len;
};

struct TraceStep {
  int step = 0;              // cumulative source tokens read
  int source_words = 0;      // completed source words at this prefix
  std::vector<int> written;  // target token indices written at this step
};

struct StepTrace {
  TokenizedSentence source;
  TokenizedSentence target;
  Schedule schedule;
  std::vector<TraceStep> steps;

  // Target token indices written at source prefix `step`, empty when none.
  const std::vector<int>* written_at(int step) const {
    for (const TraceStep& s : steps) {
      if (s.step == step) return &s.written;
    }
    return nullptr;
  }
};

inline ActionTrace to_actions(const StepTrace& trace) { return schedule_to_actions(trace.schedule); }

namespace detail {

// Incremental policy evaluation for oracle-driven simulation: the read
// requirement for target token i, decided online as word boundaries of the
// hypothesis become known.
class RequirementEngine {
public:
  RequirementEngine(const PolicySpec& spec, int n, const std::vector<int>& src_boundaries,
                    const TransportMatrix* transport)
      : spec_(spec), n_(n), src_boundaries_(src_boundaries), transport_(transport) {
    validate_boundaries(src_boundaries_, n_);
    if (spec_.needs_transport() && !transport_) {
      throw InvalidParameterError("itst policy needs a transport matrix");
    }
  }

  // i: next target token index; starts_word: whether it opens a new target
  // word; t: index of the target word it belongs to.
  int required(int i, bool starts_word, int t) {
    int req;
    switch (spec_.family) {
      case PolicySpec::Family::WaitkWord: {
        int words = std::min(spec_.k + t - 1, static_cast<int>(src_boundaries_.size()));
        req = src_boundaries_[words - 1];
        break;
      }
      case PolicySpec::Family::AblationWW:
        req = starts_word ? refine(token_base(i)) : prev_;
        break;
      case PolicySpec::Family::AblationTW:
        req = starts_word ? token_base(i) : prev_;
        break;
      case PolicySpec::Family::AblationWT:
        req = refine(token_base(i));
        break;
      default:
        if (spec_.convert) {
          req = starts_word ? refine(token_base(i)) : prev_;
        } else {
          req = token_base(i);
        }
        break;
    }
    req = std::max(req, prev_);
    prev_ = req;
    return req;
  }

private:
  int token_base(int i) const {
    switch (spec_.family) {
      case PolicySpec::Family::WaitkToken:
      case PolicySpec::Family::AblationWW:
      case PolicySpec::Family::AblationTW:
      case PolicySpec::Family::AblationWT:
        return std::min(spec_.k + i - 1, n_);
      case PolicySpec::Family::TkTk:
        return std::min(spec_.k * ((i + spec_.k - 1) / spec_.k), n_);
      case PolicySpec::Family::Itst: {
        // Positions past the supplied transport rows never accumulate mass,
        // so the threshold forces a full read. The oracle typically ends the
        // sentence at the first such position.
        if (i > transport_->rows()) return n_;
        double cum = 0.0;
        for (int j = 1; j <= n_; ++j) {
          cum += transport_->at(i, j);
          if (cum >= spec_.delta - kTransportEps) return j;
        }
        return n_;
      }
      case PolicySpec::Family::WaitkWord:
        break;
    }
    throw InvalidParameterError("policy has no token-level base");
  }

  int refine(int g) const {
    auto it = std::lower_bound(src_boundaries_.begin(), src_boundaries_.end(), g);
    return *it;
  }

  const PolicySpec& spec_;
  int n_;
  const std::vector<int>& src_boundaries_;
  const TransportMatrix* transport_;
  int prev_ = 1;
};

inline StepTrace unroll(TokenizedSentence source, TokenizedSentence target, Schedule schedule) {
  schedule.validate();
  StepTrace trace;
  trace.schedule = std::move(schedule);
  trace.source = std::move(source);
  trace.target = std::move(target);
  const auto& boundaries = trace.source.boundaries();
  trace.steps.reserve(trace.source.size());
  int completed_words = 0;
  int next = 1;  // next target token to place
  for (int s = 1; s <= trace.source.size(); ++s) {
    if (std::binary_search(boundaries.begin(), boundaries.end(), s)) ++completed_words;
    TraceStep step;
    step.step = s;
    step.source_words = completed_words;
    while (next <= trace.schedule.target_len() && trace.schedule.g[next - 1] == s) {
      step.written.push_back(next++);
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

}  // namespace detail

// Runs one record under a policy. With a known hypothesis the schedule is
// built directly; with a writer oracle the target is generated token by token
// while the policy decides how much source each write may see.
inline StepTrace simulate(const CorpusRecord& record, const PolicySpec& spec,
                          const WriterOracle* oracle = nullptr, const SimulateOptions& options = {}) {
  if (!record.source) throw InvalidParameterError("record has no source sentence");
  const TokenizedSentence& source = *record.source;
  const TransportMatrix* transport = record.transport ? &*record.transport : nullptr;

  if (!oracle) {
    if (!record.hypothesis) {
      throw InvalidParameterError("simulate needs a hypothesis or a writer oracle");
    }
    const TokenizedSentence& target = *record.hypothesis;
    Schedule schedule = build_schedule(spec, source.size(), target.size(), source.boundaries(),
                                       target.boundaries(), transport);
    if (schedule.target_len() != target.size()) {
      throw DimensionError("schedule length " + std::to_string(schedule.target_len()) +
                           " does not match hypothesis length " + std::to_string(target.size()));
    }
    return detail::unroll(source, target, std::move(schedule));
  }

  int max_len = options.max_target_len.value_or(4 * source.size());
  detail::RequirementEngine engine(spec, source.size(), source.boundaries(), transport);

  std::vector<Token> emitted;
  Schedule schedule;
  schedule.source_len = source.size();
  int word_index = 0;
  bool starts_word = true;
  while (true) {
    int i = static_cast<int>(emitted.size()) + 1;
    if (starts_word) ++word_index;
    int required = engine.required(i, starts_word, word_index);
    std::optional<Token> next = (*oracle)(required, emitted);
    if (!next) break;
    if (next->text.empty()) throw MalformedTokenError("oracle produced a token with empty text");
    if (i > max_len) {
      throw OracleRunawayError("oracle exceeded the maximum target length of " + std::to_string(max_len));
    }
    schedule.g.push_back(required);
    starts_word = next->word_final;
    emitted.push_back(std::move(*next));
  }
  if (emitted.empty()) throw EmptyInputError("oracle produced no target tokens");
  return detail::unroll(source, TokenizedSentence(std::move(emitted)), std::move(schedule));
}

// Renders a step trace as a fixed-width table: one row per source token, the
// streaming input prefix, and the tokens written at that step.
inline std::string render_trace(const StepTrace& trace) {
  std::vector<std::array<std::string, 3>> rows;
  rows.push_back({"Step", "Streaming Input", "Output"});
  for (const TraceStep& step : trace.steps) {
    std::string prefix;
    for (int j = 1; j <= step.step; ++j) {
      if (j > 1) prefix += ' ';
      const Token& t = trace.source.token(j);
      prefix += t.text;
      if (t.word_final) prefix += kBoundaryMarker;
    }
    std::string output;
    for (std::size_t p = 0; p < step.written.size(); ++p) {
      if (p > 0) output += ' ';
      const Token& t = trace.target.token(step.written[p]);
      output += t.text;
      if (t.word_final) output += kBoundaryMarker;
    }
    rows.push_back({std::to_string(step.step), std::move(prefix), std::move(output)});
  }

  // Pad by codepoint count so the multibyte boundary marker lines up.
  auto display_width = [](const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) w += (c & 0xC0) != 0x80;
    return w;
  };
  std::array<std::size_t, 3> width = {0, 0, 0};
  for (const auto& row : rows) {
    for (int c = 0; c < 3; ++c) width[c] = std::max(width[c], display_width(row[c]));
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < 3; ++c) {
      out += rows[r][c];
      if (c < 2) out.append(width[c] - display_width(rows[r][c]) + 2, ' ');
    }
    out += '\n';
    if (r == 0) {
      out.append(width[0] + width[1] + width[2] + 4, '-');
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus evaluation
// ---------------------------------------------------------------------------

struct EvalConfig {
  PolicySpec policy;
  ALParams al;
  bool strict = false;
  int workers = 1;
  bool align_on_hypothesis = false;  // default scores alignments on the reference side
};

struct ResultRow {
  int id = 0;
  bool ok = false;
  std::string error;
  LatencyReport latency;
  Schedule schedule;
  std::optional<QualityReport> quality;
};

struct EvalAggregate {
  int records = 0;
  int failed = 0;
  double mean_token_al = 0.0;
  double mean_word_al = 0.0;
  QualityReport quality;  // micro-aggregated; total == 0 when no alignments
  std::string convention;
};

struct EvalResult {
  std::vector<ResultRow> rows;
  EvalAggregate aggregate;
};

namespace detail {

inline ResultRow evaluate_record(const CorpusRecord& record, const EvalConfig& config) {
  ResultRow row;
  row.id = record.id;
  try {
    if (!record.load_error.empty()) throw Error(record.load_error);
    if (!record.source) throw InvalidParameterError("record has no source sentence");
    const TokenizedSentence& source = *record.source;
    const TokenizedSentence* target =
        record.hypothesis ? &*record.hypothesis : (record.reference ? &*record.reference : nullptr);
    if (!target) throw InvalidParameterError("record has no target sentence");
    const TransportMatrix* transport = record.transport ? &*record.transport : nullptr;

    row.schedule = build_schedule(config.policy, source.size(), target->size(), source.boundaries(),
                                  target->boundaries(), transport);
    row.latency = latency_report(row.schedule, source.boundaries(), target->boundaries(), config.al);

    if (record.alignment) {
      const TokenizedSentence* gt = config.align_on_hypothesis
                                        ? (record.hypothesis ? &*record.hypothesis : nullptr)
                                        : (record.reference ? &*record.reference : nullptr);
      if (!gt) {
        throw InvalidParameterError(config.align_on_hypothesis
                                        ? "alignment scoring on the hypothesis needs a hypothesis"
                                        : "alignment scoring needs a reference");
      }
      Schedule gt_schedule = row.schedule;
      if (gt != target) {
        gt_schedule = build_schedule(config.policy, source.size(), gt->size(), source.boundaries(),
                                     gt->boundaries(), transport);
      }
      row.quality =
          aligned_read_proportion(gt_schedule, source.boundaries(), gt->boundaries(), *record.alignment);
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace detail

// Evaluates every record under one policy. Records are independent, so they
// may be processed by several workers; results are merged in input order and
// the output is identical for any worker count.
inline EvalResult evaluate_corpus(const std::vector<CorpusRecord>& records, const EvalConfig& config) {
  if (records.empty()) throw EmptyCorpusError("corpus is empty");
  int workers = std::max(1, config.workers);

  EvalResult result;
  result.rows.resize(records.size());
  if (workers == 1) {
    for (std::size_t r = 0; r < records.size(); ++r) {
      result.rows[r] = detail::evaluate_record(records[r], config);
    }
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (records.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      std::size_t begin = w * chunk;
      std::size_t end = std::min(records.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end]() {
        for (std::size_t r = begin; r < end; ++r) {
          result.rows[r] = detail::evaluate_record(records[r], config);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }

  EvalAggregate& agg = result.aggregate;
  agg.convention = config.al.describe();
  std::vector<QualityReport> qualities;
  double token_sum = 0.0;
  double word_sum = 0.0;
  int scored = 0;
  for (const ResultRow& row : result.rows) {
    ++agg.records;
    if (!row.ok) {
      ++agg.failed;
      if (config.strict) {
        throw Error("record " + std::to_string(row.id) + ": " + row.error);
      }
      continue;
    }
    token_sum += row.latency.token_al;
    word_sum += row.latency.word_al;
    ++scored;
    if (row.quality) qualities.push_back(*row.quality);
  }
  if (scored > 0) {
    agg.mean_token_al = token_sum / scored;
    agg.mean_word_al = word_sum / scored;
  }
  agg.quality = corpus_quality(qualities);
  return result;
}

// ---------------------------------------------------------------------------
// Line-oriented file input
// ---------------------------------------------------------------------------

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// ---------------------------------------------------------------------------
// Curve emission
// ---------------------------------------------------------------------------

// A (latency, quality) point with an opaque label. Values are echoed exactly
// as ingested; this toolkit never computes quality scores.
struct CurvePoint {
  std::string label;
  std::string latency_text;
  std::string quality_text;
  double latency = 0.0;
};

enum class CurveFormat { Csv, Json };

inline CurveFormat parse_curve_format(std::string_view name) {
  if (name == "csv") return CurveFormat::Csv;
  if (name == "json") return CurveFormat::Json;
  throw InvalidParameterError("unknown curve format: '" + std::string(name) + "'");
}

// Reads whitespace-separated columns; '&' and '\' are treated as separators
// so table rows can be pasted directly. Lines starting with '#' are skipped.
inline std::vector<CurvePoint> parse_curve_points(const std::vector<std::string>& lines, int label_col,
                                                  int latency_col, int quality_col) {
  std::vector<CurvePoint> points;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string cleaned = lines[ln];
    for (char& c : cleaned) {
      if (c == '&' || c == '\\') c = ' ';
    }
    std::istringstream in(cleaned);
    std::vector<std::string> fields;
    for (std::string f; in >> f;) fields.push_back(std::move(f));
    if (fields.empty() || fields.front().front() == '#') continue;

    int needed = std::max(label_col, std::max(latency_col, quality_col));
    if (static_cast<int>(fields.size()) < needed) {
      throw ParseError("line " + std::to_string(ln + 1) + ": expected at least " +
                       std::to_string(needed) + " columns, found " + std::to_string(fields.size()));
    }
    CurvePoint p;
    p.label = fields[label_col - 1];
    p.latency_text = fields[latency_col - 1];
    p.quality_text = fields[quality_col - 1];
    auto parse_number = [&](const std::string& text, const char* role) {
      try {
        std::size_t used = 0;
        double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(ln + 1) + ": " + role + " '" + text +
                         "' is not numeric");
      }
    };
    p.latency = parse_number(p.latency_text, "latency");
    parse_number(p.quality_text, "quality");
    points.push_back(std::move(p));
  }
  return points;
}

inline std::string emit_curve(std::vector<CurvePoint> points, CurveFormat format) {
  std::stable_sort(points.begin(), points.end(),
                   [](const CurvePoint& a, const CurvePoint& b) { return a.latency < b.latency; });
  std::string out;
  if (format == CurveFormat::Csv) {
    out = "label,latency,quality\n";
    for (const CurvePoint& p : points) {
      out += p.label + "," + p.latency_text + "," + p.quality_text + "\n";
    }
  } else {
    // Values are emitted as-is so the numbers stay byte-identical to the
    // ingested table; only the label needs escaping.
    auto escape = [](const std::string& s) {
      std::string e;
      for (char c : s) {
        if (c == '"' || c == '\\') e += '\\';
        e += c;
      }
      return e;
    };
    out = "[";
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (i > 0) out += ",";
      out += "{\"label\":\"" + escape(points[i].label) + "\",\"latency\":" + points[i].latency_text +
             ",\"quality\":" + points[i].quality_text + "}";
    }
    out += "]\n";
  }
  return out;
}

}  // namespace simt
