// Command-line front end: policy simulation, conversion, latency metrics,
// attention masks, LM/SiMT word-boundary synchronization, alignment-based
// policy scoring, and latency-quality curve emission.

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simt/corpus_io.hpp"
#include "simt/harness.hpp"
#include "simt/mask.hpp"
#include "simt/serde.hpp"

namespace {

using simt::Json;

std::string format_double(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

simt::MarkerConvention parse_convention(const std::string& name) {
  if (name == "suffix") return simt::MarkerConvention::Suffix;
  if (name == "prefix") return simt::MarkerConvention::Prefix;
  throw simt::InvalidParameterError("unknown marker convention: '" + name + "'");
}

struct CommonOptions {
  std::string marker_convention = "suffix";
  std::string format;
  bool strict = false;
};

void add_marker_option(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--marker-convention", opts.marker_convention, "Word boundary marker placement")
      ->check(CLI::IsMember({"suffix", "prefix"}))
      ->capture_default_str();
}

// Shared record loop: run `body` per record, report failures with their id,
// and fail the whole run under --strict.
template <typename Body>
int for_each_record(const std::vector<simt::CorpusRecord>& records, bool strict, Body&& body) {
  int failures = 0;
  for (const simt::CorpusRecord& record : records) {
    try {
      if (!record.load_error.empty()) throw simt::Error(record.load_error);
      body(record);
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "record " << record.id << ": " << e.what() << "\n";
      if (strict) return 1;
    }
  }
  return failures > 0 && strict ? 1 : 0;
}

int run_simulate(const CommonOptions& opts, const std::string& source, const std::string& target,
                 const std::string& policy_text) {
  simt::PolicySpec policy = simt::parse_policy_spec(policy_text);
  simt::CorpusFiles files;
  files.source = source;
  files.hypothesis = target;
  files.transport = policy.transport_path;
  files.convention = parse_convention(opts.marker_convention);
  auto records = simt::load_corpus(files);

  std::string format = opts.format.empty() ? "text" : opts.format;
  return for_each_record(records, opts.strict, [&](const simt::CorpusRecord& record) {
    simt::StepTrace trace = simt::simulate(record, policy);
    if (format == "json") {
      std::cout << simt::to_json(simt::to_actions(trace)).dump() << "\n";
    } else if (format == "text") {
      if (records.size() > 1) std::cout << "# record " << record.id << "\n";
      std::cout << simt::render_trace(trace);
      if (records.size() > 1) std::cout << "\n";
    } else {
      throw simt::InvalidParameterError("simulate supports --format text|json");
    }
  });
}

int run_convert(const CommonOptions& opts, const std::string& source, const std::string& target,
                const std::string& policy_text) {
  simt::PolicySpec policy = simt::parse_policy_spec(policy_text);
  if (policy.convert || policy.family == simt::PolicySpec::Family::WaitkWord) {
    throw simt::InvalidParameterError("convert expects a token-level policy spec");
  }
  simt::CorpusFiles files;
  files.source = source;
  files.hypothesis = target;
  files.transport = policy.transport_path;
  files.convention = parse_convention(opts.marker_convention);
  auto records = simt::load_corpus(files);

  std::string format = opts.format.empty() ? "json" : opts.format;
  return for_each_record(records, opts.strict, [&](const simt::CorpusRecord& record) {
    const auto& src = *record.source;
    const auto& hyp = *record.hypothesis;
    simt::Schedule base =
        simt::build_schedule(policy, src.size(), hyp.size(), src.boundaries(), hyp.boundaries(),
                             record.transport ? &*record.transport : nullptr);
    simt::ConversionResult conv = simt::to_word_policy(base, src.boundaries(), hyp.boundaries());
    if (format == "json") {
      Json j{{"id", record.id},
             {"token", simt::to_json(base)},
             {"r", Json(conv.refined_read)},
             {"b", Json(conv.word_end)},
             {"w", simt::to_json(conv.word_schedule)}};
      std::cout << j.dump() << "\n";
    } else if (format == "text") {
      auto join = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) s += ' ';
          s += std::to_string(v[i]);
        }
        return s;
      };
      std::cout << "record " << record.id << "\n"
                << "  token: " << join(base.g) << "\n"
                << "  r:     " << join(conv.refined_read) << "\n"
                << "  b:     " << join(conv.word_end) << "\n"
                << "  w:     " << join(conv.word_schedule.g) << "\n";
    } else {
      throw simt::InvalidParameterError("convert supports --format json|text");
    }
  });
}

Json row_to_json(const simt::ResultRow& row, bool with_schedule) {
  Json j{{"id", row.id}};
  if (!row.ok) {
    j["error"] = row.error;
    return j;
  }
  j["token_al"] = row.latency.token_al;
  j["word_al"] = row.latency.word_al;
  j["gamma"] = row.latency.gamma;
  j["tau"] = row.latency.tau;
  if (with_schedule) j["schedule"] = simt::to_json(row.schedule);
  if (row.quality) j["quality"] = simt::to_json(*row.quality);
  return j;
}

int run_latency(const CommonOptions& opts, const std::string& source, const std::string& target,
                const std::string& reference, const std::string& align, const std::string& policy_text,
                int workers, bool align_on_hypothesis) {
  simt::EvalConfig config;
  config.policy = simt::parse_policy_spec(policy_text);
  config.strict = opts.strict;
  config.workers = workers;
  config.align_on_hypothesis = align_on_hypothesis;

  simt::CorpusFiles files;
  files.source = source;
  files.hypothesis = target;
  files.reference = reference;
  files.alignment = align;
  files.transport = config.policy.transport_path;
  files.convention = parse_convention(opts.marker_convention);
  auto records = simt::load_corpus(files);

  simt::EvalResult result = simt::evaluate_corpus(records, config);
  std::string format = opts.format.empty() ? "json" : opts.format;
  if (format == "json") {
    Json rows = Json::array();
    for (const simt::ResultRow& row : result.rows) rows.push_back(row_to_json(row, true));
    Json aggregate{{"records", result.aggregate.records},
                   {"failed", result.aggregate.failed},
                   {"mean_token_al", result.aggregate.mean_token_al},
                   {"mean_word_al", result.aggregate.mean_word_al}};
    if (result.aggregate.quality.total > 0) {
      aggregate["aligned_proportion"] = *result.aggregate.quality.proportion();
    }
    Json doc{{"policy", config.policy.text},
             {"convention", result.aggregate.convention},
             {"records", std::move(rows)},
             {"aggregate", std::move(aggregate)}};
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "id,token_al,word_al,gamma,tau\n";
    for (const simt::ResultRow& row : result.rows) {
      if (!row.ok) {
        std::cout << row.id << ",error,,,\n";
        continue;
      }
      std::cout << row.id << "," << format_double(row.latency.token_al) << ","
                << format_double(row.latency.word_al) << "," << format_double(row.latency.gamma) << ","
                << row.latency.tau << "\n";
    }
    std::cout << "mean," << format_double(result.aggregate.mean_token_al) << ","
              << format_double(result.aggregate.mean_word_al) << ",,\n";
  } else if (format == "text") {
    std::cout << "policy: " << config.policy.text << "\n"
              << "convention: " << result.aggregate.convention << "\n";
    for (const simt::ResultRow& row : result.rows) {
      if (!row.ok) {
        std::cout << "record " << row.id << ": ERROR " << row.error << "\n";
        continue;
      }
      std::cout << "record " << row.id << ": token-AL " << format_double(row.latency.token_al)
                << ", word-AL " << format_double(row.latency.word_al);
      if (row.quality) {
        std::cout << ", aligned " << row.quality->satisfied << "/" << row.quality->total;
      }
      std::cout << "\n";
    }
    std::cout << "mean token-AL " << format_double(result.aggregate.mean_token_al) << ", mean word-AL "
              << format_double(result.aggregate.mean_word_al);
    if (result.aggregate.quality.total > 0) {
      std::cout << ", aligned proportion " << format_double(*result.aggregate.quality.proportion());
    }
    std::cout << "\n";
  } else {
    throw simt::InvalidParameterError("latency supports --format json|csv|text");
  }
  if (result.aggregate.failed > 0) {
    for (const simt::ResultRow& row : result.rows) {
      if (!row.ok) std::cerr << "record " << row.id << ": " << row.error << "\n";
    }
    if (opts.strict) return 1;
  }
  return 0;
}

int run_mask(const CommonOptions& opts, const std::string& kind, int n, const std::string& source,
             const std::string& target, const std::string& policy_text) {
  if (kind != "causal" && kind != "intra-word" && kind != "cross") {
    throw simt::InvalidParameterError("unknown mask kind: '" + kind + "'");
  }
  std::string format = opts.format.empty() ? "text" : opts.format;
  if (format != "text" && format != "json") {
    throw simt::InvalidParameterError("mask supports --format text|json");
  }
  auto emit = [&](const simt::AttentionMask& mask, bool first) {
    if (format == "json") {
      std::cout << simt::to_json(mask).dump() << "\n";
    } else {
      if (!first) std::cout << "\n";
      std::cout << mask.render();
    }
  };

  if (kind == "causal") {
    if (n < 1 && source.empty()) {
      throw simt::InvalidParameterError("causal mask needs --n or --source");
    }
    if (n >= 1) {
      emit(simt::causal_mask(n), true);
      return 0;
    }
  }

  simt::CorpusFiles files;
  files.convention = parse_convention(opts.marker_convention);
  files.source = source;
  simt::PolicySpec policy;
  if (kind == "cross") {
    if (target.empty() || policy_text.empty()) {
      throw simt::InvalidParameterError("cross mask needs --target and --policy");
    }
    policy = simt::parse_policy_spec(policy_text);
    files.hypothesis = target;
    files.transport = policy.transport_path;
  }
  auto records = simt::load_corpus(files);

  bool first = true;
  return for_each_record(records, opts.strict, [&](const simt::CorpusRecord& record) {
    const auto& src = *record.source;
    if (kind == "causal") {
      emit(simt::causal_mask(src.size()), first);
    } else if (kind == "intra-word") {
      emit(simt::intra_word_mask(src.boundaries(), src.size()), first);
    } else {
      const auto& hyp = *record.hypothesis;
      simt::Schedule schedule =
          simt::build_schedule(policy, src.size(), hyp.size(), src.boundaries(), hyp.boundaries(),
                               record.transport ? &*record.transport : nullptr);
      emit(simt::cross_mask(schedule), first);
    }
    first = false;
  });
}

int run_sync(const CommonOptions& opts, const std::string& simt_tokens, const std::string& lm_tokens) {
  simt::MarkerConvention convention = parse_convention(opts.marker_convention);
  auto simt_lines = simt::read_lines(simt_tokens);
  auto lm_lines = simt::read_lines(lm_tokens);
  if (simt_lines.empty()) throw simt::EmptyCorpusError("corpus is empty: " + simt_tokens);
  if (simt_lines.size() != lm_lines.size()) {
    throw simt::DimensionError("token files differ in length: " + std::to_string(simt_lines.size()) +
                               " vs " + std::to_string(lm_lines.size()));
  }

  std::string format = opts.format.empty() ? "json" : opts.format;
  int failures = 0;
  for (std::size_t r = 0; r < simt_lines.size(); ++r) {
    try {
      simt::TokenizedSentence simt_ts = simt::parse_marked(simt_lines[r], convention);
      simt::TokenizedSentence lm_ts = simt::parse_marked(lm_lines[r], convention);
      simt::DualSegmentation dual = simt::align_dual(simt_ts, lm_ts);
      std::vector<int> one_by_one(dual.word_count());
      for (int w = 1; w <= dual.word_count(); ++w) one_by_one[w - 1] = w;
      simt::SyncSchedule sync = simt::sync_schedule(one_by_one, dual);
      if (format == "json") {
        Json j{{"id", static_cast<int>(r) + 1},
               {"segmentation", simt::to_json(dual)},
               {"sync", simt::to_json(sync)}};
        std::cout << j.dump() << "\n";
      } else if (format == "text") {
        std::cout << "record " << (r + 1) << "\n";
        for (const simt::DualWord& w : dual.words) {
          std::cout << "  " << w.surface << "  simt " << w.simt_first << "-" << w.simt_last << "  lm "
                    << w.lm_first << "-" << w.lm_last << "\n";
        }
      } else {
        throw simt::InvalidParameterError("sync supports --format json|text");
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "record " << (r + 1) << ": " << e.what() << "\n";
      if (opts.strict) return 1;
    }
  }
  return failures > 0 && opts.strict ? 1 : 0;
}

int run_align_eval(const CommonOptions& opts, const std::string& source, const std::string& target,
                   const std::string& align, const std::string& policy_text, bool on_hypothesis) {
  simt::EvalConfig config;
  config.policy = simt::parse_policy_spec(policy_text);
  config.strict = opts.strict;
  config.align_on_hypothesis = on_hypothesis;

  simt::CorpusFiles files;
  files.source = source;
  files.alignment = align;
  files.transport = config.policy.transport_path;
  files.convention = parse_convention(opts.marker_convention);
  // The target file is the side the satisfaction rule runs against: the
  // ground-truth reference by default.
  if (on_hypothesis) {
    files.hypothesis = target;
  } else {
    files.reference = target;
  }
  auto records = simt::load_corpus(files);

  simt::EvalResult result = simt::evaluate_corpus(records, config);
  std::string format = opts.format.empty() ? "json" : opts.format;
  if (format == "json") {
    Json rows = Json::array();
    for (const simt::ResultRow& row : result.rows) {
      Json j{{"id", row.id}};
      if (!row.ok) {
        j["error"] = row.error;
      } else if (row.quality) {
        j["quality"] = simt::to_json(*row.quality);
      }
      rows.push_back(std::move(j));
    }
    Json doc{{"policy", config.policy.text},
             {"side", on_hypothesis ? "hypothesis" : "reference"},
             {"records", std::move(rows)},
             {"aggregate", simt::to_json(result.aggregate.quality)}};
    std::cout << doc.dump(2) << "\n";
  } else if (format == "csv") {
    std::cout << "id,satisfied,total\n";
    for (const simt::ResultRow& row : result.rows) {
      if (!row.ok || !row.quality) {
        std::cout << row.id << ",error,\n";
        continue;
      }
      std::cout << row.id << "," << row.quality->satisfied << "," << row.quality->total << "\n";
    }
    std::cout << "all," << result.aggregate.quality.satisfied << "," << result.aggregate.quality.total
              << "\n";
  } else if (format == "text") {
    for (const simt::ResultRow& row : result.rows) {
      if (!row.ok) {
        std::cout << "record " << row.id << ": ERROR " << row.error << "\n";
      } else if (row.quality) {
        std::cout << "record " << row.id << ": " << row.quality->satisfied << "/" << row.quality->total
                  << "\n";
      }
    }
    auto p = result.aggregate.quality.proportion();
    std::cout << "aligned proportion: " << (p ? format_double(*p) : "undefined") << " ("
              << result.aggregate.quality.satisfied << "/" << result.aggregate.quality.total << ")\n";
  } else {
    throw simt::InvalidParameterError("align-eval supports --format json|csv|text");
  }
  if (result.aggregate.failed > 0) {
    for (const simt::ResultRow& row : result.rows) {
      if (!row.ok) std::cerr << "record " << row.id << ": " << row.error << "\n";
    }
    if (opts.strict) return 1;
  }
  return 0;
}

int run_curve(const CommonOptions& opts, const std::string& points_file, int label_col, int latency_col,
              int quality_col) {
  auto lines = simt::read_lines(points_file);
  auto points = simt::parse_curve_points(lines, label_col, latency_col, quality_col);
  std::string format = opts.format.empty() ? "csv" : opts.format;
  std::cout << simt::emit_curve(std::move(points), simt::parse_curve_format(format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word-level simultaneous translation policy toolkit"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string source, target, reference, align, policy, simt_tokens, lm_tokens, mask_kind, points_file;
  int workers = 1;
  int mask_n = 0;
  int label_col = 1, latency_col = 3, quality_col = 4;
  bool on_hypothesis = false;

  auto add_format = [&](CLI::App* cmd, const std::string& choices) {
    cmd->add_option("--format", opts.format, "Output format (" + choices + ")");
  };
  auto add_strict = [&](CLI::App* cmd) {
    cmd->add_flag("--strict", opts.strict, "Stop with exit code 1 on the first record error");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Replay a policy over a corpus as step traces");
  simulate->add_option("--source", source, "Marked source token file")->required();
  simulate->add_option("--target", target, "Marked hypothesis token file")->required();
  simulate->add_option("--policy", policy, "Policy spec, e.g. waitk-word:k=1")->required();
  add_marker_option(simulate, opts);
  add_format(simulate, "text|json");
  add_strict(simulate);

  CLI::App* convert = app.add_subcommand("convert", "Convert a token-level policy to word level");
  convert->add_option("--source", source, "Marked source token file")->required();
  convert->add_option("--target", target, "Marked target token file")->required();
  convert->add_option("--policy", policy, "Token-level policy spec")->required();
  add_marker_option(convert, opts);
  add_format(convert, "json|text");
  add_strict(convert);

  CLI::App* latency = app.add_subcommand("latency", "Token- and word-level Average Lagging over a corpus");
  latency->add_option("--source", source, "Marked source token file")->required();
  latency->add_option("--target", target, "Marked hypothesis token file")->required();
  latency->add_option("--reference", reference, "Marked reference token file (for alignment scoring)");
  latency->add_option("--align", align, "Pharaoh alignment file");
  latency->add_option("--policy", policy, "Policy spec")->required();
  latency->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  latency->add_flag("--align-on-hypothesis", on_hypothesis, "Score alignments on the hypothesis side");
  add_marker_option(latency, opts);
  add_format(latency, "json|csv|text");
  add_strict(latency);

  CLI::App* mask = app.add_subcommand("mask", "Emit attention permission masks as 0/1 grids");
  mask->add_option("--kind", mask_kind, "causal|intra-word|cross")->required();
  mask->add_option("--n", mask_n, "Size for --kind causal without --source");
  mask->add_option("--source", source, "Marked source token file");
  mask->add_option("--target", target, "Marked hypothesis token file (cross)");
  mask->add_option("--policy", policy, "Policy spec (cross)");
  add_marker_option(mask, opts);
  add_format(mask, "text|json");
  add_strict(mask);

  CLI::App* sync = app.add_subcommand("sync", "Align two subword tokenizations at word boundaries");
  sync->add_option("--simt-tokens", simt_tokens, "Marked tokens under the SiMT vocabulary")->required();
  sync->add_option("--lm-tokens", lm_tokens, "Marked tokens under the LM vocabulary")->required();
  add_marker_option(sync, opts);
  add_format(sync, "json|text");
  add_strict(sync);

  CLI::App* align_eval = app.add_subcommand("align-eval", "Proportion of aligned source words read in time");
  align_eval->add_option("--source", source, "Marked source token file")->required();
  align_eval->add_option("--target", target, "Marked target token file (reference by default)")->required();
  align_eval->add_option("--align", align, "Pharaoh alignment file")->required();
  align_eval->add_option("--policy", policy, "Policy spec")->required();
  align_eval->add_flag("--on-hypothesis", on_hypothesis,
                       "Treat the target file as a hypothesis instead of the reference");
  add_marker_option(align_eval, opts);
  add_format(align_eval, "json|csv|text");
  add_strict(align_eval);

  CLI::App* curve = app.add_subcommand("curve", "Sort latency-quality points into curve data");
  curve->add_option("--points", points_file, "Column file of curve points")->required();
  curve->add_option("--label-col", label_col, "1-based label column")->capture_default_str();
  curve->add_option("--latency-col", latency_col, "1-based latency column")->capture_default_str();
  curve->add_option("--quality-col", quality_col, "1-based quality column")->capture_default_str();
  add_format(curve, "csv|json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return run_simulate(opts, source, target, policy);
    if (convert->parsed()) return run_convert(opts, source, target, policy);
    if (latency->parsed()) {
      return run_latency(opts, source, target, reference, align, policy, workers, on_hypothesis);
    }
    if (mask->parsed()) return run_mask(opts, mask_kind, mask_n, source, target, policy);
    if (sync->parsed()) return run_sync(opts, simt_tokens, lm_tokens);
    if (align_eval->parsed()) return run_align_eval(opts, source, target, align, policy, on_hypothesis);
    if (curve->parsed()) return run_curve(opts, points_file, label_col, latency_col, quality_col);
  } catch (const simt::InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
