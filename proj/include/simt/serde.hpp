#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "simt/alignment.hpp"
#include "simt/latency.hpp"
#include "simt/lm_sync.hpp"
#include "simt/mask.hpp"
#include "simt/policy.hpp"

namespace simt {

using Json = nlohmann::ordered_json;

inline Json to_json(const Schedule& s) { return Json(s.g); }

inline Json to_json(const Action& a) {
  return Json{{"action", a.kind == Action::Kind::Read ? "READ" : "WRITE"},
              {"index", a.index},
              {"post_final", a.post_final}};
}

inline Json to_json(const ActionTrace& trace) {
  Json arr = Json::array();
  for (const Action& a : trace) arr.push_back(to_json(a));
  return arr;
}

inline Action action_from_json(const Json& j) {
  Action a;
  std::string kind = j.at("action").get<std::string>();
  if (kind == "READ") {
    a.kind = Action::Kind::Read;
  } else if (kind == "WRITE") {
    a.kind = Action::Kind::Write;
  } else {
    throw InvalidTraceError("unknown action kind: '" + kind + "'");
  }
  a.index = j.at("index").get<int>();
  a.post_final = j.value("post_final", false);
  return a;
}

inline ActionTrace trace_from_json(const Json& j) {
  ActionTrace trace;
  for (const Json& item : j) trace.push_back(action_from_json(item));
  return trace;
}

inline Json to_json(const LatencyReport& r) {
  return Json{{"token_al", r.token_al},
              {"word_al", r.word_al},
              {"gamma", r.gamma},
              {"tau", r.tau},
              {"convention", r.convention}};
}

inline Json to_json(const QualityReport& r) {
  Json j{{"satisfied", r.satisfied}, {"total", r.total}};
  auto p = r.proportion();
  j["proportion"] = p ? Json(*p) : Json(nullptr);
  return j;
}

inline Json to_json(const AttentionMask& mask) {
  Json rows = Json::array();
  for (int i = 1; i <= mask.rows(); ++i) {
    Json row = Json::array();
    for (int j = 1; j <= mask.cols(); ++j) row.push_back(mask.allowed(i, j) ? 1 : 0);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const DualSegmentation& dual) {
  Json words = Json::array();
  for (const DualWord& w : dual.words) {
    words.push_back(Json{{"surface", w.surface},
                         {"simt_span", Json::array({w.simt_first, w.simt_last})},
                         {"lm_span", Json::array({w.lm_first, w.lm_last})}});
  }
  return Json{{"words", std::move(words)}, {"simt_len", dual.simt_len}, {"lm_len", dual.lm_len}};
}

inline Json to_json(const SyncSchedule& sync) {
  Json arr = Json::array();
  for (auto [simt_read, lm_read] : sync.events) arr.push_back(Json::array({simt_read, lm_read}));
  return arr;
}

}  // namespace simt
