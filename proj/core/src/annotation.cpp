#include "copyloc/annotation.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace copyloc {

using nlohmann::json;

void SegmentBox::validate() const {
  const bool finite = std::isfinite(ts_q) && std::isfinite(te_q) && std::isfinite(ts_r) &&
                      std::isfinite(te_r) && std::isfinite(score);
  if (!finite) fail(Errc::nonfinite_value, "segment box has non-finite coordinate");
  if (ts_q < 0.0 || ts_r < 0.0) fail(Errc::invariant_violation, "segment box starts before 0");
  if (!(ts_q < te_q) || !(ts_r < te_r))
    fail(Errc::invariant_violation, "segment box needs ts < te on both axes");
  if (score < 0.0 || score > 1.0)
    fail(Errc::invariant_violation, "segment score " + std::to_string(score) + " outside [0,1]");
}

bool operator==(const SegmentBox& a, const SegmentBox& b) {
  return a.ts_q == b.ts_q && a.te_q == b.te_q && a.ts_r == b.ts_r && a.te_r == b.te_r &&
         a.score == b.score;
}

void PairAnnotation::validate() const {
  if (query_id.empty() || ref_id.empty())
    fail(Errc::invariant_violation, "pair annotation missing video id");
  for (const auto& b : gt_boxes) b.validate();
  if (weak_label.has_value() && !*weak_label && !gt_boxes.empty())
    fail(Errc::invariant_violation,
         query_id + "/" + ref_id + ": weak_label=false with ground-truth segments");
}

namespace {

SegmentBox box_from_array(const json& arr, bool with_score, int line_no) {
  if (!arr.is_array() || arr.size() < 4 || arr.size() > 5)
    fail(Errc::malformed_json, "line " + std::to_string(line_no) + ": segment is not a 4/5-tuple");
  SegmentBox b;
  b.ts_q = arr[0].get<double>();
  b.te_q = arr[1].get<double>();
  b.ts_r = arr[2].get<double>();
  b.te_r = arr[3].get<double>();
  b.score = (with_score && arr.size() == 5) ? arr[4].get<double>() : 1.0;
  return b;
}

json box_to_array(const SegmentBox& b, bool with_score) {
  json arr = json::array({b.ts_q, b.te_q, b.ts_r, b.te_r});
  if (with_score) arr.push_back(b.score);
  return arr;
}

template <typename Record>
std::vector<Record> read_jsonl(const std::filesystem::path& path, bool with_score) {
  std::ifstream is(path);
  if (!is) fail(Errc::io_error, "cannot open " + path.string());
  std::vector<Record> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(Errc::malformed_json, "line " + std::to_string(line_no) + ": " + e.what());
    }
    Record rec;
    try {
      rec.query_id = j.at("query_id").get<std::string>();
      rec.ref_id = j.at("ref_id").get<std::string>();
      if (j.contains("segments")) {
        for (const auto& arr : j["segments"]) {
          if constexpr (std::is_same_v<Record, PairAnnotation>)
            rec.gt_boxes.push_back(box_from_array(arr, with_score, line_no));
          else
            rec.boxes.push_back(box_from_array(arr, with_score, line_no));
        }
      }
      if constexpr (std::is_same_v<Record, PairAnnotation>) {
        if (j.contains("weak_label") && !j["weak_label"].is_null())
          rec.weak_label = j["weak_label"].get<bool>();
        if (j.contains("groups"))
          rec.group_tags = j["groups"].get<std::vector<std::string>>();
      }
    } catch (const json::exception& e) {
      fail(Errc::malformed_json, "line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      if constexpr (std::is_same_v<Record, PairAnnotation>) {
        rec.validate();
      } else {
        for (const auto& b : rec.boxes) b.validate();
      }
    } catch (const Error& e) {
      fail(Errc::invariant_violation, "line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<PairAnnotation> read_annotations(const std::filesystem::path& path) {
  return read_jsonl<PairAnnotation>(path, /*with_score=*/false);
}

void write_annotations(const std::filesystem::path& path, const std::vector<PairAnnotation>& anns) {
  std::ofstream os(path);
  if (!os) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  for (const auto& a : anns) {
    a.validate();
    json j;
    j["query_id"] = a.query_id;
    j["ref_id"] = a.ref_id;
    json segs = json::array();
    for (const auto& b : a.gt_boxes) segs.push_back(box_to_array(b, false));
    j["segments"] = segs;
    if (a.weak_label.has_value()) j["weak_label"] = *a.weak_label;
    if (!a.group_tags.empty()) j["groups"] = a.group_tags;
    os << j.dump() << '\n';
  }
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  return read_jsonl<PredictionRecord>(path, /*with_score=*/true);
}

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& preds) {
  std::ofstream os(path);
  if (!os) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  for (const auto& p : preds) {
    json j;
    j["query_id"] = p.query_id;
    j["ref_id"] = p.ref_id;
    json segs = json::array();
    for (const auto& b : p.boxes) segs.push_back(box_to_array(b, true));
    j["segments"] = segs;
    os << j.dump() << '\n';
  }
}

}  // namespace copyloc
