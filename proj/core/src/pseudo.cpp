#include "copyloc/pseudo.hpp"

#include <fstream>

#include "json.hpp"

namespace copyloc {

const char* pseudo_source_name(PseudoSource s) {
  switch (s) {
    case PseudoSource::unlabeled: return "unlabeled";
    case PseudoSource::weak_positive: return "weak_positive";
    case PseudoSource::weak_negative: return "weak_negative";
  }
  return "?";
}

PseudoSource parse_pseudo_source(const std::string& name) {
  if (name == "unlabeled") return PseudoSource::unlabeled;
  if (name == "weak_positive") return PseudoSource::weak_positive;
  if (name == "weak_negative") return PseudoSource::weak_negative;
  fail(Errc::bad_argument, "unknown pseudo-label source '" + name + "'");
}

void PseudoLabel::validate() const {
  for (const auto& b : boxes) b.validate();
  if (source == PseudoSource::weak_negative && !boxes.empty())
    fail(Errc::invariant_violation, query_id + "/" + ref_id + ": weak_negative with boxes");
}

PseudoLabel make_pseudo_label(const PredictionRecord& detections, double theta) {
  if (theta < 0.0 || theta > 1.0) fail(Errc::bad_argument, "theta must lie in [0,1]");
  PseudoLabel out;
  out.query_id = detections.query_id;
  out.ref_id = detections.ref_id;
  for (const auto& b : detections.boxes)
    if (b.score >= theta) out.boxes.push_back(b);
  out.source = PseudoSource::unlabeled;
  out.kept = !out.boxes.empty();
  return out;
}

std::vector<PseudoLabel> make_pseudo_labels(const std::vector<PredictionRecord>& detections,
                                            double theta) {
  std::vector<PseudoLabel> out;
  out.reserve(detections.size());
  for (const auto& d : detections) out.push_back(make_pseudo_label(d, theta));
  return out;
}

PseudoLabel weak_label_filter(PseudoLabel pseudo, bool weak) {
  if (!weak) {
    pseudo.boxes.clear();
    pseudo.source = PseudoSource::weak_negative;
    pseudo.kept = true;
    return pseudo;
  }
  pseudo.source = PseudoSource::weak_positive;
  pseudo.kept = !pseudo.boxes.empty();
  return pseudo;
}

SemiExample make_supervised_example(const PairAnnotation& ann,
                                    const std::vector<SegmentBox>& predictions,
                                    std::optional<double> video_prob) {
  SemiExample ex;
  ex.predictions = predictions;
  ex.targets = ann.gt_boxes;
  ex.video_target = ann.is_positive() ? 1.0 : 0.0;
  ex.video_prob = video_prob;
  return ex;
}

SemiExample make_unsupervised_example(const PseudoLabel& pseudo,
                                      const std::vector<SegmentBox>& predictions,
                                      std::optional<double> video_prob) {
  pseudo.validate();
  SemiExample ex;
  ex.video_prob = video_prob;
  if (pseudo.source == PseudoSource::weak_negative) {
    ex.video_target = 0.0;
    ex.segment_term = false;  // confirmed negatives train the video head only
    return ex;
  }
  ex.predictions = predictions;
  ex.targets = pseudo.boxes;  // pseudo boxes stand in for t* with p* = 1
  ex.video_target = 1.0;
  return ex;
}

double example_loss(const SemiExample& ex, double lambda) {
  double l_seg = 0.0;
  if (ex.segment_term) {
    std::vector<SegmentPrediction> preds;
    preds.reserve(ex.predictions.size());
    for (const auto& b : ex.predictions) preds.push_back({b.score, b});
    const std::vector<SegmentTarget> targets = match_boxes(ex.predictions, ex.targets);
    l_seg = segment_loss(preds, targets, lambda);
  }
  const double l_video = ex.video_prob ? bce(*ex.video_prob, ex.video_target) : 0.0;
  return total_loss(l_seg, l_video);
}

SemiBatchLoss assemble_semi_batch(std::span<const SemiExample> supervised,
                                  std::span<const SemiExample> unsupervised, double lambda,
                                  double lambda_u) {
  SemiBatchLoss out;
  for (const auto& ex : supervised) out.supervised += example_loss(ex, lambda);
  for (const auto& ex : unsupervised) out.unsupervised += example_loss(ex, lambda);
  out.combined = semi_total(out.supervised, out.unsupervised, lambda_u);
  return out;
}

std::vector<PseudoLabel> read_pseudo_labels(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(Errc::io_error, "cannot open " + path.string());
  std::vector<PseudoLabel> out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    PseudoLabel rec;
    try {
      const auto j = nlohmann::json::parse(line);
      rec.query_id = j.at("query_id").get<std::string>();
      rec.ref_id = j.at("ref_id").get<std::string>();
      for (const auto& arr : j.at("segments")) {
        SegmentBox b;
        b.ts_q = arr.at(0).get<double>();
        b.te_q = arr.at(1).get<double>();
        b.ts_r = arr.at(2).get<double>();
        b.te_r = arr.at(3).get<double>();
        b.score = arr.size() > 4 ? arr.at(4).get<double>() : 1.0;
        rec.boxes.push_back(b);
      }
      rec.source = parse_pseudo_source(j.at("source").get<std::string>());
      rec.kept = j.at("kept").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::malformed_json, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
    rec.validate();
    out.push_back(std::move(rec));
  }
  return out;
}

void write_pseudo_labels(const std::filesystem::path& path, const std::vector<PseudoLabel>& labels) {
  std::ofstream os(path);
  if (!os) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  for (const auto& l : labels) {
    l.validate();
    nlohmann::json j;
    j["query_id"] = l.query_id;
    j["ref_id"] = l.ref_id;
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& b : l.boxes) segs.push_back({b.ts_q, b.te_q, b.ts_r, b.te_r, b.score});
    j["segments"] = segs;
    j["source"] = pseudo_source_name(l.source);
    j["kept"] = l.kept;
    os << j.dump() << '\n';
  }
}

}  // namespace copyloc
