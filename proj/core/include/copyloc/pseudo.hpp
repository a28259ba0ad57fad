#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copyloc/annotation.hpp"
#include "copyloc/losses.hpp"

namespace copyloc {

inline constexpr double kDefaultPseudoTheta = 0.6;

enum class PseudoSource { unlabeled, weak_positive, weak_negative };

const char* pseudo_source_name(PseudoSource s);
PseudoSource parse_pseudo_source(const std::string& name);

// Confidence-filtered detections on an unlabeled or weakly labeled pair.
// A weak_negative entry has no boxes and kept=true marks it a confirmed
// negative (it still trains the video head toward y*=0).
struct PseudoLabel {
  std::string query_id;
  std::string ref_id;
  std::vector<SegmentBox> boxes;
  PseudoSource source = PseudoSource::unlabeled;
  bool kept = false;

  void validate() const;
};

// Keeps boxes with score >= theta; a pair with no survivors is dropped
// (kept=false) unless weak-label filtering later overrides that.
PseudoLabel make_pseudo_label(const PredictionRecord& detections, double theta);
std::vector<PseudoLabel> make_pseudo_labels(const std::vector<PredictionRecord>& detections,
                                            double theta = kDefaultPseudoTheta);

// Applies video-level weak supervision: weak=false discards all boxes and
// confirms the pair negative; weak=true keeps box-bearing pairs and drops
// empty ones.
PseudoLabel weak_label_filter(PseudoLabel pseudo, bool weak);

// Loss inputs for one pair: current detections scored against targets
// (ground truth or kept pseudo boxes). Weak negatives carry no segment
// targets and contribute only the video-level term.
struct SemiExample {
  std::vector<SegmentBox> predictions;
  std::vector<SegmentBox> targets;
  double video_target = 1.0;
  std::optional<double> video_prob;
  bool segment_term = true;
};

SemiExample make_supervised_example(const PairAnnotation& ann,
                                    const std::vector<SegmentBox>& predictions,
                                    std::optional<double> video_prob = std::nullopt);
SemiExample make_unsupervised_example(const PseudoLabel& pseudo,
                                      const std::vector<SegmentBox>& predictions,
                                      std::optional<double> video_prob = std::nullopt);

// Eq-style combined objective for one example: greedy-matched segment
// loss plus video BCE when a probability is available.
double example_loss(const SemiExample& ex, double lambda = kDefaultLambdaReg);

struct SemiBatchLoss {
  double supervised = 0.0;
  double unsupervised = 0.0;
  double combined = 0.0;
};

SemiBatchLoss assemble_semi_batch(std::span<const SemiExample> supervised,
                                  std::span<const SemiExample> unsupervised,
                                  double lambda = kDefaultLambdaReg,
                                  double lambda_u = kDefaultLambdaU);

// Prediction JSONL schema plus "source" and "kept" fields.
std::vector<PseudoLabel> read_pseudo_labels(const std::filesystem::path& path);
void write_pseudo_labels(const std::filesystem::path& path, const std::vector<PseudoLabel>& labels);

}  // namespace copyloc
