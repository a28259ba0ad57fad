// copyloc: batch pipeline for copied-segment localization on feature
// sequences. Subcommands cover synthetic data generation, attention
// enhancement, similarity matrices, detection, evaluation, pseudo
// labeling and the attention scaling bench.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "copyloc/align.hpp"
#include "copyloc/bench.hpp"
#include "copyloc/copyloc.hpp"
#include "copyloc/rng.hpp"
#include "json.hpp"
#include "pipeline.hpp"

using namespace copyloc;
using copyloc::cli::pair_stem;
namespace fs = std::filesystem;

namespace {

struct GenArgs {
  std::string out;
  std::size_t pairs = 10;
  std::uint64_t seed = 0;
  std::size_t len_q = 60;
  std::size_t len_r = 80;
  std::size_t dim = kDefaultFeatureDim;
  std::size_t copies = 1;
  double dur_min = 15.0;
  double dur_max = 25.0;
  double sigma = 0.05;
  double speed = 1.0;
  bool reversed = false;
  double negative_frac = 0.0;
  std::string preset = "none";  // none | hard
};

std::uint64_t pair_seed(std::uint64_t base, std::size_t index) {
  return base * 1000003ULL + index;
}

int run_gen(const GenArgs& a) {
  if (a.dur_min < 1.0 || a.dur_max < a.dur_min) fail(Errc::bad_argument, "bad duration range");
  const fs::path out(a.out);
  const fs::path feat_dir = out / "features";
  fs::create_directories(feat_dir);

  std::vector<PairAnnotation> annotations;
  nlohmann::json manifest;
  manifest["global_seed"] = a.seed;
  manifest["pairs"] = nlohmann::json::array();

  std::size_t negatives_planned = 0;
  for (std::size_t i = 0; i < a.pairs; ++i) {
    char qid[32], rid[32];
    std::snprintf(qid, sizeof qid, "q%04zu", i);
    std::snprintf(rid, sizeof rid, "r%04zu", i);

    PairSpec spec;
    spec.query_id = qid;
    spec.ref_id = rid;
    spec.len_q = a.len_q;
    spec.len_r = a.len_r;
    spec.dim = a.dim;

    const bool negative =
        static_cast<std::size_t>((i + 1) * a.negative_frac) >
        static_cast<std::size_t>(i * a.negative_frac);
    if (negative) ++negatives_planned;

    const std::uint64_t seed = pair_seed(a.seed, i);
    Rng plan_rng(seed ^ 0xabcdefULL);
    if (!negative) {
      for (std::size_t c = 0; c < a.copies; ++c) {
        CopySpec copy;
        copy.duration = a.dur_min + std::floor(plan_rng.uniform() * (a.dur_max - a.dur_min + 1.0));
        copy.sigma = a.sigma;
        if (a.preset == "hard") {
          switch (i % 3) {
            case 0: copy.reversed = true; break;
            case 1: copy.speed = 2.0; break;
            default: copy.speed = 0.5; break;
          }
        } else {
          copy.speed = a.speed;
          copy.reversed = a.reversed;
        }
        if (copy.duration * copy.speed > static_cast<double>(a.len_r) / 2) {
          copy.duration = std::floor(static_cast<double>(a.len_r) / (2 * copy.speed));
        }
        spec.copies.push_back(copy);
      }
    }

    const GeneratedPair gp = gen_pair(seed, spec);
    write_features(cli::feature_path(feat_dir, gp.query.video_id), gp.query);
    write_features(cli::feature_path(feat_dir, gp.ref.video_id), gp.ref);
    annotations.push_back(gp.annotation);

    nlohmann::json jp;
    jp["seed"] = seed;
    jp["query_id"] = spec.query_id;
    jp["ref_id"] = spec.ref_id;
    jp["len_q"] = spec.len_q;
    jp["len_r"] = spec.len_r;
    jp["dim"] = spec.dim;
    jp["copies"] = nlohmann::json::array();
    for (const auto& c : spec.copies)
      jp["copies"].push_back({{"duration", c.duration},
                              {"speed", c.speed},
                              {"reversed", c.reversed},
                              {"sigma", c.sigma}});
    manifest["pairs"].push_back(jp);
  }

  write_annotations(out / "annotations.jsonl", annotations);
  std::ofstream ms(out / "manifest.json");
  ms << manifest.dump(2) << '\n';
  std::cout << "generated " << a.pairs << " pairs (" << negatives_planned << " negative) under "
            << out.string() << "\n";
  return 0;
}

struct AttnArgs {
  std::string features, pairs, weights, out;
  std::string kernel = "linear";
  std::string video_scores;
  std::size_t max_len = kDefaultMaxFrames;
  bool truncate = false;
  unsigned jobs = 0;
};

int run_attn(const AttnArgs& a) {
  const auto anns = read_annotations(a.pairs);
  const AttentionWeights weights = read_weights(a.weights);
  const AttnKernel kernel = parse_kernel(a.kernel);
  const cli::FeatureReader features{a.features, {a.max_len, a.truncate}};
  fs::create_directories(a.out);

  struct Row {
    std::string query_id, ref_id;
    double score;
  };
  std::vector<Row> scores(anns.size());
  cli::parallel_for_ordered(anns.size(), a.jobs ? a.jobs : cli::default_jobs(), [&](std::size_t i) {
    const auto& ann = anns[i];
    const FeatureSequence q = features.load(ann.query_id);
    const FeatureSequence r = features.load(ann.ref_id);
    const PairEnhancement enhanced = enhance_sequences(q, r, weights, kernel);

    const std::string stem = pair_stem(ann.query_id, ann.ref_id);
    FeatureSequence out_q{stem + ".query", false, enhanced.query_frames};
    FeatureSequence out_r{stem + ".ref", false, enhanced.ref_frames};
    write_features(fs::path(a.out) / (stem + ".query.vcf"), out_q);
    write_features(fs::path(a.out) / (stem + ".ref.vcf"), out_r);
    scores[i] = {ann.query_id, ann.ref_id, enhanced.video_score};
  });

  if (!a.video_scores.empty()) {
    std::ofstream os(a.video_scores);
    for (const auto& row : scores) {
      nlohmann::json j{{"query_id", row.query_id}, {"ref_id", row.ref_id}, {"score", row.score}};
      os << j.dump() << '\n';
    }
  }
  std::cout << "enhanced " << anns.size() << " pairs -> " << a.out << "\n";
  return 0;
}

struct SimmatArgs {
  std::string features, pairs, out;
  std::string enhanced;  // directory of attn output; overrides features
  double tau = kDefaultTau;
  std::string resize = "640x640";
  bool no_resize = false;
  bool raw = false;
  bool softmax_after_resize = false;
  bool export_pgm = false;
  std::size_t max_len = kDefaultMaxFrames;
  bool truncate = false;
  unsigned jobs = 0;
};

std::pair<std::size_t, std::size_t> parse_resize(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) fail(Errc::bad_argument, "--resize expects HxW, got '" + text + "'");
  const long h = std::strtol(text.substr(0, x).c_str(), nullptr, 10);
  const long w = std::strtol(text.substr(x + 1).c_str(), nullptr, 10);
  if (h < 1 || w < 1) fail(Errc::bad_argument, "--resize expects positive HxW");
  return {static_cast<std::size_t>(h), static_cast<std::size_t>(w)};
}

int run_simmat(const SimmatArgs& a) {
  const auto anns = read_annotations(a.pairs);
  fs::create_directories(a.out);
  const auto target = a.no_resize ? std::pair<std::size_t, std::size_t>{0, 0} : parse_resize(a.resize);
  const cli::FeatureReader features{a.features, {a.max_len, a.truncate}};

  cli::parallel_for_ordered(anns.size(), a.jobs ? a.jobs : cli::default_jobs(), [&](std::size_t i) {
    const auto& ann = anns[i];
    const std::string stem = pair_stem(ann.query_id, ann.ref_id);

    Mat q_frames, r_frames;
    if (!a.enhanced.empty()) {
      q_frames = read_features(fs::path(a.enhanced) / (stem + ".query.vcf"),
                               {a.max_len, a.truncate}).frames;
      r_frames = read_features(fs::path(a.enhanced) / (stem + ".ref.vcf"),
                               {a.max_len, a.truncate}).frames;
    } else {
      q_frames = features.load(ann.query_id).frames;
      r_frames = features.load(ann.ref_id).frames;
    }

    SimMatrix sim = cosine_matrix(q_frames, r_frames, a.tau);
    if (!a.raw && !a.softmax_after_resize) sim = dual_softmax(sim);
    if (!a.no_resize) sim = resize_bilinear(sim, target.first, target.second);
    if (!a.raw && a.softmax_after_resize) sim = dual_softmax(sim);

    write_sim_matrix(fs::path(a.out) / (stem + ".vcs"), sim);
    if (a.export_pgm) write_pgm(fs::path(a.out) / (stem + ".pgm"), sim);
  });
  std::cout << "wrote " << anns.size() << " similarity matrices -> " << a.out << "\n";
  return 0;
}

struct DetectArgs {
  std::string sims, pairs, out;
  std::string method = "cc";
  std::vector<std::string> params;
  unsigned jobs = 0;
};

int run_detect(const DetectArgs& a) {
  const auto anns = read_annotations(a.pairs);
  const AlignMethod method = parse_method(a.method);
  DetectorParams params;
  for (const auto& kv : a.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) fail(Errc::bad_argument, "--param expects key=value, got '" + kv + "'");
    params.set(kv.substr(0, eq), std::strtod(kv.substr(eq + 1).c_str(), nullptr));
  }

  std::vector<PredictionRecord> preds(anns.size());
  cli::parallel_for_ordered(anns.size(), a.jobs ? a.jobs : cli::default_jobs(), [&](std::size_t i) {
    const auto& ann = anns[i];
    const SimMatrix sim =
        read_sim_matrix(fs::path(a.sims) / (pair_stem(ann.query_id, ann.ref_id) + ".vcs"));
    preds[i] = {ann.query_id, ann.ref_id, localize(sim, method, params)};
  });
  write_predictions(a.out, preds);
  std::size_t boxes = 0;
  for (const auto& p : preds) boxes += p.boxes.size();
  std::cout << "method " << a.method << ": " << boxes << " boxes over " << anns.size()
            << " pairs -> " << a.out << "\n";
  return 0;
}

struct EvalArgs {
  std::string preds, annotations, report;
  std::string video_scores;
  std::string features;
  double video_threshold = 0.5;
  bool quiet = false;
};

int run_eval(const EvalArgs& a) {
  const auto anns = read_annotations(a.annotations);
  const auto preds = read_predictions(a.preds);

  std::map<std::pair<std::string, std::string>, const PredictionRecord*> by_pair;
  for (const auto& p : preds) {
    if (!by_pair.emplace(std::make_pair(p.query_id, p.ref_id), &p).second)
      fail(Errc::invariant_violation, "duplicate prediction line for " + p.query_id + "/" + p.ref_id);
  }
  std::map<std::pair<std::string, std::string>, double> video_scores;
  if (!a.video_scores.empty()) {
    std::ifstream is(a.video_scores);
    if (!is) fail(Errc::io_error, "cannot open " + a.video_scores);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      video_scores[{j.at("query_id"), j.at("ref_id")}] = j.at("score").get<double>();
    }
  }

  std::vector<PairEvalInput> inputs;
  std::vector<bool> decisions, labels;
  for (const auto& ann : anns) {
    PairEvalInput in;
    in.annotation = ann;
    const auto key = std::make_pair(ann.query_id, ann.ref_id);
    if (auto it = by_pair.find(key); it != by_pair.end()) in.predictions = it->second->boxes;
    if (!a.features.empty()) {
      in.query_len = static_cast<double>(
          read_features(cli::feature_path(a.features, ann.query_id), {1u << 20, false}).length());
      in.ref_len = static_cast<double>(
          read_features(cli::feature_path(a.features, ann.ref_id), {1u << 20, false}).length());
    }
    bool copied = !in.predictions.empty();
    if (auto it = video_scores.find(key); it != video_scores.end())
      copied = copied || it->second >= a.video_threshold;
    decisions.push_back(copied);
    labels.push_back(ann.is_positive());
    inputs.push_back(std::move(in));
  }
  for (const auto& p : preds)
    if (std::none_of(anns.begin(), anns.end(), [&](const PairAnnotation& ann) {
          return ann.query_id == p.query_id && ann.ref_id == p.ref_id;
        }))
      fail(Errc::invariant_violation, "prediction for unannotated pair " + p.query_id + "/" + p.ref_id);

  MetricsReport report = dataset_metrics(inputs);
  const VideoLevelMetrics vm = video_level_metrics(decisions, labels);
  report.frr = vm.frr;
  report.far = vm.far;
  report.positive_pair_count = vm.positives;

  if (!a.quiet) std::cout << report.to_table();
  if (!a.report.empty()) {
    std::ofstream os(a.report);
    os << report.to_json() << '\n';
  }
  return 0;
}

struct PseudoArgs {
  std::string detections, annotations, out;
  double theta = kDefaultPseudoTheta;
  double lambda_u = kDefaultLambdaU;
  double lambda = kDefaultLambdaReg;
  bool no_weak_filter = false;
};

int run_pseudo(const PseudoArgs& a) {
  const auto anns = read_annotations(a.annotations);
  const auto dets = read_predictions(a.detections);
  std::map<std::pair<std::string, std::string>, const PredictionRecord*> det_by_pair;
  for (const auto& d : dets) det_by_pair[{d.query_id, d.ref_id}] = &d;

  static const std::vector<SegmentBox> kNoBoxes;
  auto boxes_for = [&](const PairAnnotation& ann) -> const std::vector<SegmentBox>& {
    const auto it = det_by_pair.find({ann.query_id, ann.ref_id});
    return it == det_by_pair.end() ? kNoBoxes : it->second->boxes;
  };

  std::vector<PseudoLabel> pseudo;
  std::vector<SemiExample> supervised, unsupervised;
  for (const auto& ann : anns) {
    const auto& det_boxes = boxes_for(ann);
    if (!ann.gt_boxes.empty()) {
      supervised.push_back(make_supervised_example(ann, det_boxes));
      continue;
    }
    PseudoLabel label = make_pseudo_label({ann.query_id, ann.ref_id, det_boxes}, a.theta);
    if (ann.weak_label.has_value() && !a.no_weak_filter)
      label = weak_label_filter(std::move(label), *ann.weak_label);
    if (label.kept) unsupervised.push_back(make_unsupervised_example(label, det_boxes));
    pseudo.push_back(std::move(label));
  }

  write_pseudo_labels(a.out, pseudo);
  const SemiBatchLoss loss = assemble_semi_batch(supervised, unsupervised, a.lambda, a.lambda_u);
  std::size_t kept = 0;
  for (const auto& l : pseudo) kept += l.kept;
  std::cout << "pseudo labels: " << pseudo.size() << " pairs (" << kept << " kept) -> " << a.out
            << "\n";
  std::cout << "semi loss: L_s=" << loss.supervised << " L_u=" << loss.unsupervised
            << " lambda_u=" << a.lambda_u << " combined=" << loss.combined << "\n";
  return 0;
}

struct BenchArgs {
  std::vector<std::size_t> lengths = {1024, 2048, 4096};
  std::size_t dim = 64;
  int repeats = 3;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs& a) {
  if (a.lengths.empty()) fail(Errc::bad_argument, "--lengths needs at least one value");
  const auto rows = time_attention_scaling(a.lengths, a.dim, a.repeats, a.seed);
  std::printf("%8s %14s %14s %10s %10s\n", "n", "vanilla(ms)", "linear(ms)", "van.ratio",
              "lin.ratio");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::printf("%8zu %14.3f %14.3f", rows[i].length, rows[i].vanilla_ms, rows[i].linear_ms);
    if (i > 0 && rows[i].length == rows[i - 1].length * 2)
      std::printf(" %10.2f %10.2f", rows[i].vanilla_ms / rows[i - 1].vanilla_ms,
                  rows[i].linear_ms / rows[i - 1].linear_ms);
    std::printf("\n");
  }
  return 0;
}

struct GenWeightsArgs {
  std::string out;
  std::uint64_t seed = 0;
  std::size_t dim = kDefaultFeatureDim;
  std::size_t heads = 8;
  std::size_t layers = 1;
  std::size_t hidden = kDefaultFeatureDim;
};

int run_genweights(const GenWeightsArgs& a) {
  write_weights(a.out, make_random_weights(a.seed, a.dim, a.heads, a.layers, a.hidden));
  std::cout << "wrote weights (dim=" << a.dim << " heads=" << a.heads << " layers=" << a.layers
            << ") -> " << a.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"copyloc: copied-segment localization on frame-level feature sequences"};
  app.require_subcommand(1);
  app.set_config("--config")->description("key=value config, overridden by flags");

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic copied-pair dataset");
  cmd_gen->add_option("--out", gen.out, "output directory")->required();
  cmd_gen->add_option("--pairs", gen.pairs, "number of pairs");
  cmd_gen->add_option("--seed", gen.seed, "global seed");
  cmd_gen->add_option("--len-q", gen.len_q, "query length (s)");
  cmd_gen->add_option("--len-r", gen.len_r, "reference length (s)");
  cmd_gen->add_option("--dim", gen.dim, "feature dim");
  cmd_gen->add_option("--copies", gen.copies, "copies per positive pair");
  cmd_gen->add_option("--dur-min", gen.dur_min, "min copy duration (s)");
  cmd_gen->add_option("--dur-max", gen.dur_max, "max copy duration (s)");
  cmd_gen->add_option("--sigma", gen.sigma, "noise level on copied frames");
  cmd_gen->add_option("--speed", gen.speed, "speed factor (0.5, 1 or 2)");
  cmd_gen->add_flag("--reversed", gen.reversed, "reverse copies");
  cmd_gen->add_option("--negative-frac", gen.negative_frac, "fraction of uncopied pairs");
  cmd_gen->add_option("--preset", gen.preset, "none | hard (reversal + speed mix)")
      ->check(CLI::IsMember({"none", "hard"}));

  AttnArgs attn;
  auto* cmd_attn = app.add_subcommand("attn", "attention-enhance feature pairs");
  cmd_attn->add_option("--features", attn.features, "feature directory")->required();
  cmd_attn->add_option("--pairs", attn.pairs, "annotation JSONL listing pairs")->required();
  cmd_attn->add_option("--weights", attn.weights, "VCW1 weight file")->required();
  cmd_attn->add_option("--kernel", attn.kernel, "vanilla | linear")
      ->check(CLI::IsMember({"vanilla", "linear"}));
  cmd_attn->add_option("--out", attn.out, "output directory")->required();
  cmd_attn->add_option("--video-scores", attn.video_scores, "write video-head scores JSONL");
  cmd_attn->add_option("--max-len", attn.max_len, "max sequence length");
  cmd_attn->add_flag("--truncate", attn.truncate, "truncate over-long sequences");
  cmd_attn->add_option("--jobs", attn.jobs, "worker threads")->envname("COPYLOC_JOBS");

  SimmatArgs simmat;
  auto* cmd_simmat = app.add_subcommand("simmat", "build similarity matrices");
  cmd_simmat->add_option("--features", simmat.features, "feature directory");
  cmd_simmat->add_option("--enhanced", simmat.enhanced, "attn output directory (overrides --features)");
  cmd_simmat->add_option("--pairs", simmat.pairs, "annotation JSONL listing pairs")->required();
  cmd_simmat->add_option("--out", simmat.out, "output directory")->required();
  cmd_simmat->add_option("--tau", simmat.tau, "softmax temperature");
  cmd_simmat->add_option("--resize", simmat.resize, "target HxW");
  cmd_simmat->add_flag("--no-resize", simmat.no_resize, "keep native resolution");
  cmd_simmat->add_flag("--raw", simmat.raw, "skip dual-softmax, emit raw cosine");
  cmd_simmat->add_flag("--softmax-after-resize", simmat.softmax_after_resize,
                       "apply dual-softmax after resizing instead of before");
  cmd_simmat->add_flag("--export-pgm", simmat.export_pgm, "also write PGM images");
  cmd_simmat->add_option("--max-len", simmat.max_len, "max sequence length");
  cmd_simmat->add_flag("--truncate", simmat.truncate, "truncate over-long sequences");
  cmd_simmat->add_option("--jobs", simmat.jobs, "worker threads")->envname("COPYLOC_JOBS");

  DetectArgs detect;
  auto* cmd_detect = app.add_subcommand("detect", "localize copied segments on similarity matrices");
  cmd_detect->add_option("--sims", detect.sims, "similarity matrix directory")->required();
  cmd_detect->add_option("--pairs", detect.pairs, "annotation JSONL listing pairs")->required();
  cmd_detect->add_option("--method", detect.method, "hv | tn | dp | dtw | cc")
      ->check(CLI::IsMember({"hv", "tn", "dp", "dtw", "cc"}));
  cmd_detect->add_option("--param", detect.params, "detector parameter override key=value")
      ->take_all();
  cmd_detect->add_option("--out", detect.out, "predictions JSONL")->required();
  cmd_detect->add_option("--jobs", detect.jobs, "worker threads")->envname("COPYLOC_JOBS");

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "segment- and video-level evaluation");
  cmd_eval->add_option("--preds", eval.preds, "predictions JSONL")->required();
  cmd_eval->add_option("--annotations", eval.annotations, "annotation JSONL")->required();
  cmd_eval->add_option("--video-scores", eval.video_scores, "video-head scores JSONL");
  cmd_eval->add_option("--features", eval.features, "feature dir (enables duration buckets)");
  cmd_eval->add_option("--video-threshold", eval.video_threshold, "video-head decision threshold");
  cmd_eval->add_option("--report", eval.report, "write JSON report here");
  cmd_eval->add_flag("--quiet", eval.quiet, "suppress the text table");

  PseudoArgs pseudo;
  auto* cmd_pseudo = app.add_subcommand("pseudo", "confidence-threshold detections into pseudo labels");
  cmd_pseudo->add_option("--detections", pseudo.detections, "teacher detections JSONL")->required();
  cmd_pseudo->add_option("--annotations", pseudo.annotations, "annotation JSONL (weak labels)")
      ->required();
  cmd_pseudo->add_option("--theta", pseudo.theta, "confidence threshold");
  cmd_pseudo->add_option("--lambda-u", pseudo.lambda_u, "unsupervised loss weight");
  cmd_pseudo->add_option("--lambda", pseudo.lambda, "regression loss weight");
  cmd_pseudo->add_flag("--no-weak-filter", pseudo.no_weak_filter, "skip weak-label filtering");
  cmd_pseudo->add_option("--out", pseudo.out, "pseudo-label JSONL")->required();

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "time vanilla vs linear attention scaling");
  cmd_bench->add_option("--lengths", bench.lengths, "comma-separated sequence lengths")
      ->delimiter(',');
  cmd_bench->add_option("--dim", bench.dim, "feature dim");
  cmd_bench->add_option("--repeats", bench.repeats, "runs per point (best kept)");
  cmd_bench->add_option("--seed", bench.seed, "input seed");

  GenWeightsArgs gw;
  auto* cmd_gw = app.add_subcommand("genweights", "write a seeded random weight file");
  cmd_gw->add_option("--out", gw.out, "weight file path")->required();
  cmd_gw->add_option("--seed", gw.seed, "seed");
  cmd_gw->add_option("--dim", gw.dim, "feature dim");
  cmd_gw->add_option("--heads", gw.heads, "attention heads");
  cmd_gw->add_option("--layers", gw.layers, "attention layers");
  cmd_gw->add_option("--hidden", gw.hidden, "video-head hidden width");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_attn->parsed()) return run_attn(attn);
    if (cmd_simmat->parsed()) return run_simmat(simmat);
    if (cmd_detect->parsed()) return run_detect(detect);
    if (cmd_eval->parsed()) return run_eval(eval);
    if (cmd_pseudo->parsed()) return run_pseudo(pseudo);
    if (cmd_bench->parsed()) return run_bench(bench);
    if (cmd_gw->parsed()) return run_genweights(gw);
  } catch (const Error& e) {
    nlohmann::json j{{"error", errc_name(e.code())}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json j{{"error", "Internal"}, {"message", e.what()}};
    std::cerr << j.dump() << '\n';
    return 3;
  }
  return 1;
}
