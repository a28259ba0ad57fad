#pragma once

// Shared plumbing for the copyloc CLI subcommands: pair bookkeeping,
// deterministic file naming, and ordered parallel execution.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "copyloc/annotation.hpp"
#include "copyloc/feature.hpp"

namespace copyloc::cli {

namespace fs = std::filesystem;

// File stem for everything derived from a pair.
std::string pair_stem(const std::string& query_id, const std::string& ref_id);

fs::path feature_path(const fs::path& dir, const std::string& video_id);

// Runs fn(0..total) on `jobs` threads; results must be written to
// per-index slots so output order equals input order. The first worker
// exception is rethrown on the caller thread.
void parallel_for_ordered(std::size_t total, unsigned jobs,
                          const std::function<void(std::size_t)>& fn);

unsigned default_jobs();

struct FeatureReader {
  fs::path dir;
  ReadFeatureOptions opts;

  FeatureSequence load(const std::string& video_id) const {
    return read_features(feature_path(dir, video_id), opts);
  }
};

}  // namespace copyloc::cli
