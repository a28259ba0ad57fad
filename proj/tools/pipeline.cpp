#include "pipeline.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace copyloc::cli {

std::string pair_stem(const std::string& query_id, const std::string& ref_id) {
  auto sanitize = [](std::string s) {
    for (char& c : s)
      if (c == '/' || c == '\\' || c == ':') c = '_';
    return s;
  };
  return sanitize(query_id) + "__" + sanitize(ref_id);
}

fs::path feature_path(const fs::path& dir, const std::string& video_id) {
  return dir / (video_id + ".vcf");
}

void parallel_for_ordered(std::size_t total, unsigned jobs,
                          const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || total <= 1) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(total);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned count = std::min<unsigned>(jobs, static_cast<unsigned>(total));
  pool.reserve(count);
  for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

unsigned default_jobs() {
  if (const char* env = std::getenv("COPYLOC_JOBS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

}  // namespace copyloc::cli
