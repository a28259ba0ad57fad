#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "copyloc/attention.hpp"
#include "copyloc/rng.hpp"
#include "json.hpp"

namespace copyloc {

namespace {

constexpr char kMagic[4] = {'V', 'C', 'W', '1'};

// Blob tensor order is fixed; see attention.hpp. These two walkers keep
// reader and writer in lockstep.
template <typename Fn>
void walk_tensors(AttentionWeights& w, Fn&& fn) {
  fn(w.class_token);
  for (auto& layer : w.layers) {
    for (MhaWeights* mha : {&layer.self_attn, &layer.cross_attn}) {
      for (auto& m : mha->wq) fn(m.data());
      for (auto& m : mha->wk) fn(m.data());
      for (auto& m : mha->wv) fn(m.data());
      fn(mha->wo.data());
    }
  }
  fn(w.head_w1.data());
  fn(w.head_b1);
  fn(w.head_w2.data());
  std::vector<double> b2{w.head_b2};
  fn(b2);
  w.head_b2 = b2[0];
}

void allocate_shapes(AttentionWeights& w, std::size_t layers) {
  const std::size_t d_head = w.dim / w.heads;
  w.class_token.assign(w.dim, 0.0);
  w.layers.resize(layers);
  for (auto& layer : w.layers) {
    for (MhaWeights* mha : {&layer.self_attn, &layer.cross_attn}) {
      mha->wq.assign(w.heads, Mat(w.dim, d_head));
      mha->wk.assign(w.heads, Mat(w.dim, d_head));
      mha->wv.assign(w.heads, Mat(w.dim, d_head));
      mha->wo = Mat(w.dim, w.dim);
    }
  }
  w.head_w1 = Mat(2 * w.dim, w.hidden);
  w.head_b1.assign(w.hidden, 0.0);
  w.head_w2 = Mat(w.hidden, 1);
  w.head_b2 = 0.0;
}

}  // namespace

AttentionWeights read_weights(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::io_error, "cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4)) fail(Errc::truncated_file, "magic in " + path.string());
  if (std::memcmp(magic, kMagic, 4) != 0)
    fail(Errc::bad_magic, path.string() + " does not start with VCW1");

  unsigned char lenb[4];
  if (!is.read(reinterpret_cast<char*>(lenb), 4))
    fail(Errc::truncated_file, "manifest length in " + path.string());
  const std::uint32_t manifest_len = std::uint32_t(lenb[0]) | std::uint32_t(lenb[1]) << 8 |
                                     std::uint32_t(lenb[2]) << 16 | std::uint32_t(lenb[3]) << 24;
  std::string manifest(manifest_len, '\0');
  if (!is.read(manifest.data(), manifest_len))
    fail(Errc::truncated_file, "manifest in " + path.string());

  AttentionWeights w;
  std::size_t layer_count = 0;
  try {
    const auto j = nlohmann::json::parse(manifest);
    w.dim = j.at("dim").get<std::size_t>();
    w.heads = j.at("heads").get<std::size_t>();
    w.hidden = j.at("hidden").get<std::size_t>();
    layer_count = j.at("layers").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::malformed_json, path.string() + " manifest: " + e.what());
  }
  if (w.dim == 0 || w.heads == 0 || w.dim % w.heads != 0)
    fail(Errc::weight_shape_mismatch, path.string() + ": bad dims in manifest");
  allocate_shapes(w, layer_count);

  walk_tensors(w, [&](std::vector<double>& tensor) {
    std::vector<unsigned char> buf(tensor.size() * 4);
    if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size()))
      fail(Errc::truncated_file, "weight blob in " + path.string());
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const std::uint32_t bits = std::uint32_t(buf[4 * i]) | std::uint32_t(buf[4 * i + 1]) << 8 |
                                 std::uint32_t(buf[4 * i + 2]) << 16 |
                                 std::uint32_t(buf[4 * i + 3]) << 24;
      tensor[i] = static_cast<double>(std::bit_cast<float>(bits));
    }
  });
  if (is.peek() != std::char_traits<char>::eof())
    fail(Errc::weight_shape_mismatch, path.string() + ": trailing bytes after weight blob");
  w.validate();
  return w;
}

void write_weights(const std::filesystem::path& path, const AttentionWeights& w) {
  w.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  nlohmann::json j{{"dim", w.dim}, {"heads", w.heads}, {"layers", w.layers.size()},
                   {"hidden", w.hidden}};
  const std::string manifest = j.dump();
  const std::uint32_t len = static_cast<std::uint32_t>(manifest.size());
  const unsigned char lenb[4] = {static_cast<unsigned char>(len),
                                 static_cast<unsigned char>(len >> 8),
                                 static_cast<unsigned char>(len >> 16),
                                 static_cast<unsigned char>(len >> 24)};
  os.write(reinterpret_cast<const char*>(lenb), 4);
  os.write(manifest.data(), manifest.size());

  AttentionWeights mutable_copy = w;
  walk_tensors(mutable_copy, [&](std::vector<double>& tensor) {
    std::vector<unsigned char> buf(tensor.size() * 4);
    for (std::size_t i = 0; i < tensor.size(); ++i) {
      const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(tensor[i]));
      buf[4 * i] = static_cast<unsigned char>(bits);
      buf[4 * i + 1] = static_cast<unsigned char>(bits >> 8);
      buf[4 * i + 2] = static_cast<unsigned char>(bits >> 16);
      buf[4 * i + 3] = static_cast<unsigned char>(bits >> 24);
    }
    os.write(reinterpret_cast<const char*>(buf.data()), buf.size());
  });
  if (!os) fail(Errc::io_error, "short write to " + path.string());
}

AttentionWeights make_random_weights(std::uint64_t seed, std::size_t dim, std::size_t heads,
                                     std::size_t layers, std::size_t hidden) {
  if (dim == 0 || heads == 0 || dim % heads != 0)
    fail(Errc::weight_shape_mismatch, "dim must be a positive multiple of heads");
  AttentionWeights w;
  w.dim = dim;
  w.heads = heads;
  w.hidden = hidden;
  allocate_shapes(w, layers);

  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  walk_tensors(w, [&](std::vector<double>& tensor) {
    for (double& v : tensor) v = scale * rng.gaussian();
  });
  w.validate();
  return w;
}

}  // namespace copyloc
