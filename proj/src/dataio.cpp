#include "hcsc/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace hcsc {

namespace {

using nlohmann::json;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

std::uint32_t be_u32(const std::vector<std::uint8_t>& buf, std::size_t off) {
  return (static_cast<std::uint32_t>(buf[off]) << 24) |
         (static_cast<std::uint32_t>(buf[off + 1]) << 16) |
         (static_cast<std::uint32_t>(buf[off + 2]) << 8) |
         static_cast<std::uint32_t>(buf[off + 3]);
}

constexpr std::uint32_t kImagesMagic = 2051;
constexpr std::uint32_t kLabelsMagic = 2049;

} // namespace

void standardize(std::vector<SignalTensor>& images, float mean, float stddev) {
  if (stddev <= 0.0f) throw ArgumentError("standardize: std must be positive");
  const float inv = 1.0f / stddev;
  for (auto& img : images) {
    for (float& v : img.data) v = (v - mean) * inv;
  }
}

std::vector<SignalTensor> load_idx_images(const std::string& path) {
  const auto buf = read_file(path);
  if (buf.size() < 16) throw FormatError("idx-truncated", path + ": header short");
  if (be_u32(buf, 0) != kImagesMagic) {
    throw FormatError("idx-bad-magic", path + ": magic " +
                                           std::to_string(be_u32(buf, 0)) +
                                           ", expected 2051");
  }
  const std::uint32_t count = be_u32(buf, 4);
  const std::uint32_t h = be_u32(buf, 8);
  const std::uint32_t w = be_u32(buf, 12);
  if (h == 0 || w == 0 || h > 4096 || w > 4096) {
    throw FormatError("idx-dim-mismatch",
                      path + ": implausible image dims " + std::to_string(h) +
                          "x" + std::to_string(w));
  }
  const std::size_t expect = 16 + static_cast<std::size_t>(count) * h * w;
  if (buf.size() != expect) {
    throw FormatError("idx-truncated", path + ": payload " +
                                           std::to_string(buf.size() - 16) +
                                           " bytes, expected " +
                                           std::to_string(expect - 16));
  }
  std::vector<SignalTensor> images;
  images.reserve(count);
  std::size_t off = 16;
  for (std::uint32_t n = 0; n < count; ++n) {
    SignalTensor img(1, static_cast<int>(h), static_cast<int>(w));
    for (std::size_t p = 0; p < static_cast<std::size_t>(h) * w; ++p) {
      img.data[p] = static_cast<float>(buf[off + p]) / 255.0f;
    }
    off += static_cast<std::size_t>(h) * w;
    images.push_back(std::move(img));
  }
  return images;
}

std::vector<int> load_idx_labels(const std::string& path) {
  const auto buf = read_file(path);
  if (buf.size() < 8) throw FormatError("idx-truncated", path + ": header short");
  if (be_u32(buf, 0) != kLabelsMagic) {
    throw FormatError("idx-bad-magic", path + ": magic " +
                                           std::to_string(be_u32(buf, 0)) +
                                           ", expected 2049");
  }
  const std::uint32_t count = be_u32(buf, 4);
  if (buf.size() != 8 + static_cast<std::size_t>(count)) {
    throw FormatError("idx-truncated",
                      path + ": payload size does not match declared count");
  }
  return std::vector<int>(buf.begin() + 8, buf.end());
}

Dataset load_dataset(const std::string& images_path, const std::string& labels_path,
                     const std::string& split) {
  Dataset ds;
  ds.images = load_idx_images(images_path);
  ds.labels = load_idx_labels(labels_path);
  ds.split = split;
  if (ds.images.size() != ds.labels.size()) {
    throw FormatError("idx-dim-mismatch",
                      split + ": " + std::to_string(ds.images.size()) +
                          " images vs " + std::to_string(ds.labels.size()) +
                          " labels");
  }
  return ds;
}

// ---------------------------------------------------------------------------
// Checkpoint container: "HCSC" magic, u32 version, u64 header length, JSON
// header, then little-endian float32 blobs in header order.

namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

json layer_json(const LayerConfig& cfg) {
  return json{{"scale_channels", cfg.scale_channels},
              {"detail_channels", cfg.detail_channels},
              {"kernel_h", cfg.kernel_h},
              {"kernel_w", cfg.kernel_w},
              {"lambda", cfg.lambda},
              {"gamma", cfg.gamma},
              {"sigma_eps", cfg.sigma_eps},
              {"sigma_x", cfg.sigma_x},
              {"scale_filter_trainable", cfg.scale_filter_trainable}};
}

LayerConfig layer_from_json(const json& j) {
  LayerConfig cfg;
  cfg.scale_channels = j.at("scale_channels");
  cfg.detail_channels = j.at("detail_channels");
  cfg.kernel_h = j.at("kernel_h");
  cfg.kernel_w = j.at("kernel_w");
  cfg.lambda = j.at("lambda");
  cfg.gamma = j.at("gamma");
  cfg.sigma_eps = j.at("sigma_eps");
  cfg.sigma_x = j.at("sigma_x");
  cfg.scale_filter_trainable = j.at("scale_filter_trainable");
  return cfg;
}

struct BlobRef {
  std::string name;
  std::vector<int> shape;
  const float* data;
  std::size_t count;
};

} // namespace

void save_checkpoint(const std::string& path, const CheckpointData& data) {
  const auto& model = data.model;
  json header;
  header["format_version"] = kCheckpointVersion;
  header["input_channels"] = model.input_channels;
  header["tied"] = model.tied;
  header["seed"] = data.seed;
  header["layers"] = json::array();
  for (const auto& cfg : model.layers) header["layers"].push_back(layer_json(cfg));
  if (!data.extra.is_null()) header["extra"] = data.extra;

  std::vector<BlobRef> blobs;
  const int banks = model.tied ? 1 : model.depth();
  for (int ell = 1; ell <= banks; ++ell) {
    const FilterBank& a = *model.A[ell - 1];
    const FilterBank& b = *model.B[ell - 1];
    blobs.push_back({"A" + std::to_string(ell),
                     {a.out_channels, a.in_channels, a.kernel_h, a.kernel_w},
                     a.data.data(),
                     a.size()});
    blobs.push_back({"B" + std::to_string(ell),
                     {b.out_channels, b.in_channels, b.kernel_h, b.kernel_w},
                     b.data.data(),
                     b.size()});
  }
  if (data.classifier) {
    const auto& clf = *data.classifier;
    header["classifier"] = {{"classes", clf.classes}, {"dim", clf.dim}};
    // The head operates on sign-split features, so rows are 2*dim wide.
    blobs.push_back({"clf_weights", {clf.classes, 2 * clf.dim},
                     clf.weights.data(), clf.weights.size()});
    blobs.push_back({"clf_bias", {clf.classes}, clf.bias.data(), clf.bias.size()});
  }
  header["blobs"] = json::array();
  for (const auto& b : blobs) {
    header["blobs"].push_back({{"name", b.name},
                               {"shape", b.shape},
                               {"bytes", b.count * sizeof(float)}});
  }

  const std::string text = header.dump(2);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write("HCSC", 4);
  put_u32(out, kCheckpointVersion);
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& b : blobs) {
    out.write(reinterpret_cast<const char*>(b.data),
              static_cast<std::streamsize>(b.count * sizeof(float)));
  }
  if (!out) throw IoError("write failed for " + path);
}

CheckpointData load_checkpoint(const std::string& path) {
  const auto buf = read_file(path);
  if (buf.size() < 16 || std::memcmp(buf.data(), "HCSC", 4) != 0) {
    throw FormatError("magic-mismatch", path + ": not an HCSC checkpoint");
  }
  std::uint32_t version = 0;
  for (int i = 0; i < 4; ++i) version |= static_cast<std::uint32_t>(buf[4 + i]) << (8 * i);
  if (version != kCheckpointVersion) {
    throw FormatError("version-mismatch", path + ": version " +
                                              std::to_string(version) +
                                              ", expected " +
                                              std::to_string(kCheckpointVersion));
  }
  std::uint64_t header_len = 0;
  for (int i = 0; i < 8; ++i) header_len |= static_cast<std::uint64_t>(buf[8 + i]) << (8 * i);
  if (buf.size() < 16 + header_len) {
    throw FormatError("size-mismatch", path + ": truncated header");
  }
  json header;
  try {
    header = json::parse(buf.begin() + 16, buf.begin() + 16 + header_len);
  } catch (const json::exception& e) {
    throw FormatError("size-mismatch", path + ": bad header: " + e.what());
  }

  CheckpointData data;
  data.model.input_channels = header.at("input_channels");
  data.model.tied = header.at("tied");
  data.seed = header.at("seed");
  if (header.contains("extra")) data.extra = header["extra"];
  for (const auto& j : header.at("layers")) {
    data.model.layers.push_back(layer_from_json(j));
  }

  std::size_t off = 16 + header_len;
  auto read_blob = [&](const json& spec) {
    const std::size_t bytes = spec.at("bytes");
    if (off + bytes > buf.size()) {
      throw FormatError("size-mismatch",
                        path + ": blob " + spec.at("name").get<std::string>() +
                            " extends past end of file");
    }
    std::vector<float> v(bytes / sizeof(float));
    std::memcpy(v.data(), buf.data() + off, bytes);
    off += bytes;
    return v;
  };

  std::size_t blob_index = 0;
  const auto& blob_specs = header.at("blobs");
  auto next_bank = [&](const std::string& expect_prefix) {
    const auto& spec = blob_specs.at(blob_index++);
    const std::string name = spec.at("name");
    const auto shape = spec.at("shape").get<std::vector<int>>();
    if (name.rfind(expect_prefix, 0) != 0 || shape.size() != 4) {
      throw FormatError("size-mismatch", path + ": unexpected blob " + name);
    }
    FilterBank f(shape[0], shape[1], shape[2], shape[3]);
    auto v = read_blob(spec);
    if (v.size() != f.size()) {
      throw FormatError("size-mismatch", path + ": blob " + name +
                                             " size does not match its shape");
    }
    f.data = std::move(v);
    return std::make_shared<FilterBank>(std::move(f));
  };

  const int banks = data.model.tied ? 1 : data.model.depth();
  std::vector<std::shared_ptr<FilterBank>> as, bs;
  for (int ell = 1; ell <= banks; ++ell) {
    as.push_back(next_bank("A"));
    bs.push_back(next_bank("B"));
  }
  for (int ell = 1; ell <= data.model.depth(); ++ell) {
    data.model.A.push_back(data.model.tied ? as[0] : as[ell - 1]);
    data.model.B.push_back(data.model.tied ? bs[0] : bs[ell - 1]);
  }

  if (header.contains("classifier")) {
    LogisticModel clf;
    clf.classes = header["classifier"].at("classes");
    clf.dim = header["classifier"].at("dim");
    clf.weights = read_blob(blob_specs.at(blob_index++));
    clf.bias = read_blob(blob_specs.at(blob_index++));
    if (clf.weights.size() !=
            static_cast<std::size_t>(clf.classes) * 2 * clf.dim ||
        clf.bias.size() != static_cast<std::size_t>(clf.classes)) {
      throw FormatError("size-mismatch", path + ": classifier blob sizes");
    }
    data.classifier = std::move(clf);
  }
  if (off != buf.size()) {
    throw FormatError("size-mismatch", path + ": trailing bytes after payload");
  }
  return data;
}

// ---------------------------------------------------------------------------

void export_montage(const std::vector<SignalTensor>& tensors, int cols,
                    const std::string& path) {
  if (tensors.empty()) throw ArgumentError("export_montage: no tensors");
  const int th = tensors[0].height, tw = tensors[0].width;
  int tiles = 0;
  for (const auto& t : tensors) {
    if (t.height != th || t.width != tw) {
      throw ShapeError("export_montage: tiles must share spatial dims");
    }
    tiles += t.channels;
  }
  if (cols <= 0) cols = static_cast<int>(std::ceil(std::sqrt(tiles)));
  const int rows = (tiles + cols - 1) / cols;

  const int img_w = cols * tw + (cols - 1);
  const int img_h = rows * th + (rows - 1);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(img_w) * img_h, 0);

  int tile = 0;
  for (const auto& t : tensors) {
    for (int c = 0; c < t.channels; ++c, ++tile) {
      const float* src = t.channel(c);
      float mn = src[0], mx = src[0];
      for (int n = 1; n < th * tw; ++n) {
        mn = std::min(mn, src[n]);
        mx = std::max(mx, src[n]);
      }
      const float range = mx - mn;
      const int r0 = (tile / cols) * (th + 1);
      const int c0 = (tile % cols) * (tw + 1);
      for (int i = 0; i < th; ++i) {
        for (int j = 0; j < tw; ++j) {
          // degenerate (constant) tiles map to mid-gray
          const float v =
              range > 0.0f ? (src[i * tw + j] - mn) / range : 0.5f;
          pixels[static_cast<std::size_t>(r0 + i) * img_w + (c0 + j)] =
              static_cast<std::uint8_t>(std::lround(v * 255.0f));
        }
      }
    }
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << img_w << " " << img_h << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw IoError("write failed for " + path);
}

MetricsWriter::MetricsWriter(const std::string& path) : out_(path) {
  if (!out_) throw IoError("cannot write " + path);
}

void MetricsWriter::record(int epoch, int batch, int layer, double objective,
                           double recon_rel_err) {
  out_ << epoch << "," << batch << "," << layer << "," << objective << ","
       << recon_rel_err << "\n";
  out_.flush();
}

} // namespace hcsc
