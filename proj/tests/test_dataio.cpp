#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "hcsc/dataio.hpp"

using namespace hcsc;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("hcsc_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void push_be_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
  v.push_back(static_cast<std::uint8_t>(x >> 24));
  v.push_back(static_cast<std::uint8_t>(x >> 16));
  v.push_back(static_cast<std::uint8_t>(x >> 8));
  v.push_back(static_cast<std::uint8_t>(x));
}

// hand-built 4-image 2x3 IDX fixture
std::vector<std::uint8_t> image_fixture() {
  std::vector<std::uint8_t> v;
  push_be_u32(v, 2051);
  push_be_u32(v, 4);
  push_be_u32(v, 2);
  push_be_u32(v, 3);
  for (int n = 0; n < 4 * 6; ++n) v.push_back(static_cast<std::uint8_t>(n * 10));
  return v;
}

std::vector<std::uint8_t> label_fixture() {
  std::vector<std::uint8_t> v;
  push_be_u32(v, 2049);
  push_be_u32(v, 4);
  for (std::uint8_t b : {3, 1, 4, 1}) v.push_back(b);
  return v;
}

} // namespace

TEST_CASE("IDX fixture parses to exact pixel values") {
  TempDir dir;
  write_bytes(dir.file("img.idx"), image_fixture());
  write_bytes(dir.file("lbl.idx"), label_fixture());

  auto images = load_idx_images(dir.file("img.idx"));
  REQUIRE(images.size() == 4);
  CHECK(images[0].height == 2);
  CHECK(images[0].width == 3);
  for (int n = 0; n < 6; ++n) {
    CHECK(images[0].data[n] == doctest::Approx(n * 10 / 255.0));
  }
  CHECK(images[3].data[5] == doctest::Approx(230 / 255.0));

  auto labels = load_idx_labels(dir.file("lbl.idx"));
  CHECK(labels == std::vector<int>{3, 1, 4, 1});

  auto ds = load_dataset(dir.file("img.idx"), dir.file("lbl.idx"), "train");
  CHECK(ds.images.size() == ds.labels.size());
  for (const auto& img : ds.images) {
    for (float v : img.data) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
    }
  }
}

TEST_CASE("IDX: image magic on a label file is a bad-magic error") {
  TempDir dir;
  write_bytes(dir.file("bad.idx"), image_fixture());
  try {
    load_idx_labels(dir.file("bad.idx"));
    FAIL("expected bad-magic");
  } catch (const Error& e) {
    CHECK(e.tag() == "idx-bad-magic");
  }
  write_bytes(dir.file("bad2.idx"), label_fixture());
  CHECK_THROWS_AS(load_idx_images(dir.file("bad2.idx")), Error);
}

TEST_CASE("IDX fuzz: corrupted headers are rejected without crashing") {
  TempDir dir;
  const auto base = image_fixture();
  std::mt19937_64 rng(1);
  int rejected = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto mutated = base;
    const std::size_t pos = rng() % 16; // header bytes only
    mutated[pos] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    write_bytes(dir.file("fuzz.idx"), mutated);
    try {
      auto images = load_idx_images(dir.file("fuzz.idx"));
      // a mutation that kept the header consistent is fine
    } catch (const Error&) {
      ++rejected;
    }
  }
  CHECK(rejected > 0);

  // truncation sweep
  for (std::size_t cut : {0u, 3u, 8u, 15u, 20u}) {
    auto truncated = base;
    truncated.resize(cut);
    write_bytes(dir.file("trunc.idx"), truncated);
    CHECK_THROWS_AS(load_idx_images(dir.file("trunc.idx")), Error);
  }
}

TEST_CASE("checkpoint: save -> load -> save is byte-identical") {
  TempDir dir;
  auto model = init_model(std::vector<LayerConfig>(3, LayerConfig{}), true, 1, 42);
  CheckpointData data;
  data.model = model;
  data.seed = 42;
  data.extra = {{"final_recon_rel_err", 0.25}};

  save_checkpoint(dir.file("a.hcsc"), data);
  CheckpointData loaded = load_checkpoint(dir.file("a.hcsc"));
  save_checkpoint(dir.file("b.hcsc"), loaded);
  CHECK(read_bytes(dir.file("a.hcsc")) == read_bytes(dir.file("b.hcsc")));

  // tie restored as a single shared bank
  CHECK(loaded.model.tied);
  CHECK(loaded.model.A[0] == loaded.model.A[2]);
  CHECK(loaded.model.B[0] == loaded.model.B[2]);
  CHECK(loaded.model.B[0]->data == model.B[0]->data);
  CHECK(loaded.seed == 42);
  CHECK(loaded.extra.at("final_recon_rel_err") == doctest::Approx(0.25));
}

TEST_CASE("checkpoint: classifier round trip preserves every value") {
  TempDir dir;
  CheckpointData data;
  data.model = init_model({LayerConfig{}}, false, 1, 7);
  LogisticModel clf;
  clf.classes = 3;
  clf.dim = 2; // rows are 2*dim wide in the sign-split representation
  clf.weights = {0.1f, -0.2f, 0.3f, -0.4f, 0.5f, -0.6f,
                 0.7f, -0.8f, 0.9f, -1.0f, 1.1f, -1.2f};
  clf.bias = {1.0f, 2.0f, 3.0f};
  data.classifier = clf;

  save_checkpoint(dir.file("c.hcsc"), data);
  CheckpointData loaded = load_checkpoint(dir.file("c.hcsc"));
  REQUIRE(loaded.classifier.has_value());
  CHECK(loaded.classifier->weights == clf.weights);
  CHECK(loaded.classifier->bias == clf.bias);
}

TEST_CASE("checkpoint: magic, version and truncation errors") {
  TempDir dir;
  CheckpointData data;
  data.model = init_model({LayerConfig{}}, false, 1, 8);
  save_checkpoint(dir.file("d.hcsc"), data);
  auto bytes = read_bytes(dir.file("d.hcsc"));

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  write_bytes(dir.file("bad_magic.hcsc"), bad_magic);
  try {
    load_checkpoint(dir.file("bad_magic.hcsc"));
    FAIL("expected magic-mismatch");
  } catch (const Error& e) {
    CHECK(e.tag() == "magic-mismatch");
  }

  auto bad_version = bytes;
  bad_version[4] = 99;
  write_bytes(dir.file("bad_version.hcsc"), bad_version);
  try {
    load_checkpoint(dir.file("bad_version.hcsc"));
    FAIL("expected version-mismatch");
  } catch (const Error& e) {
    CHECK(e.tag() == "version-mismatch");
  }

  auto truncated = bytes;
  truncated.resize(bytes.size() - 10);
  write_bytes(dir.file("trunc.hcsc"), truncated);
  try {
    load_checkpoint(dir.file("trunc.hcsc"));
    FAIL("expected size-mismatch");
  } catch (const Error& e) {
    CHECK(e.tag() == "size-mismatch");
  }
}

TEST_CASE("montage: grid geometry and constant-tile handling") {
  TempDir dir;
  SignalTensor tiles(32, 5, 5);
  std::mt19937_64 rng(2);
  std::normal_distribution<float> gauss;
  for (float& v : tiles.data) v = gauss(rng);

  export_montage({tiles}, 8, dir.file("grid.pgm"));
  auto bytes = read_bytes(dir.file("grid.pgm"));
  // 8x4 grid of 5x5 tiles with 1-px separators: 47 x 23
  const std::string header = "P5\n47 23\n255\n";
  REQUIRE(bytes.size() == header.size() + 47 * 23);
  CHECK(std::string(bytes.begin(), bytes.begin() + header.size()) == header);

  SignalTensor flat(1, 4, 4);
  for (float& v : flat.data) v = 3.0f;
  export_montage({flat}, 1, dir.file("flat.pgm"));
  auto fb = read_bytes(dir.file("flat.pgm"));
  const std::string fh = "P5\n4 4\n255\n";
  for (std::size_t n = fh.size(); n < fb.size(); ++n) CHECK(fb[n] == 128);
}

TEST_CASE("metrics writer emits one comma-separated line per record") {
  TempDir dir;
  {
    MetricsWriter w(dir.file("metrics.csv"));
    w.record(0, 1, 2, 3.5, 0.25);
    w.record(1, 0, 1, 1.25, 0.125);
  }
  std::ifstream in(dir.file("metrics.csv"));
  std::string line;
  std::getline(in, line);
  CHECK(line == "0,1,2,3.5,0.25");
  std::getline(in, line);
  CHECK(line == "1,0,1,1.25,0.125");
}
