// hcsc: hierarchical convolutional sparse coding on piecewise-smooth images.
// Subcommands: train | encode | reconstruct | classify | visualize | eval

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcsc/classifier.hpp"
#include "hcsc/dataio.hpp"
#include "hcsc/inference.hpp"
#include "hcsc/learning.hpp"
#include "hcsc/model.hpp"
#include "hcsc/parallel.hpp"

namespace fs = std::filesystem;
using namespace hcsc;

namespace {

struct RunConfig {
  std::string config_file;

  // data
  std::string train_images, train_labels;
  std::string test_images, test_labels;
  std::string model_path;
  std::string out_dir = "out";
  int train_subset = 0; // 0 = all
  int test_subset = 0;

  // model (defaults are the best grid-search configuration)
  int layers = 3;
  bool tied = true;
  int detail_channels = 32;
  int scale_channels = 1;
  int kernel = 5;
  double lambda = 1.0;
  double gamma = 0.01;
  bool scale_trainable = false;

  // solver
  double alpha = 0.01;
  int fista_iters = 40;

  // training
  int epochs = 5;
  int batch_size = 32;
  double dict_lr = 0.05;

  // classifier
  double clf_lr = 0.05;
  double clf_momentum = 0.9;
  double clf_lr_decay = 0.05;
  int clf_epochs = 100;
  int clf_batch = 128;
  bool all_scales = true;

  // inputs standardized as (v - mean) / std before encoding
  double input_mean = kMnistMean;
  double input_std = kMnistStd / kInputGain;

  int threads = 0;
  std::uint64_t seed = 0;

  // visualize
  std::string what = "filters";
  std::string bank = "B";
  int layer = 1;
  int image_index = 0;
};

void add_common_flags(CLI::App* cmd, RunConfig& cfg) {
  // later occurrences win, so config-file values yield to explicit flags
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--config", cfg.config_file,
                  "flat key=value file; explicit flags override it");
  cmd->add_option("--out", cfg.out_dir, "output directory")
      ->capture_default_str();
  cmd->add_option("--threads", cfg.threads,
                  "worker threads for batch encoding (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
}

void add_model_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--layers", cfg.layers, "model depth L")->capture_default_str();
  cmd->add_flag("--tied,!--untied", cfg.tied, "share one (A,B) pair across layers")
      ->capture_default_str();
  cmd->add_option("--detail-channels", cfg.detail_channels,
                  "channels of the detail code u")
      ->capture_default_str();
  cmd->add_option("--scale-channels", cfg.scale_channels,
                  "channels of the scale code x")
      ->capture_default_str();
  cmd->add_option("--kernel", cfg.kernel, "square kernel size")
      ->capture_default_str();
  cmd->add_option("--lambda", cfg.lambda, "l1 weight on the detail code")
      ->capture_default_str();
  cmd->add_option("--gamma", cfg.gamma, "ridge weight on the scale code")
      ->capture_default_str();
  cmd->add_flag("--trainable-scale", cfg.scale_trainable,
                "learn the scale filters instead of fixing the box filter");
}

void add_solver_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--alpha", cfg.alpha, "FISTA step size")->capture_default_str();
  cmd->add_option("--fista-iters", cfg.fista_iters, "FISTA iterations K")
      ->capture_default_str();
}

void add_data_flags(CLI::App* cmd, RunConfig& cfg, bool need_test) {
  cmd->add_option("--train-images", cfg.train_images, "IDX image file");
  cmd->add_option("--train-labels", cfg.train_labels, "IDX label file");
  cmd->add_option("--train-subset", cfg.train_subset,
                  "use only the first N training examples (0 = all)")
      ->capture_default_str();
  cmd->add_option("--input-mean", cfg.input_mean,
                  "subtracted from pixels before encoding")
      ->capture_default_str();
  cmd->add_option("--input-std", cfg.input_std,
                  "pixel divisor after mean subtraction (set mean 0, std 1 "
                  "to encode raw [0,1] pixels)")
      ->capture_default_str();
  if (need_test) {
    cmd->add_option("--test-images", cfg.test_images, "IDX image file");
    cmd->add_option("--test-labels", cfg.test_labels, "IDX label file");
    cmd->add_option("--test-subset", cfg.test_subset,
                    "use only the first N test examples (0 = all)")
        ->capture_default_str();
  }
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  return s.substr(begin, s.find_last_not_of(" \t\r") - begin + 1);
}

/// Expands `--config file` into --key=value tokens placed right after the
/// subcommand, so explicit flags (which come later) take precedence and
/// unknown keys fail parsing like any unknown flag would.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string key = eq == std::string::npos ? "" : trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key=value");
    }
    extra.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

std::vector<LayerConfig> layer_configs(const RunConfig& cfg) {
  LayerConfig layer;
  layer.scale_channels = cfg.scale_channels;
  layer.detail_channels = cfg.detail_channels;
  layer.kernel_h = layer.kernel_w = cfg.kernel;
  layer.lambda = static_cast<float>(cfg.lambda);
  layer.gamma = static_cast<float>(cfg.gamma);
  layer.scale_filter_trainable = cfg.scale_trainable;
  return std::vector<LayerConfig>(cfg.layers, layer);
}

FistaSettings fista_settings(const RunConfig& cfg) {
  FistaSettings s;
  s.step = static_cast<float>(cfg.alpha);
  s.iters = cfg.fista_iters;
  return s;
}

Dataset load_split(const RunConfig& cfg, const std::string& images,
                   const std::string& labels, const std::string& split,
                   int subset) {
  if (images.empty() || labels.empty()) {
    throw ConfigError("missing --" + split + "-images/--" + split + "-labels");
  }
  Dataset ds = load_dataset(images, labels, split);
  if (subset > 0 && static_cast<std::size_t>(subset) < ds.images.size()) {
    ds.images.resize(subset);
    ds.labels.resize(subset);
  }
  standardize(ds.images, static_cast<float>(cfg.input_mean),
              static_cast<float>(cfg.input_std));
  return ds;
}

std::vector<Encoding> encode_all(const HierarchicalModel& model,
                                 const std::vector<SignalTensor>& images,
                                 const FistaSettings& fs, int threads) {
  std::vector<Encoding> encs(images.size());
  parallel_for(images.size(), threads, [&](std::size_t i) {
    encs[i] = encode(model, images[i], fs);
  });
  return encs;
}

double mean_recon_rel_err(const HierarchicalModel& model,
                          const std::vector<Encoding>& encs,
                          const std::vector<SignalTensor>& images) {
  double acc = 0.0;
  for (std::size_t i = 0; i < encs.size(); ++i) {
    SignalTensor rec = reconstruct(model, encs[i], model.depth());
    double num = 0.0;
    for (std::size_t n = 0; n < rec.size(); ++n) {
      const double d = rec.data[n] - images[i].data[n];
      num += d * d;
    }
    const double den = norm_l2_sq(images[i]);
    acc += den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  }
  return acc / static_cast<double>(encs.size());
}

int cmd_train(const RunConfig& cfg) {
  Dataset ds = load_split(cfg, cfg.train_images, cfg.train_labels, "train",
                          cfg.train_subset);
  auto model = init_model(layer_configs(cfg), cfg.tied, 1, cfg.seed);

  fs::create_directories(cfg.out_dir);
  MetricsWriter metrics((fs::path(cfg.out_dir) / "metrics.csv").string());

  TrainSettings ts;
  ts.epochs = cfg.epochs;
  ts.batch_size = cfg.batch_size;
  ts.dict_lr = static_cast<float>(cfg.dict_lr);
  ts.fista = fista_settings(cfg);
  ts.seed = cfg.seed;
  ts.threads = cfg.threads;

  TrainCallbacks callbacks;
  callbacks.on_batch = [&](int epoch, int batch, int layer, double obj,
                           double recon) {
    metrics.record(epoch, batch, layer, obj, recon);
  };
  callbacks.on_epoch = [&](int epoch, const EpochStats& stats) {
    std::cout << "epoch " << epoch << ": recon_rel_err=" << stats.recon_rel_err
              << " layer_objectives=[";
    for (std::size_t l = 0; l < stats.layer_objective_mean.size(); ++l) {
      std::cout << (l ? ", " : "") << stats.layer_objective_mean[l];
    }
    std::cout << "]" << std::endl;
  };

  TrainHistory history = train(model, ds.images, ts, callbacks);

  CheckpointData data;
  data.model = std::move(model);
  data.seed = cfg.seed;
  if (!history.epochs.empty()) {
    data.extra = {
        {"epochs", history.epochs.size()},
        {"final_recon_rel_err", history.epochs.back().recon_rel_err}};
  }
  const std::string ckpt = (fs::path(cfg.out_dir) / "checkpoint.hcsc").string();
  save_checkpoint(ckpt, data);
  std::cout << "saved " << ckpt << std::endl;
  return 0;
}

int cmd_encode(const RunConfig& cfg) {
  CheckpointData data = load_checkpoint(cfg.model_path);
  Dataset ds = load_split(cfg, cfg.test_images.empty() ? cfg.train_images
                                                  : cfg.test_images,
                          cfg.test_labels.empty() ? cfg.train_labels
                                                  : cfg.test_labels,
                          "encode", cfg.test_subset ? cfg.test_subset
                                                    : cfg.train_subset);
  auto encs = encode_all(data.model, ds.images, fista_settings(cfg), cfg.threads);

  // per-example codes in the container format: one HCSC file whose banks
  // hold nothing and whose extra section carries the code blobs is overkill;
  // codes are written as one checkpoint-like blob file per run instead
  fs::create_directories(cfg.out_dir);
  const std::string path = (fs::path(cfg.out_dir) / "codes.hcsc").string();
  {
    nlohmann::json header;
    header["count"] = encs.size();
    header["layers"] = data.model.depth();
    std::vector<double> mse(data.model.depth(), 0.0);
    for (const auto& e : encs) {
      for (int l = 0; l < data.model.depth(); ++l) {
        mse[l] += e.layer_residual_mse[l] / encs.size();
      }
    }
    header["mean_layer_residual_mse"] = mse;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    const std::string text = header.dump(2);
    std::uint32_t version = 1;
    std::uint64_t len = text.size();
    out.write("HCSC", 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&len), 8);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& e : encs) {
      for (const auto& t : e.x) {
        out.write(reinterpret_cast<const char*>(t.data.data()),
                  static_cast<std::streamsize>(t.size() * sizeof(float)));
      }
      for (const auto& t : e.u) {
        out.write(reinterpret_cast<const char*>(t.data.data()),
                  static_cast<std::streamsize>(t.size() * sizeof(float)));
      }
    }
    for (int l = 0; l < data.model.depth(); ++l) {
      std::cout << "layer " << (l + 1)
                << " mean residual MSE: " << mse[l] << std::endl;
    }
  }
  std::cout << "wrote " << encs.size() << " encodings to " << path << std::endl;
  return 0;
}

int cmd_reconstruct(const RunConfig& cfg) {
  CheckpointData data = load_checkpoint(cfg.model_path);
  Dataset ds = load_split(cfg, cfg.test_images.empty() ? cfg.train_images
                                                  : cfg.test_images,
                          cfg.test_labels.empty() ? cfg.train_labels
                                                  : cfg.test_labels,
                          "reconstruct", cfg.test_subset ? cfg.test_subset
                                                         : cfg.train_subset);
  auto encs = encode_all(data.model, ds.images, fista_settings(cfg), cfg.threads);

  fs::create_directories(cfg.out_dir);
  for (int l = 1; l <= data.model.depth(); ++l) {
    double err = 0.0;
    for (std::size_t i = 0; i < encs.size(); ++i) {
      SignalTensor rec = reconstruct(data.model, encs[i], l);
      double num = 0.0;
      for (std::size_t n = 0; n < rec.size(); ++n) {
        const double d = rec.data[n] - ds.images[i].data[n];
        num += d * d;
      }
      const double den = norm_l2_sq(ds.images[i]);
      err += den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    }
    std::cout << "layer " << l
              << " relative reconstruction error: " << err / encs.size()
              << std::endl;
  }
  const std::size_t count = std::min<std::size_t>(encs.size(), 16);
  for (std::size_t i = 0; i < count; ++i) {
    SignalTensor rec = reconstruct(data.model, encs[i], data.model.depth());
    export_montage({ds.images[i], rec}, 2,
                   (fs::path(cfg.out_dir) /
                    ("recon_" + std::to_string(i) + ".pgm"))
                       .string());
  }
  std::cout << "wrote " << count << " image/reconstruction pairs to "
            << cfg.out_dir << std::endl;
  return 0;
}

int cmd_classify(const RunConfig& cfg) {
  CheckpointData data = load_checkpoint(cfg.model_path);
  Dataset train_ds = load_split(cfg, cfg.train_images, cfg.train_labels, "train",
                                cfg.train_subset);
  Dataset test_ds =
      load_split(cfg, cfg.test_images, cfg.test_labels, "test", cfg.test_subset);

  const FistaSettings fs_settings = fista_settings(cfg);
  auto featurize_split = [&](const std::vector<SignalTensor>& images) {
    std::vector<FeatureVector> features(images.size());
    parallel_for(images.size(), cfg.threads, [&](std::size_t i) {
      features[i] = featurize(encode(data.model, images[i], fs_settings),
                              cfg.all_scales);
    });
    return features;
  };

  auto train_feats = featurize_split(train_ds.images);
  auto test_feats = featurize_split(test_ds.images);

  FitSettings fit_settings;
  fit_settings.lr = static_cast<float>(cfg.clf_lr);
  fit_settings.momentum = static_cast<float>(cfg.clf_momentum);
  fit_settings.lr_decay = static_cast<float>(cfg.clf_lr_decay);
  fit_settings.epochs = cfg.clf_epochs;
  fit_settings.batch_size = cfg.clf_batch;
  fit_settings.seed = cfg.seed;
  LogisticModel clf = fit(train_feats, train_ds.labels, 10, fit_settings);

  const double train_acc = accuracy(clf, train_feats, train_ds.labels);
  const double test_acc = accuracy(clf, test_feats, test_ds.labels);
  const long params = trainable_param_count(data.model);

  std::cout << "Network model      | Train Set | Test Set | Parameters\n";
  std::cout << (data.model.tied ? std::to_string(data.model.depth()) +
                                      " layers (tied)  "
                                : std::to_string(data.model.depth()) +
                                      " layer(s)       ")
            << " |   " << 100.0 * train_acc << "   |  " << 100.0 * test_acc
            << "  | " << params << std::endl;

  data.classifier = std::move(clf);
  fs::create_directories(cfg.out_dir);
  const std::string out =
      (fs::path(cfg.out_dir) / "checkpoint_classified.hcsc").string();
  save_checkpoint(out, data);
  std::cout << "saved " << out << std::endl;
  return 0;
}

int cmd_visualize(const RunConfig& cfg) {
  CheckpointData data = load_checkpoint(cfg.model_path);
  if (cfg.layer < 1 || cfg.layer > data.model.depth()) {
    throw ArgumentError("layer " + std::to_string(cfg.layer) + " out of range 1.." +
                        std::to_string(data.model.depth()));
  }
  fs::create_directories(cfg.out_dir);

  if (cfg.what == "filters") {
    const FilterBank& bank =
        cfg.bank == "A" ? *data.model.A[cfg.layer - 1] : *data.model.B[cfg.layer - 1];
    // one tile per (out, in) kernel slice
    std::vector<SignalTensor> tiles;
    for (int c = 0; c < bank.in_channels; ++c) {
      SignalTensor t(bank.out_channels, bank.kernel_h, bank.kernel_w);
      for (int r = 0; r < bank.out_channels; ++r) {
        for (int p = 0; p < bank.kernel_h; ++p) {
          for (int q = 0; q < bank.kernel_w; ++q) {
            t.at(r, p, q) = bank.at(r, c, p, q);
          }
        }
      }
      tiles.push_back(std::move(t));
    }
    const std::string path =
        (fs::path(cfg.out_dir) /
         ("filters_" + cfg.bank + std::to_string(cfg.layer) + ".pgm"))
            .string();
    export_montage(tiles, 0, path);
    std::cout << "wrote " << path << std::endl;
    return 0;
  }

  if (cfg.what == "codes") {
    Dataset ds = load_split(cfg, cfg.test_images.empty() ? cfg.train_images
                                                    : cfg.test_images,
                            cfg.test_labels.empty() ? cfg.train_labels
                                                    : cfg.test_labels,
                            "visualize", 0);
    if (cfg.image_index < 0 ||
        static_cast<std::size_t>(cfg.image_index) >= ds.images.size()) {
      throw ArgumentError("image index out of range");
    }
    Encoding enc =
        encode(data.model, ds.images[cfg.image_index], fista_settings(cfg));
    const SignalTensor& u = enc.u[cfg.layer - 1];
    const SignalTensor& x = enc.x[cfg.layer - 1];
    const std::string upath =
        (fs::path(cfg.out_dir) / ("codes_u" + std::to_string(cfg.layer) + ".pgm"))
            .string();
    const std::string xpath =
        (fs::path(cfg.out_dir) / ("codes_x" + std::to_string(cfg.layer) + ".pgm"))
            .string();
    export_montage({u}, 0, upath);
    export_montage({x}, 0, xpath);
    const double nonzero =
        static_cast<double>(count_nonzero(u)) / static_cast<double>(u.size());
    std::cout << "wrote " << upath << " and " << xpath << std::endl;
    std::cout << "detail code nonzero fraction: " << nonzero << std::endl;
    return 0;
  }
  throw ArgumentError("--what must be filters or codes");
}

int cmd_eval(const RunConfig& cfg) {
  CheckpointData data = load_checkpoint(cfg.model_path);
  if (!data.classifier) {
    throw ConfigError("checkpoint has no classifier head; run classify first");
  }
  Dataset ds = load_split(cfg, cfg.test_images, cfg.test_labels, "test",
                          cfg.test_subset);
  const FistaSettings fs_settings = fista_settings(cfg);
  std::vector<FeatureVector> features(ds.images.size());
  std::vector<Encoding> encs(ds.images.size());
  parallel_for(ds.images.size(), cfg.threads, [&](std::size_t i) {
    encs[i] = encode(data.model, ds.images[i], fs_settings);
    features[i] = featurize(encs[i], cfg.all_scales);
  });
  const double acc = accuracy(*data.classifier, features, ds.labels);
  std::cout << "test accuracy: " << 100.0 * acc << "% on " << ds.images.size()
            << " examples" << std::endl;
  std::cout << "mean relative reconstruction error: "
            << mean_recon_rel_err(data.model, encs, ds.images) << std::endl;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical convolutional sparse coding (H-CSC/CDL)"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* train = app.add_subcommand("train", "unsupervised filter learning");
  add_common_flags(train, cfg);
  add_model_flags(train, cfg);
  add_solver_flags(train, cfg);
  add_data_flags(train, cfg, false);
  train->add_option("--epochs", cfg.epochs, "training epochs")
      ->capture_default_str();
  train->add_option("--batch-size", cfg.batch_size, "minibatch size")
      ->capture_default_str();
  train->add_option("--dict-lr", cfg.dict_lr, "dictionary SGD learning rate")
      ->capture_default_str();

  auto* enc = app.add_subcommand("encode", "H-CSC codes for a dataset");
  add_common_flags(enc, cfg);
  add_solver_flags(enc, cfg);
  add_data_flags(enc, cfg, true);
  enc->add_option("--model", cfg.model_path, "model checkpoint")->required();

  auto* rec = app.add_subcommand("reconstruct", "synthesize images from codes");
  add_common_flags(rec, cfg);
  add_solver_flags(rec, cfg);
  add_data_flags(rec, cfg, true);
  rec->add_option("--model", cfg.model_path, "model checkpoint")->required();

  auto* clf = app.add_subcommand("classify",
                                 "fit a logistic head on codes and report "
                                 "train/test accuracy");
  add_common_flags(clf, cfg);
  add_solver_flags(clf, cfg);
  add_data_flags(clf, cfg, true);
  clf->add_option("--model", cfg.model_path, "model checkpoint")->required();
  clf->add_option("--clf-lr", cfg.clf_lr, "classifier learning rate")
      ->capture_default_str();
  clf->add_option("--clf-momentum", cfg.clf_momentum, "classifier SGD momentum")
      ->capture_default_str();
  clf->add_option("--clf-lr-decay", cfg.clf_lr_decay,
                  "classifier per-epoch learning-rate decay")
      ->capture_default_str();
  clf->add_option("--clf-epochs", cfg.clf_epochs, "classifier epochs")
      ->capture_default_str();
  clf->add_option("--clf-batch", cfg.clf_batch, "classifier minibatch size")
      ->capture_default_str();
  clf->add_flag("--all-scales,!--no-all-scales", cfg.all_scales,
                "feed every scale code to the classifier, not just x_L")
      ->capture_default_str();

  auto* vis = app.add_subcommand("visualize", "filter and code montages");
  add_common_flags(vis, cfg);
  add_solver_flags(vis, cfg);
  add_data_flags(vis, cfg, true);
  vis->add_option("--model", cfg.model_path, "model checkpoint")->required();
  vis->add_option("--what", cfg.what, "filters|codes")->capture_default_str();
  vis->add_option("--bank", cfg.bank, "A|B")->capture_default_str();
  vis->add_option("--layer", cfg.layer, "layer index (1-based)")
      ->capture_default_str();
  vis->add_option("--image-index", cfg.image_index,
                  "dataset index for code montages")
      ->capture_default_str();

  auto* ev = app.add_subcommand("eval", "evaluate a saved classifier head");
  add_common_flags(ev, cfg);
  add_solver_flags(ev, cfg);
  add_data_flags(ev, cfg, true);
  ev->add_option("--model", cfg.model_path, "model checkpoint")->required();
  ev->add_flag("--all-scales,!--no-all-scales", cfg.all_scales,
               "must match the flag used at classify time")
      ->capture_default_str();

  try {
    auto args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end()); // CLI11 consumes back to front
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  }

  try {
    if (train->parsed()) return cmd_train(cfg);
    if (enc->parsed()) return cmd_encode(cfg);
    if (rec->parsed()) return cmd_reconstruct(cfg);
    if (clf->parsed()) return cmd_classify(cfg);
    if (vis->parsed()) return cmd_visualize(cfg);
    if (ev->parsed()) return cmd_eval(cfg);
  } catch (const Error& e) {
    std::cerr << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
