#include "hcsc/model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "hcsc/learning.hpp"

namespace hcsc {

void LayerConfig::validate() const {
  if (scale_channels < 1 || detail_channels < 1) {
    throw ConfigError("layer channels must be >= 1");
  }
  if (kernel_h < 1 || kernel_w < 1) {
    throw ConfigError("kernel dims must be >= 1");
  }
  if (lambda < 0.0f || gamma < 0.0f || sigma_eps < 0.0f || sigma_x < 0.0f) {
    throw ConfigError("lambda, gamma and sigmas must be nonnegative");
  }
}

FilterBank box_filter(int out_channels, int in_channels, int kh, int kw) {
  FilterBank f(out_channels, in_channels, kh, kw);
  const float v = 1.0f / std::sqrt(static_cast<float>(out_channels) * kh * kw);
  for (float& x : f.data) x = v;
  return f;
}

namespace {

bool same_config(const LayerConfig& a, const LayerConfig& b) {
  return a.scale_channels == b.scale_channels &&
         a.detail_channels == b.detail_channels && a.kernel_h == b.kernel_h &&
         a.kernel_w == b.kernel_w &&
         a.scale_filter_trainable == b.scale_filter_trainable;
}

FilterBank gaussian_bank(int out, int in, int kh, int kw, std::mt19937_64& rng) {
  FilterBank f(out, in, kh, kw);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  for (float& v : f.data) v = gauss(rng);
  return project_unit_atoms(f);
}

} // namespace

HierarchicalModel init_model(const std::vector<LayerConfig>& configs, bool tied,
                             int input_channels, std::uint64_t seed) {
  if (configs.empty()) throw ConfigError("model needs at least one layer");
  if (input_channels < 1) throw ConfigError("input_channels must be >= 1");
  for (const auto& cfg : configs) cfg.validate();

  HierarchicalModel model;
  model.input_channels = input_channels;
  model.tied = tied;
  model.layers = configs;

  // adjacent layers chain through the scale channels
  for (int ell = 1; ell <= model.depth(); ++ell) {
    (void)model.prev_channels(ell);
  }
  if (tied) {
    for (std::size_t i = 1; i < configs.size(); ++i) {
      if (!same_config(configs[0], configs[i])) {
        throw ConfigError("tied model requires identical layer configs");
      }
    }
    if (configs[0].scale_channels != input_channels) {
      throw ConfigError(
          "tied model requires scale_channels == input_channels so one bank "
          "fits every layer");
    }
  }

  std::mt19937_64 rng(seed);
  auto make_layer = [&](int ell) {
    const auto& cfg = model.layers[ell - 1];
    const int out = model.prev_channels(ell);
    std::shared_ptr<FilterBank> a;
    if (cfg.scale_filter_trainable) {
      a = std::make_shared<FilterBank>(
          gaussian_bank(out, cfg.scale_channels, cfg.kernel_h, cfg.kernel_w, rng));
    } else {
      a = std::make_shared<FilterBank>(
          box_filter(out, cfg.scale_channels, cfg.kernel_h, cfg.kernel_w));
    }
    auto b = std::make_shared<FilterBank>(
        gaussian_bank(out, cfg.detail_channels, cfg.kernel_h, cfg.kernel_w, rng));
    return std::make_pair(a, b);
  };

  if (tied) {
    auto [a, b] = make_layer(1);
    for (int ell = 1; ell <= model.depth(); ++ell) {
      model.A.push_back(a);
      model.B.push_back(b);
    }
  } else {
    for (int ell = 1; ell <= model.depth(); ++ell) {
      auto [a, b] = make_layer(ell);
      model.A.push_back(a);
      model.B.push_back(b);
    }
  }
  return model;
}

std::vector<SignalTensor> synthesize(const HierarchicalModel& model,
                                     const SignalTensor& x_top,
                                     const std::vector<SignalTensor>& u, bool noise,
                                     std::uint64_t seed) {
  const int L = model.depth();
  if (static_cast<int>(u.size()) != L) {
    throw ShapeError("synthesize: expected " + std::to_string(L) +
                     " detail signals, got " + std::to_string(u.size()));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> gauss(0.0f, 1.0f);

  std::vector<SignalTensor> out;
  SignalTensor x = x_top;
  for (int ell = L; ell >= 1; --ell) {
    const auto& cfg = model.layers[ell - 1];
    const SignalTensor& ul = u[ell - 1];
    if (x.channels != cfg.scale_channels) {
      throw ShapeError("synthesize: layer " + std::to_string(ell) +
                       " scale signal has " + std::to_string(x.channels) +
                       " channels, expected " + std::to_string(cfg.scale_channels));
    }
    if (ul.channels != cfg.detail_channels || ul.height != x.height ||
        ul.width != x.width) {
      throw ShapeError("synthesize: layer " + std::to_string(ell) +
                       " detail signal shape mismatch");
    }
    SignalTensor next = conv_full(*model.A[ell - 1], x);
    SignalTensor detail = conv_full(*model.B[ell - 1], ul);
    for (std::size_t n = 0; n < next.size(); ++n) next.data[n] += detail.data[n];
    if (noise && cfg.sigma_eps > 0.0f) {
      for (float& v : next.data) v += cfg.sigma_eps * gauss(rng);
    }
    out.push_back(next);
    x = out.back();
  }
  return out; // [x_{L-1}, ..., x_0]
}

std::pair<SignalTensor, std::vector<SignalTensor>>
sample_priors(const HierarchicalModel& model, int top_h, int top_w,
              std::uint64_t seed) {
  const int L = model.depth();
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const auto& top_cfg = model.layers[L - 1];
  SignalTensor x_top(top_cfg.scale_channels, top_h, top_w);
  if (top_cfg.sigma_x > 0.0f) {
    for (float& v : x_top.data) v = top_cfg.sigma_x * gauss(rng);
  }

  // x_l spatial dims, walking down from the top
  std::vector<std::pair<int, int>> dims(L + 1);
  dims[L] = {top_h, top_w};
  for (int ell = L; ell >= 1; --ell) {
    const auto& cfg = model.layers[ell - 1];
    dims[ell - 1] = {dims[ell].first + cfg.kernel_h - 1,
                     dims[ell].second + cfg.kernel_w - 1};
  }

  std::vector<SignalTensor> u;
  for (int ell = 1; ell <= L; ++ell) {
    const auto& cfg = model.layers[ell - 1];
    SignalTensor ul(cfg.detail_channels, dims[ell].first, dims[ell].second);
    if (cfg.lambda > 0.0f) {
      // inverse-CDF Laplace draw with diversity lambda
      for (float& v : ul.data) {
        const double p = unif(rng) - 0.5;
        const double mag = -cfg.lambda * std::log(1.0 - 2.0 * std::abs(p));
        v = static_cast<float>(p < 0 ? -mag : mag);
      }
    }
    u.push_back(std::move(ul));
  }
  return {std::move(x_top), std::move(u)};
}

long trainable_param_count(const HierarchicalModel& model) {
  long count = 0;
  std::vector<const FilterBank*> seen;
  auto counted = [&](const FilterBank* f) {
    for (const auto* s : seen) {
      if (s == f) return true;
    }
    seen.push_back(f);
    return false;
  };
  for (int ell = 1; ell <= model.depth(); ++ell) {
    const auto& cfg = model.layers[ell - 1];
    if (cfg.scale_filter_trainable && !counted(model.A[ell - 1].get())) {
      count += static_cast<long>(model.A[ell - 1]->size());
    }
    if (!counted(model.B[ell - 1].get())) {
      count += static_cast<long>(model.B[ell - 1]->size());
    }
  }
  return count;
}

} // namespace hcsc
