#include "hcsc/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hcsc {

std::size_t FeatureLayout::total_size() const {
  std::size_t n = 0;
  for (const auto& e : entries) {
    n += static_cast<std::size_t>(e.channels) * e.height * e.width;
  }
  return n;
}

FeatureVector featurize(const Encoding& enc, bool include_all_scales) {
  FeatureVector feat;
  const int L = static_cast<int>(enc.u.size());
  auto append = [&](const std::string& name, const SignalTensor& t) {
    feat.layout.entries.push_back({name, t.channels, t.height, t.width});
    feat.values.insert(feat.values.end(), t.data.begin(), t.data.end());
  };
  for (int l = 0; l < L; ++l) append("u" + std::to_string(l + 1), enc.u[l]);
  if (include_all_scales) {
    for (int l = 0; l < L; ++l) append("x" + std::to_string(l + 1), enc.x[l]);
  } else {
    append("x" + std::to_string(L), enc.x[L - 1]);
  }
  return feat;
}

namespace {

void check_features(const std::vector<FeatureVector>& features,
                    const std::vector<int>& labels, int classes) {
  if (features.empty()) throw ArgumentError("classifier: empty feature set");
  if (labels.size() != features.size()) {
    throw ArgumentError("classifier: features and labels lengths differ");
  }
  for (std::size_t i = 1; i < features.size(); ++i) {
    if (!(features[i].layout == features[0].layout)) {
      throw ArgumentError("classifier: inconsistent feature layouts");
    }
    if (features[i].values.size() != features[0].values.size()) {
      throw ArgumentError("classifier: inconsistent feature dimensions");
    }
  }
  for (int y : labels) {
    if (y < 0 || y >= classes) {
      throw ArgumentError("classifier: label " + std::to_string(y) +
                          " outside 0.." + std::to_string(classes - 1));
    }
  }
}

// Expands a feature vector into its positive and negative parts. The head is
// linear in the split representation, which lets it weight positive and
// negative code activations independently.
void sign_split(const std::vector<float>& in, std::vector<float>& out) {
  const std::size_t d = in.size();
  out.resize(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    const float v = in[i];
    out[i] = v > 0.0f ? v : 0.0f;
    out[d + i] = v < 0.0f ? -v : 0.0f;
  }
}

void softmax_inplace(std::vector<float>& z) {
  const float mx = *std::max_element(z.begin(), z.end());
  float sum = 0.0f;
  for (float& v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (float& v : z) v /= sum;
}

} // namespace

LogisticModel fit(const std::vector<FeatureVector>& features,
                  const std::vector<int>& labels, int classes,
                  const FitSettings& settings) {
  check_features(features, labels, classes);
  const std::size_t n = features.size();
  const std::size_t in_dim = features[0].values.size();
  const std::size_t dim = 2 * in_dim; // sign-split representation

  LogisticModel model;
  model.classes = classes;
  model.dim = static_cast<int>(in_dim);
  model.weights.assign(static_cast<std::size_t>(classes) * dim, 0.0f);
  model.bias.assign(classes, 0.0f);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(settings.seed);

  std::vector<float> split;
  std::vector<float> grad_w(static_cast<std::size_t>(classes) * dim);
  std::vector<float> grad_b(classes);
  std::vector<float> vel_w(grad_w.size(), 0.0f);
  std::vector<float> vel_b(classes, 0.0f);
  std::vector<float> z(classes);

  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    const float lr =
        settings.lr / (1.0f + settings.lr_decay * static_cast<float>(epoch));
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(settings.batch_size)) {
      const std::size_t end =
          std::min(n, start + static_cast<std::size_t>(settings.batch_size));
      std::fill(grad_w.begin(), grad_w.end(), 0.0f);
      std::fill(grad_b.begin(), grad_b.end(), 0.0f);
      const float inv_bs = 1.0f / static_cast<float>(end - start);

      for (std::size_t i = start; i < end; ++i) {
        const auto& f = features[order[i]];
        sign_split(f.values, split);
        for (int k = 0; k < classes; ++k) {
          const float* w = model.weights.data() + static_cast<std::size_t>(k) * dim;
          float acc = 0.0f;
          for (std::size_t d = 0; d < dim; ++d) acc += w[d] * split[d];
          z[k] = acc + model.bias[k];
        }
        softmax_inplace(z);
        const int y = labels[order[i]];
        for (int k = 0; k < classes; ++k) {
          const float coef = (z[k] - (k == y ? 1.0f : 0.0f)) * inv_bs;
          if (coef == 0.0f) continue;
          float* g = grad_w.data() + static_cast<std::size_t>(k) * dim;
          for (std::size_t d = 0; d < dim; ++d) g[d] += coef * split[d];
          grad_b[k] += coef;
        }
      }
      for (std::size_t m = 0; m < grad_w.size(); ++m) {
        vel_w[m] = settings.momentum * vel_w[m] - lr * grad_w[m];
        model.weights[m] += vel_w[m];
      }
      for (int k = 0; k < classes; ++k) {
        vel_b[k] = settings.momentum * vel_b[k] - lr * grad_b[k];
        model.bias[k] += vel_b[k];
      }
    }
  }
  return model;
}

std::vector<float> predict_proba(const LogisticModel& model,
                                 const FeatureVector& feat) {
  if (static_cast<int>(feat.values.size()) != model.dim) {
    throw ArgumentError("predict: feature dimension " +
                        std::to_string(feat.values.size()) + " != model dim " +
                        std::to_string(model.dim));
  }
  const std::size_t dim = 2 * static_cast<std::size_t>(model.dim);
  std::vector<float> split;
  sign_split(feat.values, split);
  std::vector<float> z(model.classes);
  for (int k = 0; k < model.classes; ++k) {
    const float* w = model.weights.data() + static_cast<std::size_t>(k) * dim;
    float acc = 0.0f;
    for (std::size_t d = 0; d < dim; ++d) acc += w[d] * split[d];
    z[k] = acc + model.bias[k];
  }
  softmax_inplace(z);
  return z;
}

std::vector<int> predict(const LogisticModel& model,
                         const std::vector<FeatureVector>& features) {
  std::vector<int> out;
  out.reserve(features.size());
  for (const auto& f : features) {
    const auto p = predict_proba(model, f);
    int best = 0;
    for (int k = 1; k < model.classes; ++k) {
      if (p[k] > p[best]) best = k; // ties keep the lowest index
    }
    out.push_back(best);
  }
  return out;
}

double accuracy(const LogisticModel& model,
                const std::vector<FeatureVector>& features,
                const std::vector<int>& labels) {
  if (labels.size() != features.size()) {
    throw ArgumentError("accuracy: features and labels lengths differ");
  }
  const auto pred = predict(model, features);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) correct += (pred[i] == labels[i]);
  return features.empty() ? 0.0
                          : static_cast<double>(correct) / features.size();
}

} // namespace hcsc
