#ifndef HCSC_CLASSIFIER_HPP
#define HCSC_CLASSIFIER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hcsc/inference.hpp"

namespace hcsc {

/// Describes the concatenation order of one feature vector so layouts can
/// be checked for consistency across a dataset.
struct FeatureLayout {
  struct Entry {
    std::string name; // "u1", "x3", ...
    int channels, height, width;
    bool operator==(const Entry&) const = default;
  };
  std::vector<Entry> entries;
  bool operator==(const FeatureLayout&) const = default;

  std::size_t total_size() const;
};

struct FeatureVector {
  std::vector<float> values;
  FeatureLayout layout;
};

/// Flattens u_1..u_L then x_L (all scales when include_all_scales is set).
FeatureVector featurize(const Encoding& enc, bool include_all_scales = false);

/// Softmax head over sign-split codes: an input feature vector f of length
/// `dim` is expanded to (max(f,0), max(-f,0)) before standardization and the
/// linear layer, so weights and feature statistics have length 2*dim per row.
struct LogisticModel {
  int classes = 0;
  int dim = 0;                // input feature dimension (pre-split)
  std::vector<float> weights; // classes x 2*dim, row-major
  std::vector<float> bias;    // classes
};

struct FitSettings {
  float lr = 0.05f;
  float momentum = 0.9f;
  float lr_decay = 0.05f; // lr / (1 + lr_decay * epoch)
  int epochs = 100;
  int batch_size = 128;
  std::uint64_t seed = 0;
};

/// Minibatch SGD with momentum on softmax cross-entropy over sign-split
/// features (no standardization; codes are consumed at their natural scale).
LogisticModel fit(const std::vector<FeatureVector>& features,
                  const std::vector<int>& labels, int classes,
                  const FitSettings& settings);

/// Per-example softmax probabilities (classes per row).
std::vector<float> predict_proba(const LogisticModel& model,
                                 const FeatureVector& feat);

/// Argmax class, ties broken by lowest index.
std::vector<int> predict(const LogisticModel& model,
                         const std::vector<FeatureVector>& features);

double accuracy(const LogisticModel& model,
                const std::vector<FeatureVector>& features,
                const std::vector<int>& labels);

} // namespace hcsc

#endif
