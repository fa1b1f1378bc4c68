#ifndef HCSC_DATAIO_HPP
#define HCSC_DATAIO_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hcsc/classifier.hpp"
#include "hcsc/model.hpp"

#include <json.hpp>

namespace hcsc {

struct Dataset {
  std::vector<SignalTensor> images; // 1x28x28, values in [0,1]
  std::vector<int> labels;
  std::string split;
};

// IDX ingestion. Pixels are divided by 255.
std::vector<SignalTensor> load_idx_images(const std::string& path);
std::vector<int> load_idx_labels(const std::string& path);
Dataset load_dataset(const std::string& images_path, const std::string& labels_path,
                     const std::string& split);

// the usual MNIST statistics over the [0,1] training pixels
inline constexpr float kMnistMean = 0.1307f;
inline constexpr float kMnistStd = 0.3081f;

/// Extra gain on top of standardization. At the reference sparsity level the
/// soft threshold kills most activations on unit-variance inputs; boosting
/// the input amplitude keeps the detail codes informative while the dynamics
/// stay stable at the reference step size.
inline constexpr float kInputGain = 4.0f;

/// In-place (v - mean) / std over every image. At the sparsity levels the
/// reference configuration uses, the codes only activate on standardized
/// inputs, so the training pipeline applies this before encoding (with
/// stddev = kMnistStd / kInputGain).
void standardize(std::vector<SignalTensor>& images, float mean = kMnistMean,
                 float stddev = kMnistStd);

/// Everything one "HCSC" container holds: the model, optionally a trained
/// classifier head, and inspectable metadata.
struct CheckpointData {
  HierarchicalModel model;
  std::optional<LogisticModel> classifier;
  std::uint64_t seed = 0;
  nlohmann::json extra; // e.g. training history summary
};

void save_checkpoint(const std::string& path, const CheckpointData& data);
CheckpointData load_checkpoint(const std::string& path);

/// Per-channel min-max normalized tiles on a grid with 1-px separators,
/// written as binary PGM (P5). cols == 0 picks ceil(sqrt(#tiles)).
void export_montage(const std::vector<SignalTensor>& tensors, int cols,
                    const std::string& path);

/// Line-delimited training metrics: epoch,batch,layer,objective,recon_rel_err
class MetricsWriter {
public:
  explicit MetricsWriter(const std::string& path);
  void record(int epoch, int batch, int layer, double objective,
              double recon_rel_err);

private:
  std::ofstream out_;
};

} // namespace hcsc

#endif
