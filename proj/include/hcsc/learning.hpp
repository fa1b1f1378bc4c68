#ifndef HCSC_LEARNING_HPP
#define HCSC_LEARNING_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "hcsc/inference.hpp"
#include "hcsc/model.hpp"

namespace hcsc {

struct TrainSettings {
  int epochs = 5;
  int batch_size = 32;
  float dict_lr = 0.05f;
  FistaSettings fista;
  std::uint64_t seed = 0;
  bool shuffle = true;
  int threads = 0; // 0 = hardware concurrency

  void validate() const {
    if (epochs < 0) throw ArgumentError("epochs must be >= 0");
    if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
    if (dict_lr <= 0.0f) throw ArgumentError("dict_lr must be positive");
    fista.validate();
  }
};

/// One (target, codes) triple for a single layer of a single example.
struct LayerExample {
  const SignalTensor* x_prev;
  const SignalTensor* x;
  const SignalTensor* u;
};

/// Mean over the batch of the gradients of 1/2 ||x_prev - A*x - B*u||^2
/// w.r.t. A and B.
std::pair<FilterBank, FilterBank>
filter_gradients(const FilterBank& A, const FilterBank& B,
                 const std::vector<LayerExample>& batch);

/// Rescales each code-channel atom to unit l2 norm.
FilterBank project_unit_atoms(const FilterBank& filters);

/// One projected SGD step on layer `ell` (1-based). For tied models the
/// gradients of every layer are summed into the shared banks and the step
/// is applied once; call with ell == 1.
void dict_step(HierarchicalModel& model, int ell,
               const std::vector<const SignalTensor*>& inputs,
               const std::vector<Encoding>& encodings, float lr);

struct EpochStats {
  double recon_rel_err = 0.0;              // mean layer-0 relative error
  std::vector<double> layer_objective_mean; // per layer
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
};

struct TrainCallbacks {
  // (epoch, batch, layer, mean objective, mean recon relative error)
  std::function<void(int, int, int, double, double)> on_batch;
  std::function<void(int, const EpochStats&)> on_epoch;
};

/// Alternating minimization: per minibatch, H-CSC with the current filters,
/// then a projected dictionary step per layer.
TrainHistory train(HierarchicalModel& model, const std::vector<SignalTensor>& images,
                   const TrainSettings& settings,
                   const TrainCallbacks& callbacks = {});

} // namespace hcsc

#endif
