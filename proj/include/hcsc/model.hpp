#ifndef HCSC_MODEL_HPP
#define HCSC_MODEL_HPP

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "hcsc/tensor.hpp"

namespace hcsc {

struct LayerConfig {
  int scale_channels = 1;
  int detail_channels = 32;
  int kernel_h = 5;
  int kernel_w = 5;
  float lambda = 1.0f;   // l1 weight / Laplace diversity
  float gamma = 0.01f;   // ridge weight on the scale code
  float sigma_eps = 0.0f;
  float sigma_x = 1.0f;
  bool scale_filter_trainable = false;

  void validate() const;
};

/// L layers of (A, B) filter banks. Banks are held by shared_ptr so the
/// tied variant can alias one (A, B) pair across every layer.
struct HierarchicalModel {
  int input_channels = 1; // channels of x_0
  bool tied = false;
  std::vector<LayerConfig> layers;
  std::vector<std::shared_ptr<FilterBank>> A;
  std::vector<std::shared_ptr<FilterBank>> B;

  int depth() const { return static_cast<int>(layers.size()); }

  // out-channel count both banks of layer ell (1-based) must have
  int prev_channels(int ell) const {
    return ell == 1 ? input_channels : layers[ell - 2].scale_channels;
  }
};

/// Gaussian init + per-atom normalization for trainable banks; fixed scale
/// filters are the unit-norm constant (box) filter.
HierarchicalModel init_model(const std::vector<LayerConfig>& configs, bool tied,
                             int input_channels, std::uint64_t seed);

/// Top-down synthesis x_{l-1} = A_l * x_l + B_l * u_l (+ noise), returning
/// [x_{L-1}, ..., x_0]. `u` is [u_1..u_L].
std::vector<SignalTensor> synthesize(const HierarchicalModel& model,
                                     const SignalTensor& x_top,
                                     const std::vector<SignalTensor>& u, bool noise,
                                     std::uint64_t seed);

/// Draws x_L ~ N(0, sigma_x^2) and u_l ~ Laplace(0, lambda_l) at the shapes
/// implied by the given top-level spatial dims.
std::pair<SignalTensor, std::vector<SignalTensor>>
sample_priors(const HierarchicalModel& model, int top_h, int top_w,
              std::uint64_t seed);

long trainable_param_count(const HierarchicalModel& model);

/// Unit-norm constant filter (every entry 1/sqrt(out*kh*kw)).
FilterBank box_filter(int out_channels, int in_channels, int kh, int kw);

} // namespace hcsc

#endif
