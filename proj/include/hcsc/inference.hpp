#ifndef HCSC_INFERENCE_HPP
#define HCSC_INFERENCE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "hcsc/model.hpp"

namespace hcsc {

struct FistaSettings {
  float step = 0.01f; // alpha
  int iters = 40;     // K
  bool record_objective = false;

  void validate() const {
    if (step <= 0.0f) throw ArgumentError("fista step must be positive");
    if (iters < 1) throw ArgumentError("fista iters must be >= 1");
  }
};

/// Result of encoding one example: per-layer scale and detail codes plus
/// diagnostics.
struct Encoding {
  std::vector<SignalTensor> x; // [x_1..x_L]
  std::vector<SignalTensor> u; // [u_1..u_L]
  std::vector<std::vector<double>> objective_trace; // per layer, when recorded
  std::vector<double> layer_residual_mse;
};

struct LayerSolve {
  SignalTensor x;
  SignalTensor u;
  std::vector<double> trace;
};

/// f = 1/2 ||x_prev - A*x - B*u||_2^2
double data_fidelity(const SignalTensor& x_prev, const FilterBank& A,
                     const SignalTensor& x, const FilterBank& B,
                     const SignalTensor& u);

/// f + lambda*||u||_1 + (gamma/2)*||x||_2^2
double layer_objective(const SignalTensor& x_prev, const FilterBank& A,
                       const SignalTensor& x, const FilterBank& B,
                       const SignalTensor& u, float lambda, float gamma);

/// (A*x + B*u - x_prev) star B, shaped like u
SignalTensor grad_u(const SignalTensor& x_prev, const FilterBank& A,
                    const SignalTensor& x, const FilterBank& B,
                    const SignalTensor& u);

/// (A*x + B*u - x_prev) star A, shaped like x
SignalTensor grad_x(const SignalTensor& x_prev, const FilterBank& A,
                    const SignalTensor& x, const FilterBank& B,
                    const SignalTensor& u);

/// Accelerated proximal-gradient solve of one layer's analysis problem.
LayerSolve fista_layer(const SignalTensor& x_prev, const FilterBank& A,
                       const FilterBank& B, float lambda, float gamma,
                       const FistaSettings& settings,
                       const std::optional<std::pair<SignalTensor, SignalTensor>>&
                           init = std::nullopt);

/// Unaccelerated reference variant (momentum t^k == 1).
LayerSolve ista_layer(const SignalTensor& x_prev, const FilterBank& A,
                      const FilterBank& B, float lambda, float gamma,
                      const FistaSettings& settings,
                      const std::optional<std::pair<SignalTensor, SignalTensor>>&
                          init = std::nullopt);

/// Sequential H-CSC over all layers, feeding each solved scale code to the
/// next layer as its target.
Encoding encode(const HierarchicalModel& model, const SignalTensor& x0,
                const FistaSettings& settings);

/// Noise-free synthesis from layer `from_layer` down to x_0.
SignalTensor reconstruct(const HierarchicalModel& model, const Encoding& enc,
                         int from_layer);

} // namespace hcsc

#endif
