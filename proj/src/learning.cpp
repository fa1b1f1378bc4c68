#include "hcsc/learning.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "hcsc/parallel.hpp"

namespace hcsc {

std::pair<FilterBank, FilterBank>
filter_gradients(const FilterBank& A, const FilterBank& B,
                 const std::vector<LayerExample>& batch) {
  if (batch.empty()) throw ArgumentError("filter_gradients: empty batch");

  FilterBank grad_a(A.out_channels, A.in_channels, A.kernel_h, A.kernel_w);
  FilterBank grad_b(B.out_channels, B.in_channels, B.kernel_h, B.kernel_w);

  for (const auto& ex : batch) {
    SignalTensor r = conv_full(A, *ex.x);
    SignalTensor bu = conv_full(B, *ex.u);
    if (!r.same_shape(bu) || !r.same_shape(*ex.x_prev)) {
      throw ShapeError("filter_gradients: A*x, B*u and x_prev shapes differ");
    }
    for (std::size_t n = 0; n < r.size(); ++n) {
      r.data[n] += bu.data[n] - ex.x_prev->data[n];
    }
    FilterBank ga = corr_filter_grad(r, *ex.x, A.kernel_h, A.kernel_w);
    FilterBank gb = corr_filter_grad(r, *ex.u, B.kernel_h, B.kernel_w);
    for (std::size_t n = 0; n < grad_a.size(); ++n) grad_a.data[n] += ga.data[n];
    for (std::size_t n = 0; n < grad_b.size(); ++n) grad_b.data[n] += gb.data[n];
  }
  const float inv = 1.0f / static_cast<float>(batch.size());
  for (float& v : grad_a.data) v *= inv;
  for (float& v : grad_b.data) v *= inv;
  return {std::move(grad_a), std::move(grad_b)};
}

FilterBank project_unit_atoms(const FilterBank& filters) {
  FilterBank out = filters;
  const int slice = filters.kernel_h * filters.kernel_w;
  for (int c = 0; c < filters.in_channels; ++c) {
    double norm_sq = 0.0;
    for (int r = 0; r < filters.out_channels; ++r) {
      const float* base = &out.at(r, c, 0, 0);
      for (int n = 0; n < slice; ++n) {
        norm_sq += static_cast<double>(base[n]) * base[n];
      }
    }
    if (norm_sq == 0.0) {
      throw DegenerateAtomError("zero atom at code channel " + std::to_string(c));
    }
    const float scale = static_cast<float>(1.0 / std::sqrt(norm_sq));
    for (int r = 0; r < filters.out_channels; ++r) {
      float* base = &out.at(r, c, 0, 0);
      for (int n = 0; n < slice; ++n) base[n] *= scale;
    }
  }
  return out;
}

namespace {

std::vector<LayerExample> layer_batch(const std::vector<const SignalTensor*>& inputs,
                                      const std::vector<Encoding>& encodings,
                                      int ell) {
  std::vector<LayerExample> batch;
  batch.reserve(encodings.size());
  for (std::size_t i = 0; i < encodings.size(); ++i) {
    const SignalTensor* x_prev =
        ell == 1 ? inputs[i] : &encodings[i].x[ell - 2];
    batch.push_back({x_prev, &encodings[i].x[ell - 1], &encodings[i].u[ell - 1]});
  }
  return batch;
}

} // namespace

void dict_step(HierarchicalModel& model, int ell,
               const std::vector<const SignalTensor*>& inputs,
               const std::vector<Encoding>& encodings, float lr) {
  if (encodings.empty()) throw ArgumentError("dict_step: empty batch");
  if (inputs.size() != encodings.size()) {
    throw ArgumentError("dict_step: inputs and encodings lengths differ");
  }
  if (model.tied && ell != 1) {
    throw ArgumentError("dict_step: tied model takes one accumulated step, "
                        "call with layer 1");
  }
  if (ell < 1 || ell > model.depth()) {
    throw ArgumentError("dict_step: layer index out of range");
  }

  const int last = model.tied ? model.depth() : ell;
  FilterBank grad_a, grad_b;
  for (int l = ell; l <= last; ++l) {
    auto [ga, gb] =
        filter_gradients(*model.A[l - 1], *model.B[l - 1], layer_batch(inputs, encodings, l));
    if (l == ell) {
      grad_a = std::move(ga);
      grad_b = std::move(gb);
    } else {
      for (std::size_t n = 0; n < grad_a.size(); ++n) grad_a.data[n] += ga.data[n];
      for (std::size_t n = 0; n < grad_b.size(); ++n) grad_b.data[n] += gb.data[n];
    }
  }

  if (model.layers[ell - 1].scale_filter_trainable) {
    FilterBank& A = *model.A[ell - 1];
    for (std::size_t n = 0; n < A.size(); ++n) A.data[n] -= lr * grad_a.data[n];
    A = project_unit_atoms(A);
  }
  FilterBank& B = *model.B[ell - 1];
  for (std::size_t n = 0; n < B.size(); ++n) B.data[n] -= lr * grad_b.data[n];
  B = project_unit_atoms(B);
}

TrainHistory train(HierarchicalModel& model, const std::vector<SignalTensor>& images,
                   const TrainSettings& settings, const TrainCallbacks& callbacks) {
  settings.validate();
  TrainHistory history;
  if (settings.epochs == 0 || images.empty()) return history;

  const int L = model.depth();
  std::vector<std::size_t> order(images.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(settings.seed);

  for (int epoch = 0; epoch < settings.epochs; ++epoch) {
    if (settings.shuffle) std::shuffle(order.begin(), order.end(), rng);

    double recon_sum = 0.0;
    std::vector<double> obj_sum(L, 0.0);
    std::size_t seen = 0;

    int batch_index = 0;
    for (std::size_t start = 0; start < order.size();
         start += settings.batch_size, ++batch_index) {
      const std::size_t end =
          std::min(order.size(), start + settings.batch_size);
      const std::size_t bs = end - start;

      std::vector<const SignalTensor*> inputs(bs);
      for (std::size_t i = 0; i < bs; ++i) inputs[i] = &images[order[start + i]];

      std::vector<Encoding> encs(bs);
      std::vector<double> recon_err(bs);
      try {
        parallel_for(bs, settings.threads, [&](std::size_t i) {
          encs[i] = encode(model, *inputs[i], settings.fista);
          SignalTensor rec = reconstruct(model, encs[i], L);
          double num = 0.0;
          for (std::size_t n = 0; n < rec.size(); ++n) {
            const double d = rec.data[n] - inputs[i]->data[n];
            num += d * d;
          }
          const double den = norm_l2_sq(*inputs[i]);
          recon_err[i] = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
        });
      } catch (const Error& e) {
        throw FormatError(e.tag(), "epoch " + std::to_string(epoch) + " batch " +
                                       std::to_string(batch_index) + ": " +
                                       e.what());
      }

      // per-layer Eq.-(4)-style objective from the stored diagnostics
      std::vector<double> batch_obj(L, 0.0);
      double batch_recon = 0.0;
      for (std::size_t i = 0; i < bs; ++i) {
        for (int l = 0; l < L; ++l) {
          const auto& cfg = model.layers[l];
          const double fidelity = 0.5 * encs[i].layer_residual_mse[l] *
                                  static_cast<double>(l == 0
                                                          ? inputs[i]->size()
                                                          : encs[i].x[l - 1].size());
          batch_obj[l] += fidelity + cfg.lambda * norm_l1(encs[i].u[l]) +
                          0.5 * cfg.gamma * norm_l2_sq(encs[i].x[l]);
        }
        batch_recon += recon_err[i];
      }

      if (model.tied) {
        dict_step(model, 1, inputs, encs, settings.dict_lr);
      } else {
        for (int l = 1; l <= L; ++l) {
          dict_step(model, l, inputs, encs, settings.dict_lr);
        }
      }

      for (int l = 0; l < L; ++l) {
        obj_sum[l] += batch_obj[l];
        if (callbacks.on_batch) {
          callbacks.on_batch(epoch, batch_index, l + 1, batch_obj[l] / bs,
                             batch_recon / bs);
        }
      }
      recon_sum += batch_recon;
      seen += bs;
    }

    EpochStats stats;
    stats.recon_rel_err = recon_sum / static_cast<double>(seen);
    for (int l = 0; l < L; ++l) {
      stats.layer_objective_mean.push_back(obj_sum[l] / static_cast<double>(seen));
    }
    if (callbacks.on_epoch) callbacks.on_epoch(epoch, stats);
    history.epochs.push_back(std::move(stats));
  }
  return history;
}

} // namespace hcsc
