#include "hcsc/inference.hpp"

#include <cmath>
#include <string>

namespace hcsc {

namespace {

SignalTensor residual_at(const SignalTensor& x_prev, const FilterBank& A,
                         const SignalTensor& x, const FilterBank& B,
                         const SignalTensor& u) {
  SignalTensor r = conv_full(A, x);
  SignalTensor bu = conv_full(B, u);
  if (!r.same_shape(bu) || !r.same_shape(x_prev)) {
    throw ShapeError("layer terms A*x, B*u and x_prev do not share a shape");
  }
  for (std::size_t n = 0; n < r.size(); ++n) {
    r.data[n] += bu.data[n] - x_prev.data[n];
  }
  return r;
}

void axpy(SignalTensor& y, float a, const SignalTensor& x) {
  for (std::size_t n = 0; n < y.size(); ++n) y.data[n] += a * x.data[n];
}

} // namespace

double data_fidelity(const SignalTensor& x_prev, const FilterBank& A,
                     const SignalTensor& x, const FilterBank& B,
                     const SignalTensor& u) {
  return 0.5 * norm_l2_sq(residual_at(x_prev, A, x, B, u));
}

double layer_objective(const SignalTensor& x_prev, const FilterBank& A,
                       const SignalTensor& x, const FilterBank& B,
                       const SignalTensor& u, float lambda, float gamma) {
  return data_fidelity(x_prev, A, x, B, u) + lambda * norm_l1(u) +
         0.5 * gamma * norm_l2_sq(x);
}

SignalTensor grad_u(const SignalTensor& x_prev, const FilterBank& A,
                    const SignalTensor& x, const FilterBank& B,
                    const SignalTensor& u) {
  return corr_valid(residual_at(x_prev, A, x, B, u), B);
}

SignalTensor grad_x(const SignalTensor& x_prev, const FilterBank& A,
                    const SignalTensor& x, const FilterBank& B,
                    const SignalTensor& u) {
  return corr_valid(residual_at(x_prev, A, x, B, u), A);
}

namespace {

LayerSolve proximal_solve(const SignalTensor& x_prev, const FilterBank& A,
                          const FilterBank& B, float lambda, float gamma,
                          const FistaSettings& settings,
                          const std::optional<std::pair<SignalTensor, SignalTensor>>&
                              init,
                          bool momentum) {
  settings.validate();
  if (x_prev.channels != A.out_channels || x_prev.channels != B.out_channels) {
    throw ShapeError("layer solve: x_prev channels do not match filter banks");
  }
  if (x_prev.height < A.kernel_h || x_prev.width < A.kernel_w) {
    throw ShapeError("layer solve: signal smaller than kernel");
  }
  const int ch = x_prev.height - A.kernel_h + 1;
  const int cw = x_prev.width - A.kernel_w + 1;
  const float alpha = settings.step;

  SignalTensor x(A.in_channels, ch, cw), u(B.in_channels, ch, cw);
  if (init) {
    x = init->first;
    u = init->second;
    if (x.channels != A.in_channels || x.height != ch || x.width != cw ||
        u.channels != B.in_channels || u.height != ch || u.width != cw) {
      throw ShapeError("layer solve: warm-start shapes do not match the layer");
    }
  }
  SignalTensor x_old = x, u_old = u;

  std::vector<double> trace;
  if (settings.record_objective) {
    trace.push_back(layer_objective(x_prev, A, x, B, u, lambda, gamma));
  }

  double t = 1.0;
  for (int k = 1; k <= settings.iters; ++k) {
    const double t_next =
        momentum ? (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0 : 1.0;
    const float mu =
        momentum ? static_cast<float>((t - 1.0) / t_next) : 0.0f;

    // extrapolated point (equals the iterate at k=1 or without momentum)
    SignalTensor xb = x, ub = u;
    if (mu != 0.0f) {
      for (std::size_t n = 0; n < xb.size(); ++n) {
        xb.data[n] += mu * (x.data[n] - x_old.data[n]);
      }
      for (std::size_t n = 0; n < ub.size(); ++n) {
        ub.data[n] += mu * (u.data[n] - u_old.data[n]);
      }
    }

    SignalTensor r = residual_at(x_prev, A, xb, B, ub);

    SignalTensor gx = corr_valid(r, A);
    axpy(gx, gamma, xb);
    x_old = std::move(x);
    x = std::move(xb);
    axpy(x, -alpha, gx);

    SignalTensor gu = corr_valid(r, B);
    u_old = std::move(u);
    axpy(ub, -alpha, gu);
    u = soft_threshold(ub, lambda * alpha);

    t = t_next;

    if (!all_finite(x) || !all_finite(u)) {
      throw DivergenceError("objective non-finite at iteration " +
                            std::to_string(k) + " with step " +
                            std::to_string(alpha));
    }
    if (settings.record_objective) {
      trace.push_back(layer_objective(x_prev, A, x, B, u, lambda, gamma));
    }
  }
  return {std::move(x), std::move(u), std::move(trace)};
}

} // namespace

LayerSolve fista_layer(const SignalTensor& x_prev, const FilterBank& A,
                       const FilterBank& B, float lambda, float gamma,
                       const FistaSettings& settings,
                       const std::optional<std::pair<SignalTensor, SignalTensor>>&
                           init) {
  return proximal_solve(x_prev, A, B, lambda, gamma, settings, init, true);
}

LayerSolve ista_layer(const SignalTensor& x_prev, const FilterBank& A,
                      const FilterBank& B, float lambda, float gamma,
                      const FistaSettings& settings,
                      const std::optional<std::pair<SignalTensor, SignalTensor>>&
                          init) {
  return proximal_solve(x_prev, A, B, lambda, gamma, settings, init, false);
}

Encoding encode(const HierarchicalModel& model, const SignalTensor& x0,
                const FistaSettings& settings) {
  if (x0.channels != model.input_channels) {
    throw ShapeError("encode: input has " + std::to_string(x0.channels) +
                     " channels, model expects " +
                     std::to_string(model.input_channels));
  }
  Encoding enc;
  SignalTensor target = x0;
  for (int ell = 1; ell <= model.depth(); ++ell) {
    const auto& cfg = model.layers[ell - 1];
    const FilterBank& A = *model.A[ell - 1];
    const FilterBank& B = *model.B[ell - 1];
    LayerSolve sol;
    try {
      sol = fista_layer(target, A, B, cfg.lambda, cfg.gamma, settings);
    } catch (const Error& e) {
      throw FormatError(e.tag(), "layer " + std::to_string(ell) + ": " + e.what());
    }
    SignalTensor r = residual_at(target, A, sol.x, B, sol.u);
    enc.layer_residual_mse.push_back(norm_l2_sq(r) / static_cast<double>(r.size()));
    if (settings.record_objective) enc.objective_trace.push_back(sol.trace);
    target = sol.x; // next layer decomposes the solved scale code
    enc.x.push_back(std::move(sol.x));
    enc.u.push_back(std::move(sol.u));
  }
  return enc;
}

SignalTensor reconstruct(const HierarchicalModel& model, const Encoding& enc,
                         int from_layer) {
  if (from_layer < 1 || from_layer > model.depth() ||
      static_cast<int>(enc.x.size()) < from_layer) {
    throw ArgumentError("reconstruct: layer index " + std::to_string(from_layer) +
                        " out of range");
  }
  SignalTensor x = enc.x[from_layer - 1];
  for (int ell = from_layer; ell >= 1; --ell) {
    SignalTensor next = conv_full(*model.A[ell - 1], x);
    SignalTensor detail = conv_full(*model.B[ell - 1], enc.u[ell - 1]);
    for (std::size_t n = 0; n < next.size(); ++n) next.data[n] += detail.data[n];
    x = std::move(next);
  }
  return x;
}

} // namespace hcsc
