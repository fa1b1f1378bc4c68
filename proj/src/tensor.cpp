#include "hcsc/tensor.hpp"

#include <cmath>
#include <string>

namespace hcsc {

namespace {

std::string shape_str(const SignalTensor& t) {
  return std::to_string(t.channels) + "x" + std::to_string(t.height) + "x" +
         std::to_string(t.width);
}

std::string shape_str(const FilterBank& f) {
  return std::to_string(f.out_channels) + "x" + std::to_string(f.in_channels) + "x" +
         std::to_string(f.kernel_h) + "x" + std::to_string(f.kernel_w);
}

} // namespace

SignalTensor conv_full(const FilterBank& filters, const SignalTensor& signal) {
  if (signal.channels != filters.in_channels) {
    throw ShapeError("conv_full: signal " + shape_str(signal) +
                     " does not match filter in_channels of " + shape_str(filters));
  }
  const int h = signal.height, w = signal.width;
  const int kh = filters.kernel_h, kw = filters.kernel_w;
  SignalTensor out(filters.out_channels, h + kh - 1, w + kw - 1);

  // out(r, i+p, j+q) += K(r,c,p,q) * x(c,i,j); the inner loop over j is a
  // contiguous saxpy on both sides.
  for (int r = 0; r < filters.out_channels; ++r) {
    for (int c = 0; c < filters.in_channels; ++c) {
      for (int p = 0; p < kh; ++p) {
        for (int q = 0; q < kw; ++q) {
          const float k = filters.at(r, c, p, q);
          if (k == 0.0f) continue;
          for (int i = 0; i < h; ++i) {
            const float* src = signal.channel(c) + static_cast<std::size_t>(i) * w;
            float* dst = out.channel(r) +
                         static_cast<std::size_t>(i + p) * out.width + q;
            for (int j = 0; j < w; ++j) dst[j] += k * src[j];
          }
        }
      }
    }
  }
  return out;
}

SignalTensor corr_valid(const SignalTensor& signal, const FilterBank& filters) {
  if (signal.channels != filters.out_channels) {
    throw ShapeError("corr_valid: signal " + shape_str(signal) +
                     " does not match filter out_channels of " + shape_str(filters));
  }
  if (signal.height < filters.kernel_h || signal.width < filters.kernel_w) {
    throw ShapeError("corr_valid: kernel " + shape_str(filters) +
                     " larger than signal " + shape_str(signal));
  }
  const int oh = signal.height - filters.kernel_h + 1;
  const int ow = signal.width - filters.kernel_w + 1;
  SignalTensor out(filters.in_channels, oh, ow);

  for (int c = 0; c < filters.in_channels; ++c) {
    for (int r = 0; r < filters.out_channels; ++r) {
      for (int p = 0; p < filters.kernel_h; ++p) {
        for (int q = 0; q < filters.kernel_w; ++q) {
          const float k = filters.at(r, c, p, q);
          if (k == 0.0f) continue;
          for (int i = 0; i < oh; ++i) {
            const float* src = signal.channel(r) +
                               static_cast<std::size_t>(i + p) * signal.width + q;
            float* dst = out.channel(c) + static_cast<std::size_t>(i) * ow;
            for (int j = 0; j < ow; ++j) dst[j] += k * src[j];
          }
        }
      }
    }
  }
  return out;
}

FilterBank corr_filter_grad(const SignalTensor& residual, const SignalTensor& code,
                            int kernel_h, int kernel_w) {
  if (residual.height != code.height + kernel_h - 1 ||
      residual.width != code.width + kernel_w - 1) {
    throw ShapeError("corr_filter_grad: residual " + shape_str(residual) +
                     " incompatible with code " + shape_str(code) + " and kernel " +
                     std::to_string(kernel_h) + "x" + std::to_string(kernel_w));
  }
  FilterBank grad(residual.channels, code.channels, kernel_h, kernel_w);

  for (int r = 0; r < residual.channels; ++r) {
    for (int c = 0; c < code.channels; ++c) {
      for (int p = 0; p < kernel_h; ++p) {
        for (int q = 0; q < kernel_w; ++q) {
          float acc = 0.0f;
          for (int i = 0; i < code.height; ++i) {
            const float* res = residual.channel(r) +
                               static_cast<std::size_t>(i + p) * residual.width + q;
            const float* x = code.channel(c) + static_cast<std::size_t>(i) * code.width;
            for (int j = 0; j < code.width; ++j) acc += res[j] * x[j];
          }
          grad.at(r, c, p, q) = acc;
        }
      }
    }
  }
  return grad;
}

SignalTensor soft_threshold(const SignalTensor& signal, float threshold) {
  if (threshold < 0.0f) {
    throw ArgumentError("soft_threshold: negative threshold " +
                        std::to_string(threshold));
  }
  SignalTensor out(signal.channels, signal.height, signal.width);
  for (std::size_t n = 0; n < signal.size(); ++n) {
    const float b = signal.data[n];
    if (b > threshold) {
      out.data[n] = b - threshold;
    } else if (b < -threshold) {
      out.data[n] = b + threshold;
    }
  }
  return out;
}

double inner_product(const SignalTensor& a, const SignalTensor& b) {
  if (!a.same_shape(b)) {
    throw ShapeError("inner_product: " + shape_str(a) + " vs " + shape_str(b));
  }
  double acc = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    acc += static_cast<double>(a.data[n]) * b.data[n];
  }
  return acc;
}

double norm_l1(const SignalTensor& t) {
  double acc = 0.0;
  for (float v : t.data) acc += std::abs(static_cast<double>(v));
  return acc;
}

double norm_l2_sq(const SignalTensor& t) {
  double acc = 0.0;
  for (float v : t.data) acc += static_cast<double>(v) * v;
  return acc;
}

std::size_t count_nonzero(const SignalTensor& t) {
  std::size_t n = 0;
  for (float v : t.data) n += (v != 0.0f);
  return n;
}

bool all_finite(const SignalTensor& t) {
  for (float v : t.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool all_finite(const FilterBank& f) {
  for (float v : f.data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

} // namespace hcsc
