#ifndef HCSC_TENSOR_HPP
#define HCSC_TENSOR_HPP

#include <cstddef>
#include <vector>

#include "hcsc/errors.hpp"

namespace hcsc {

/// One multi-channel 2-D signal (scale, detail, residual or input image).
/// Values are stored row-major in (channel, row, col) order, 32-bit.
struct SignalTensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  SignalTensor() = default;
  SignalTensor(int c, int h, int w)
      : channels(c), height(h), width(w),
        data(static_cast<std::size_t>(c) * h * w, 0.0f) {}

  std::size_t size() const { return data.size(); }

  float& at(int c, int i, int j) {
    return data[(static_cast<std::size_t>(c) * height + i) * width + j];
  }
  float at(int c, int i, int j) const {
    return data[(static_cast<std::size_t>(c) * height + i) * width + j];
  }

  float* channel(int c) {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }
  const float* channel(int c) const {
    return data.data() + static_cast<std::size_t>(c) * height * width;
  }

  bool same_shape(const SignalTensor& o) const {
    return channels == o.channels && height == o.height && width == o.width;
  }
};

/// One layer's 4-D filter tensor, (out, in, row, col) order.
/// The atom for code channel c is the slice over (out, row, col).
struct FilterBank {
  int out_channels = 0;
  int in_channels = 0;
  int kernel_h = 0;
  int kernel_w = 0;
  std::vector<float> data;

  FilterBank() = default;
  FilterBank(int out, int in, int kh, int kw)
      : out_channels(out), in_channels(in), kernel_h(kh), kernel_w(kw),
        data(static_cast<std::size_t>(out) * in * kh * kw, 0.0f) {}

  std::size_t size() const { return data.size(); }

  float& at(int r, int c, int p, int q) {
    return data[((static_cast<std::size_t>(r) * in_channels + c) * kernel_h + p) *
                    kernel_w +
                q];
  }
  float at(int r, int c, int p, int q) const {
    return data[((static_cast<std::size_t>(r) * in_channels + c) * kernel_h + p) *
                    kernel_w +
                q];
  }
};

/// Full multi-channel convolution (flip-and-slide), Eq.-of-motion of the
/// generative recursion. Output is (out_channels, h+H-1, w+W-1).
SignalTensor conv_full(const FilterBank& filters, const SignalTensor& signal);

/// Valid (unflipped) correlation; the exact adjoint of conv_full.
/// Output is (in_channels, h-H+1, w-W+1).
SignalTensor corr_valid(const SignalTensor& signal, const FilterBank& filters);

/// Gradient of 1/2 ||residual||^2 w.r.t. a filter bank that maps `code`
/// to `residual`-sized output by full convolution. residual spatial dims
/// must equal code dims + kernel - 1.
FilterBank corr_filter_grad(const SignalTensor& residual, const SignalTensor& code,
                            int kernel_h, int kernel_w);

/// Elementwise soft-thresholding S_t(b) = relu(b-t) - relu(-b-t);
/// the proximal operator of t*|.|_1.
SignalTensor soft_threshold(const SignalTensor& signal, float threshold);

// Reductions accumulate in 64-bit.
double inner_product(const SignalTensor& a, const SignalTensor& b);
double norm_l1(const SignalTensor& t);
double norm_l2_sq(const SignalTensor& t);

std::size_t count_nonzero(const SignalTensor& t);
bool all_finite(const SignalTensor& t);
bool all_finite(const FilterBank& f);

} // namespace hcsc

#endif
