#ifndef HCSC_TEST_UTIL_HPP
#define HCSC_TEST_UTIL_HPP

// Independent 64-bit reference implementations used as test oracles. These
// follow the definitions by direct summation and never call the library's
// convolution kernels.

#include <cmath>
#include <random>
#include <vector>

#include "hcsc/tensor.hpp"

namespace hcsc::testutil {

inline std::vector<double> to_double(const std::vector<float>& v) {
  return std::vector<double>(v.begin(), v.end());
}

// out(r,a,b) = sum_c sum_{i,j} K(r,c,a-i,b-j) * x(c,i,j)
inline SignalTensor conv_full_ref(const FilterBank& k, const SignalTensor& x) {
  SignalTensor out(k.out_channels, x.height + k.kernel_h - 1,
                   x.width + k.kernel_w - 1);
  for (int r = 0; r < k.out_channels; ++r) {
    for (int a = 0; a < out.height; ++a) {
      for (int b = 0; b < out.width; ++b) {
        double acc = 0.0;
        for (int c = 0; c < x.channels; ++c) {
          for (int i = 0; i < x.height; ++i) {
            for (int j = 0; j < x.width; ++j) {
              const int p = a - i, q = b - j;
              if (p < 0 || p >= k.kernel_h || q < 0 || q >= k.kernel_w) continue;
              acc += static_cast<double>(k.at(r, c, p, q)) * x.at(c, i, j);
            }
          }
        }
        out.at(r, a, b) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

// out(c,i,j) = sum_r sum_{p,q} K(r,c,p,q) * y(r,i+p,j+q)
inline SignalTensor corr_valid_ref(const SignalTensor& y, const FilterBank& k) {
  SignalTensor out(k.in_channels, y.height - k.kernel_h + 1,
                   y.width - k.kernel_w + 1);
  for (int c = 0; c < k.in_channels; ++c) {
    for (int i = 0; i < out.height; ++i) {
      for (int j = 0; j < out.width; ++j) {
        double acc = 0.0;
        for (int r = 0; r < k.out_channels; ++r) {
          for (int p = 0; p < k.kernel_h; ++p) {
            for (int q = 0; q < k.kernel_w; ++q) {
              acc += static_cast<double>(k.at(r, c, p, q)) * y.at(r, i + p, j + q);
            }
          }
        }
        out.at(c, i, j) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

inline SignalTensor random_signal(int c, int h, int w, std::mt19937_64& rng,
                                  double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  SignalTensor t(c, h, w);
  for (float& v : t.data) v = static_cast<float>(gauss(rng));
  return t;
}

inline FilterBank random_bank(int out, int in, int kh, int kw,
                              std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  FilterBank f(out, in, kh, kw);
  for (float& v : f.data) v = static_cast<float>(gauss(rng));
  return f;
}

// 1/2 ||x_prev - A*x - B*u||^2 by direct summation in 64-bit
inline double fidelity_ref(const SignalTensor& x_prev, const FilterBank& A,
                           const SignalTensor& x, const FilterBank& B,
                           const SignalTensor& u) {
  const SignalTensor ax = conv_full_ref(A, x);
  const SignalTensor bu = conv_full_ref(B, u);
  double acc = 0.0;
  for (std::size_t n = 0; n < x_prev.size(); ++n) {
    const double d = static_cast<double>(x_prev.data[n]) - ax.data[n] - bu.data[n];
    acc += d * d;
  }
  return 0.5 * acc;
}

} // namespace hcsc::testutil

#endif
