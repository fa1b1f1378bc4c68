#include <doctest.h>

#include <random>

#include "hcsc/tensor.hpp"
#include "test_util.hpp"

using namespace hcsc;
namespace tu = hcsc::testutil;

TEST_CASE("conv_full: zero signal gives zero output of the right shape") {
  std::mt19937_64 rng(1);
  FilterBank k = tu::random_bank(3, 2, 4, 3, rng);
  SignalTensor x(2, 5, 6);
  SignalTensor y = conv_full(k, x);
  CHECK(y.channels == 3);
  CHECK(y.height == 8);
  CHECK(y.width == 8);
  for (float v : y.data) CHECK(v == 0.0f);
}

TEST_CASE("conv_full: unit impulse reproduces the flipped kernel") {
  FilterBank k(1, 1, 2, 2);
  k.at(0, 0, 0, 0) = 1.0f;
  k.at(0, 0, 0, 1) = 2.0f;
  k.at(0, 0, 1, 0) = 3.0f;
  k.at(0, 0, 1, 1) = 4.0f;
  SignalTensor x(1, 1, 1);
  x.at(0, 0, 0) = 1.0f;
  SignalTensor y = conv_full(k, x);
  REQUIRE(y.height == 2);
  REQUIRE(y.width == 2);
  // true convolution of a spike: output(a,b) = k(a,b) placed directly, which
  // is the flip-and-slide result of sliding the flipped kernel
  CHECK(y.at(0, 0, 0) == doctest::Approx(1.0));
  CHECK(y.at(0, 0, 1) == doctest::Approx(2.0));
  CHECK(y.at(0, 1, 0) == doctest::Approx(3.0));
  CHECK(y.at(0, 1, 1) == doctest::Approx(4.0));
}

TEST_CASE("conv_full: MNIST layer-1 geometry 24x24 -> 28x28") {
  std::mt19937_64 rng(2);
  FilterBank k = tu::random_bank(1, 1, 5, 5, rng);
  SignalTensor x = tu::random_signal(1, 24, 24, rng);
  SignalTensor y = conv_full(k, x);
  CHECK(y.height == 28);
  CHECK(y.width == 28);
}

TEST_CASE("conv_full matches the 64-bit direct-sum oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> dim(1, 6);
    const int in = dim(rng), out = dim(rng);
    const int kh = dim(rng), kw = dim(rng);
    const int h = dim(rng) + 2, w = dim(rng) + 2;
    FilterBank k = tu::random_bank(out, in, kh, kw, rng);
    SignalTensor x = tu::random_signal(in, h, w, rng);
    SignalTensor got = conv_full(k, x);
    SignalTensor want = tu::conv_full_ref(k, x);
    REQUIRE(got.same_shape(want));
    for (std::size_t n = 0; n < got.size(); ++n) {
      CHECK(got.data[n] == doctest::Approx(want.data[n]).epsilon(1e-5));
    }
  }
}

TEST_CASE("conv_full rejects channel mismatch, naming both shapes") {
  FilterBank k(1, 2, 3, 3);
  SignalTensor x(3, 5, 5);
  CHECK_THROWS_AS(conv_full(k, x), ShapeError);
  try {
    conv_full(k, x);
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("3x5x5") != std::string::npos);
    CHECK(msg.find("1x2x3x3") != std::string::npos);
  }
}

TEST_CASE("conv_full is linear") {
  std::mt19937_64 rng(4);
  FilterBank k = tu::random_bank(2, 2, 3, 3, rng);
  SignalTensor x = tu::random_signal(2, 6, 6, rng);
  SignalTensor y = tu::random_signal(2, 6, 6, rng);
  const float a = 0.7f, b = -1.3f;
  SignalTensor mix(2, 6, 6);
  for (std::size_t n = 0; n < mix.size(); ++n) {
    mix.data[n] = a * x.data[n] + b * y.data[n];
  }
  SignalTensor lhs = conv_full(k, mix);
  SignalTensor cx = conv_full(k, x);
  SignalTensor cy = conv_full(k, y);
  for (std::size_t n = 0; n < lhs.size(); ++n) {
    const float rhs = a * cx.data[n] + b * cy.data[n];
    CHECK(lhs.data[n] == doctest::Approx(rhs).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("corr_valid: zero signal, shapes, and kernel-too-large error") {
  std::mt19937_64 rng(5);
  FilterBank k = tu::random_bank(1, 1, 5, 5, rng);
  SignalTensor y(1, 28, 28);
  SignalTensor g = corr_valid(y, k);
  CHECK(g.height == 24);
  CHECK(g.width == 24);
  for (float v : g.data) CHECK(v == 0.0f);

  SignalTensor tiny(1, 3, 3);
  CHECK_THROWS_AS(corr_valid(tiny, k), ShapeError);
}

TEST_CASE("adjoint identity <A*x, y> = <x, y star A>") {
  std::mt19937_64 rng(6);
  int trials = 0;
  for (; trials < 120; ++trials) {
    std::uniform_int_distribution<int> dim(1, 5);
    const int in = dim(rng), out = dim(rng);
    const int kh = dim(rng), kw = dim(rng);
    const int h = dim(rng) + 1, w = dim(rng) + 1;
    FilterBank a = tu::random_bank(out, in, kh, kw, rng);
    SignalTensor x = tu::random_signal(in, h, w, rng);
    SignalTensor y = tu::random_signal(out, h + kh - 1, w + kw - 1, rng);
    const double lhs = inner_product(conv_full(a, x), y);
    const double rhs = inner_product(x, corr_valid(y, a));
    CHECK(std::abs(lhs - rhs) <= 1e-5 * (1.0 + std::abs(lhs)));
  }
  CHECK(trials >= 100);
}

TEST_CASE("corr_valid matches the direct-sum oracle") {
  std::mt19937_64 rng(7);
  FilterBank k = tu::random_bank(3, 2, 2, 3, rng);
  SignalTensor y = tu::random_signal(3, 6, 7, rng);
  SignalTensor got = corr_valid(y, k);
  SignalTensor want = tu::corr_valid_ref(y, k);
  REQUIRE(got.same_shape(want));
  for (std::size_t n = 0; n < got.size(); ++n) {
    CHECK(got.data[n] == doctest::Approx(want.data[n]).epsilon(1e-5));
  }
}

TEST_CASE("corr_filter_grad: zero residual and stationary point") {
  std::mt19937_64 rng(8);
  SignalTensor code = tu::random_signal(1, 2, 2, rng);
  SignalTensor zero_res(1, 3, 3);
  FilterBank g = corr_filter_grad(zero_res, code, 2, 2);
  for (float v : g.data) CHECK(v == 0.0f);

  // x0 = A*x1 makes the residual zero, hence a zero gradient
  FilterBank a = tu::random_bank(1, 1, 2, 2, rng);
  SignalTensor x1 = tu::random_signal(1, 4, 4, rng);
  SignalTensor x0 = conv_full(a, x1);
  SignalTensor res = conv_full(a, x1);
  for (std::size_t n = 0; n < res.size(); ++n) res.data[n] -= x0.data[n];
  FilterBank g2 = corr_filter_grad(res, x1, 2, 2);
  for (float v : g2.data) CHECK(v == 0.0f);
}

TEST_CASE("corr_filter_grad matches central finite differences") {
  // loss(A) = 1/2 ||x0 - A*x||^2; gradient w.r.t. A is corr of residual with x
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const int kh = 2, kw = 2;
    FilterBank a = tu::random_bank(1, 1, kh, kw, rng);
    SignalTensor x = tu::random_signal(1, 2, 2, rng);
    SignalTensor x0 = tu::random_signal(1, 3, 3, rng);

    SignalTensor res = tu::conv_full_ref(a, x);
    for (std::size_t n = 0; n < res.size(); ++n) res.data[n] -= x0.data[n];
    FilterBank grad = corr_filter_grad(res, x, kh, kw);

    auto loss = [&](const FilterBank& f) {
      const SignalTensor ax = tu::conv_full_ref(f, x);
      double acc = 0.0;
      for (std::size_t n = 0; n < ax.size(); ++n) {
        const double d = static_cast<double>(ax.data[n]) - x0.data[n];
        acc += d * d;
      }
      return 0.5 * acc;
    };
    const float eps = 1e-3f;
    for (std::size_t n = 0; n < a.size(); ++n) {
      FilterBank plus = a, minus = a;
      plus.data[n] += eps;
      minus.data[n] -= eps;
      const double fd = (loss(plus) - loss(minus)) / (2.0 * eps);
      CHECK(grad.data[n] ==
            doctest::Approx(fd).epsilon(1e-3).scale(std::abs(fd) + 1.0));
    }
  }
}

TEST_CASE("corr_filter_grad rejects incompatible spatial dims") {
  SignalTensor res(1, 4, 4);
  SignalTensor code(1, 2, 2);
  CHECK_THROWS_AS(corr_filter_grad(res, code, 2, 2), ShapeError);
}

TEST_CASE("soft_threshold point values and identity at zero") {
  SignalTensor t(1, 1, 3);
  t.data = {2.0f, -0.5f, -3.0f};
  SignalTensor s = soft_threshold(t, 1.0f);
  CHECK(s.data[0] == doctest::Approx(1.0));
  CHECK(s.data[1] == doctest::Approx(0.0));
  CHECK(s.data[2] == doctest::Approx(-2.0));

  SignalTensor id = soft_threshold(t, 0.0f);
  for (std::size_t n = 0; n < t.size(); ++n) CHECK(id.data[n] == t.data[n]);

  CHECK_THROWS_AS(soft_threshold(t, -0.1f), ArgumentError);
}

TEST_CASE("soft_threshold equals the grid-search argmin of the prox problem") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  std::uniform_real_distribution<double> lam_d(0.0, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double b = unif(rng);
    const double lam = lam_d(rng);
    // dense grid search over u of 1/2 (u-b)^2 + lam |u|
    double best_u = -4.0, best_v = 1e300;
    for (double u = -4.0; u <= 4.0; u += 1e-3) {
      const double v = 0.5 * (u - b) * (u - b) + lam * std::abs(u);
      if (v < best_v) {
        best_v = v;
        best_u = u;
      }
    }
    SignalTensor t(1, 1, 1);
    t.data[0] = static_cast<float>(b);
    const float got = soft_threshold(t, static_cast<float>(lam)).data[0];
    CHECK(std::abs(got - best_u) <= 1.5e-3);
  }
}

TEST_CASE("soft_threshold is nonexpansive") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    SignalTensor a = tu::random_signal(1, 4, 4, rng);
    SignalTensor b = tu::random_signal(1, 4, 4, rng);
    const float lam = 0.3f;
    SignalTensor sa = soft_threshold(a, lam);
    SignalTensor sb = soft_threshold(b, lam);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) {
      const double ds = static_cast<double>(sa.data[n]) - sb.data[n];
      const double d = static_cast<double>(a.data[n]) - b.data[n];
      num += ds * ds;
      den += d * d;
    }
    CHECK(num <= den + 1e-9);
  }
}

TEST_CASE("reductions: zero tensor, hand values, and <t,t> = l2^2") {
  SignalTensor z(2, 2, 2);
  CHECK(norm_l1(z) == 0.0);
  CHECK(norm_l2_sq(z) == 0.0);
  CHECK(inner_product(z, z) == 0.0);

  SignalTensor t(1, 1, 2);
  t.data = {3.0f, -4.0f};
  CHECK(norm_l1(t) == doctest::Approx(7.0));
  CHECK(norm_l2_sq(t) == doctest::Approx(25.0));

  std::mt19937_64 rng(12);
  SignalTensor r = tu::random_signal(3, 4, 5, rng);
  CHECK(inner_product(r, r) == doctest::Approx(norm_l2_sq(r)));
}

TEST_CASE("shape law sweep over random valid shapes") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<int> dim(1, 7);
    const int in = dim(rng), out = dim(rng);
    const int kh = dim(rng), kw = dim(rng);
    const int h = kh + dim(rng), w = kw + dim(rng);
    FilterBank k = tu::random_bank(out, in, kh, kw, rng);
    SignalTensor x = tu::random_signal(in, h, w, rng);
    SignalTensor y = conv_full(k, x);
    CHECK(y.channels == out);
    CHECK(y.height == h + kh - 1);
    CHECK(y.width == w + kw - 1);
    SignalTensor back = corr_valid(y, k);
    CHECK(back.channels == in);
    CHECK(back.height == h);
    CHECK(back.width == w);
    FilterBank g = corr_filter_grad(y, x, kh, kw);
    CHECK(g.out_channels == out);
    CHECK(g.in_channels == in);
  }
}
