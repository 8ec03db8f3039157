#include <catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "distkit/fft.hpp"

using namespace distkit;
using fft::Complex;
using fft::ComplexSeq;

namespace {

// Defining sums, evaluated directly.
ComplexSeq naive_dft(const ComplexSeq& x) {
  const std::size_t m = x.size();
  ComplexSeq out(m);
  for (std::size_t n = 0; n < m; ++n) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>((j * n) % m) / static_cast<double>(m);
      s += x[j] * Complex(std::cos(a), std::sin(a));
    }
    out[n] = s / static_cast<double>(m);
  }
  return out;
}

ComplexSeq naive_idft(const ComplexSeq& x) {
  const std::size_t m = x.size();
  ComplexSeq out(m);
  for (std::size_t j = 0; j < m; ++j) {
    Complex s = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>((j * n) % m) / static_cast<double>(m);
      s += x[n] * Complex(std::cos(a), std::sin(a));
    }
    out[j] = s;
  }
  return out;
}

std::vector<double> direct_circular(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  std::vector<double> z(m, 0.0);
  for (std::size_t n = 0; n < m; ++n) {
    for (std::size_t j = 0; j < m; ++j) z[n] += x[j] * y[(n + m - j) % m];
  }
  return z;
}

std::vector<double> random_probs(std::size_t m, std::mt19937_64& rng, std::size_t support = 0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(m, 0.0);
  const std::size_t k = support == 0 ? m : support;
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += p[i] = u(rng);
  for (auto& v : p) v /= s;
  return p;
}

double max_abs(const ComplexSeq& a, const ComplexSeq& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double max_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("dft of a delta and of a constant") {
  const ComplexSeq delta = fft::dft(std::vector<double>{1, 0, 0, 0});
  for (const auto& v : delta) CHECK(std::abs(v - Complex(0.25, 0)) < 1e-15);
  const ComplexSeq ones = fft::dft(std::vector<double>{1, 1, 1, 1});
  CHECK(std::abs(ones[0] - Complex(1, 0)) < 1e-15);
  for (int i = 1; i < 4; ++i) CHECK(std::abs(ones[i]) < 1e-15);
}

TEST_CASE("idft of the constant transform and round trip") {
  const ComplexSeq back = fft::idft(ComplexSeq{1, 0, 0, 0});
  for (const auto& v : back) CHECK(std::abs(v - Complex(1, 0)) < 1e-15);
  const std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6};
  const ComplexSeq rt = fft::idft(fft::dft(x));
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(rt[i] - Complex(x[i], 0)) < 1e-12);
}

TEST_CASE("fast transform matches the defining sum") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (std::size_t m : {1u, 2u, 64u, 128u, 1024u, 12u, 7u}) {
    ComplexSeq x(m);
    for (auto& v : x) v = Complex(g(rng), g(rng));
    CHECK(max_abs(fft::dft(x), naive_dft(x)) < 1e-12);
    CHECK(max_abs(fft::idft(x), naive_idft(x)) < 1e-12 * static_cast<double>(m));
  }
}

TEST_CASE("transform is linear") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  ComplexSeq x(256), y(256), z(256);
  const Complex a(0.3, -1.2), b(2.0, 0.5);
  for (std::size_t i = 0; i < 256; ++i) {
    x[i] = Complex(g(rng), g(rng));
    y[i] = Complex(g(rng), g(rng));
    z[i] = a * x[i] + b * y[i];
  }
  const ComplexSeq xh = fft::dft(x), yh = fft::dft(y), zh = fft::dft(z);
  double d = 0.0;
  for (std::size_t i = 0; i < 256; ++i) d = std::max(d, std::abs(zh[i] - (a * xh[i] + b * yh[i])));
  CHECK(d < 1e-12);
}

TEST_CASE("circular convolution: identity, coins and the direct sum") {
  std::mt19937_64 rng(9);
  const std::vector<double> y = random_probs(16, rng);
  std::vector<double> delta(16, 0.0);
  delta[0] = 1.0;
  CHECK(max_abs(fft::circular_convolve(delta, y), y) < 1e-15);

  const auto coins = fft::circular_convolve(std::vector<double>{.5, .5, 0, 0}, std::vector<double>{.5, .5, 0, 0});
  CHECK(max_abs(coins, {.25, .5, .25, 0}) < 1e-15);

  const auto a = random_probs(256, rng), b = random_probs(256, rng);
  const auto z = fft::circular_convolve(a, b);
  CHECK(max_abs(z, direct_circular(a, b)) < 1e-12);
  double s = 0.0;
  for (double v : z) s += v;
  CHECK(std::abs(s - 1.0) < 1e-10);

  CHECK_THROWS_AS(fft::circular_convolve(a, std::vector<double>(128, 0.0)), LengthMismatch);
}

TEST_CASE("convolution power against iterated binary convolution") {
  std::mt19937_64 rng(10);
  const auto x = random_probs(64, rng);
  CHECK(max_abs(fft::circular_convpow(x, 1), x) < 1e-12);
  CHECK(max_abs(fft::circular_convpow(x, 2), fft::circular_convolve(x, x)) < 1e-12);

  const auto p = random_probs(1024, rng, 100);  // padded: 10 * 100 < 1024
  std::vector<double> acc = p;
  for (int k = 1; k < 10; ++k) acc = fft::circular_convolve(acc, p);
  CHECK(max_abs(fft::circular_convpow(p, 10), acc) < 1e-10);
}

TEST_CASE("complex residue above tolerance is an error") {
  // A non-Hermitian transform has a genuinely complex inverse.
  ComplexSeq xh{0.0, Complex(0.0, 1.0), 0.0, 0.0};
  const ComplexSeq z = fft::idft(xh);
  double im = 0.0;
  for (const auto& v : z) im = std::max(im, std::abs(v.imag()));
  CHECK(im > fft::kImagTolerance);
  CHECK_THROWS_AS(fft::detail::real_part(z), ResidueError);
}

TEST_CASE("fast path is far below quadratic cost") {
  auto run = [](std::size_t m) {
    ComplexSeq x(m, Complex(1.0, 0.0));
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < 3; ++r) x = fft::dft(x);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  const double small = run(std::size_t{1} << 12);
  const double large = run(std::size_t{1} << 16);
  // The quadratic ratio would be 256.
  CHECK(large / std::max(small, 1e-6) < 64.0);
}
