#pragma once

// Discrete Fourier transform with the normalization carried by the forward
// transform:
//
//   dft(x)_n  = (1/m) * sum_j x_j * w^(j n),   w = exp(-2 pi i / m)
//   idft(X)_j =         sum_n X_n * w^(-j n)
//
// Under this convention the circular convolution z = x * y satisfies
// dft(z) = m * dft(x) * dft(y), and the N-fold power satisfies
// dft(x^{*N}) = m^(N-1) * dft(x)^N. Most FFT references put the 1/m on the
// inverse instead; do not mix the two.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "distkit/error.hpp"

namespace distkit::fft {

using Complex = std::complex<double>;
using ComplexSeq = std::vector<Complex>;
using ProbSeq = std::vector<double>;

/// Largest tolerated imaginary residue after an inverse transform.
inline constexpr double kImagTolerance = 1e-9;

namespace detail {

// Unnormalized transform with kernel exp(sign * 2 pi i j n / m), in place.
inline void radix2(std::span<Complex> a, int sign) {
  const std::size_t m = a.size();
  if (m <= 1) return;

  for (std::size_t i = 1, j = 0; i < m; ++i) {
    std::size_t bit = m >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  // Twiddles are evaluated directly rather than by recurrence; the
  // recurrence loses about log2(m) bits at m = 2^20.
  std::vector<Complex> tw(m / 2);
  const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(m);
  for (std::size_t k = 0; k < m / 2; ++k) {
    const double ang = base * static_cast<double>(k);
    tw[k] = Complex(std::cos(ang), std::sin(ang));
  }

  for (std::size_t len = 2; len <= m; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = m / len;
    for (std::size_t start = 0; start < m; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex u = a[start + k];
        const Complex v = a[start + k + half] * tw[k * stride];
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

inline ComplexSeq naive(std::span<const Complex> x, int sign) {
  const std::size_t m = x.size();
  ComplexSeq out(m);
  const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(m);
  for (std::size_t n = 0; n < m; ++n) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j) {
      // (j*n) mod m keeps the angle argument small and exact.
      const double ang = base * static_cast<double>((j * n) % m);
      acc += x[j] * Complex(std::cos(ang), std::sin(ang));
    }
    out[n] = acc;
  }
  return out;
}

inline ComplexSeq transform(std::span<const Complex> x, int sign) {
  if (std::has_single_bit(x.size())) {
    ComplexSeq a(x.begin(), x.end());
    radix2(a, sign);
    return a;
  }
  return naive(x, sign);
}

inline Complex ipow(Complex z, unsigned long long n) {
  Complex result{1.0, 0.0};
  while (n > 0) {
    if (n & 1ULL) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

// Real part of an inverse transform, with the residue checks shared by
// circular_convolve and circular_convpow. Negative round-off is clamped.
inline ProbSeq real_part(const ComplexSeq& z) {
  ProbSeq out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(z[i].imag()) >= kImagTolerance) {
      throw ResidueError("imaginary residue " + std::to_string(z[i].imag()) +
                         " at index " + std::to_string(i) +
                         " exceeds tolerance; input is probably not padded");
    }
    out[i] = std::max(z[i].real(), 0.0);
  }
  return out;
}

inline ComplexSeq to_complex(std::span<const double> x) {
  ComplexSeq out(x.size());
  std::transform(x.begin(), x.end(), out.begin(),
                 [](double v) { return Complex(v, 0.0); });
  return out;
}

}  // namespace detail

/// Forward transform, including the 1/m factor. Power-of-two lengths take
/// the radix-2 path; other lengths fall back to direct summation.
inline ComplexSeq dft(std::span<const Complex> x) {
  if (x.empty()) throw DomainError("dft of an empty sequence");
  ComplexSeq out = detail::transform(x, -1);
  const double inv = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= inv;
  return out;
}

/// Inverse of dft; applies the conjugate kernel with no extra factor.
inline ComplexSeq idft(std::span<const Complex> xhat) {
  if (xhat.empty()) throw DomainError("idft of an empty sequence");
  return detail::transform(xhat, +1);
}

inline ComplexSeq dft(std::span<const double> x) { return dft(detail::to_complex(x)); }

/// z_n = sum_j x_j y_{(n-j) mod m}, computed as idft(m * dft(x) * dft(y)).
inline ProbSeq circular_convolve(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw LengthMismatch("circular_convolve: lengths " + std::to_string(x.size()) +
                         " and " + std::to_string(y.size()) + " differ");
  }
  if (x.empty()) throw DomainError("circular_convolve of empty sequences");
  const double m = static_cast<double>(x.size());
  ComplexSeq xh = dft(x);
  const ComplexSeq yh = dft(y);
  for (std::size_t i = 0; i < xh.size(); ++i) xh[i] = m * xh[i] * yh[i];
  return detail::real_part(idft(xh));
}

/// N-fold circular self-convolution, idft(m^(N-1) * dft(x)^N).
///
/// The caller pads x so that the N-fold support fits in one period.
/// m^(N-1) overflows quickly, so the power is taken as (m * xhat)^N / m,
/// which is the same quantity.
inline ProbSeq circular_convpow(std::span<const double> x, unsigned long long n) {
  if (n == 0) throw DomainError("circular_convpow requires N >= 1");
  if (x.empty()) throw DomainError("circular_convpow of an empty sequence");
  if (n == 1) return ProbSeq(x.begin(), x.end());
  const double m = static_cast<double>(x.size());
  ComplexSeq xh = dft(x);
  for (auto& v : xh) v = detail::ipow(m * v, n) / m;
  return detail::real_part(idft(xh));
}

/// Smallest power of two that is >= n (and >= 1).
inline std::size_t next_pow2(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 1)); }

}  // namespace distkit::fft
