#pragma once

// Closed-form families. Each ExactDistribution is a base family together
// with an affine frame (scale s != 0, shift t): the represented variable is
// s * X + t with X drawn from the base family. Keeping the frame separate
// makes affine maps exact for every family and lets compositions of affine
// maps reproduce parameters bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "distkit/error.hpp"

namespace distkit {

using Rng = std::mt19937_64;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Normal {
  double mean = 0.0;
  double sd = 1.0;
  friend bool operator==(const Normal&, const Normal&) = default;
};
struct Poisson {
  double lambda = 1.0;
  friend bool operator==(const Poisson&, const Poisson&) = default;
};
struct Binomial {
  int size = 1;
  double prob = 0.5;
  friend bool operator==(const Binomial&, const Binomial&) = default;
};
struct Exponential {
  double rate = 1.0;
  friend bool operator==(const Exponential&, const Exponential&) = default;
};
/// Shape / rate parameterization.
struct Gamma {
  double shape = 1.0;
  double rate = 1.0;
  friend bool operator==(const Gamma&, const Gamma&) = default;
};
struct Uniform {
  double min = 0.0;
  double max = 1.0;
  friend bool operator==(const Uniform&, const Uniform&) = default;
};
/// Chi-square with optional non-centrality.
struct ChiSq {
  double df = 1.0;
  double ncp = 0.0;
  friend bool operator==(const ChiSq&, const ChiSq&) = default;
};
struct Dirac {
  double location = 0.0;
  friend bool operator==(const Dirac&, const Dirac&) = default;
};

using Family = std::variant<Normal, Poisson, Binomial, Exponential, Gamma, Uniform, ChiSq, Dirac>;

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline void validate(const Family& f) {
  std::visit(
      overloaded{
          [](const Normal& d) {
            if (!(d.sd > 0.0) || !std::isfinite(d.mean) || !std::isfinite(d.sd))
              throw DomainError("Norm: sd must be positive and finite");
          },
          [](const Poisson& d) {
            if (!(d.lambda > 0.0) || !std::isfinite(d.lambda))
              throw DomainError("Pois: lambda must be positive");
          },
          [](const Binomial& d) {
            if (d.size < 1) throw DomainError("Binom: size must be >= 1");
            if (!(d.prob > 0.0 && d.prob < 1.0)) throw DomainError("Binom: prob must lie in (0,1)");
          },
          [](const Exponential& d) {
            if (!(d.rate > 0.0) || !std::isfinite(d.rate))
              throw DomainError("Exp: rate must be positive");
          },
          [](const Gamma& d) {
            if (!(d.shape > 0.0) || !(d.rate > 0.0) || !std::isfinite(d.shape) ||
                !std::isfinite(d.rate))
              throw DomainError("Gammad: shape and rate must be positive");
          },
          [](const Uniform& d) {
            if (!(d.min < d.max) || !std::isfinite(d.min) || !std::isfinite(d.max))
              throw DomainError("Unif: requires min < max");
          },
          [](const ChiSq& d) {
            if (!(d.df > 0.0) || !(d.ncp >= 0.0) || !std::isfinite(d.df) || !std::isfinite(d.ncp))
              throw DomainError("Chisq: requires df > 0 and ncp >= 0");
          },
          [](const Dirac& d) {
            if (!std::isfinite(d.location)) throw DomainError("Dirac: location must be finite");
          },
      },
      f);
}

// ---------------------------------------------------------------------------
// Non-central chi-square through its Poisson mixture
//   F(x) = sum_k e^{-l} l^k / k! * P(chi2_{df+2k} <= x),   l = ncp / 2,
// truncated once the neglected Poisson weight falls below 1e-14.

inline constexpr double kPoissonSeriesTail = 1e-14;

struct MixtureRange {
  long long lo;
  long long hi;
};

inline MixtureRange poisson_weight_range(double lambda) {
  boost::math::poisson_distribution<> pois(lambda);
  const double half = kPoissonSeriesTail / 2.0;
  long long lo = 0;
  if (boost::math::cdf(pois, 0.0) < half) {
    lo = static_cast<long long>(std::floor(lambda));
    while (lo > 0 && boost::math::cdf(pois, static_cast<double>(lo - 1)) >= half) --lo;
  }
  long long hi = static_cast<long long>(std::ceil(lambda));
  while (boost::math::cdf(boost::math::complement(pois, static_cast<double>(hi))) >= half) ++hi;
  return {lo, hi};
}

template <class Term>
double poisson_mixture(double lambda, Term term) {
  if (lambda == 0.0) return term(0);
  boost::math::poisson_distribution<> pois(lambda);
  const auto [lo, hi] = poisson_weight_range(lambda);
  double sum = 0.0;
  for (long long k = hi; k >= lo; --k) {
    sum += boost::math::pdf(pois, static_cast<double>(k)) * term(k);
  }
  return sum;
}

inline double chisq_cdf(double df, double ncp, double x) {
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return poisson_mixture(ncp / 2.0, [&](long long k) {
    return boost::math::gamma_p(df / 2.0 + static_cast<double>(k), x / 2.0);
  });
}

inline double chisq_sf(double df, double ncp, double x) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return poisson_mixture(ncp / 2.0, [&](long long k) {
    return boost::math::gamma_q(df / 2.0 + static_cast<double>(k), x / 2.0);
  });
}

inline double chisq_pdf(double df, double ncp, double x) {
  if (x < 0.0 || std::isinf(x)) return 0.0;
  if (x == 0.0) {
    if (df < 2.0) return kInf;
    if (df > 2.0) return 0.0;
    return 0.5 * std::exp(-ncp / 2.0);
  }
  return poisson_mixture(ncp / 2.0, [&](long long k) {
    return 0.5 * boost::math::gamma_p_derivative(df / 2.0 + static_cast<double>(k), x / 2.0);
  });
}

// Bisection for the point where a monotone function crosses `target`.
template <class Fn>
double bisect_increasing(Fn fn, double target, double lo, double hi) {
  for (int it = 0;
       it < 1100 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * std::abs(hi);
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fn(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

inline double chisq_quantile(double df, double ncp, double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return kInf;
  if (ncp == 0.0) return 2.0 * boost::math::gamma_p_inv(df / 2.0, u);
  double hi = df + ncp + 10.0 * std::sqrt(2.0 * (df + 2.0 * ncp)) + 10.0;
  while (chisq_cdf(df, ncp, hi) < u) hi *= 2.0;
  return bisect_increasing([&](double x) { return chisq_cdf(df, ncp, x); }, u, 0.0, hi);
}

// Smallest x with P(X > x) <= tail.
inline double chisq_upper_quantile(double df, double ncp, double tail) {
  if (tail <= 0.0) return kInf;
  if (tail >= 1.0) return 0.0;
  if (ncp == 0.0) return 2.0 * boost::math::gamma_q_inv(df / 2.0, tail);
  double hi = df + ncp + 10.0 * std::sqrt(2.0 * (df + 2.0 * ncp)) + 10.0;
  while (chisq_sf(df, ncp, hi) > tail) hi *= 2.0;
  return bisect_increasing([&](double x) { return -chisq_sf(df, ncp, x); }, -tail, 0.0, hi);
}

// ---------------------------------------------------------------------------
// Integer-supported families share search-based quantiles.

template <class Dist>
double int_cdf(const Dist& d, double x, double upper) {
  if (x < 0.0) return 0.0;
  const double k = std::floor(x);
  if (k >= upper) return 1.0;
  return boost::math::cdf(d, k);
}

template <class Dist>
double int_sf(const Dist& d, double x, double upper) {
  if (x < 0.0) return 1.0;
  const double k = std::floor(x);
  if (k >= upper) return 0.0;
  return boost::math::cdf(boost::math::complement(d, k));
}

// Smallest integer k in [0, upper] with cdf(k) >= u.
template <class Dist>
double int_quantile(const Dist& d, double u, double upper) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return upper;
  double g = 0.0;
  try {
    g = std::floor(boost::math::quantile(d, u));
  } catch (const std::exception&) {
    g = 0.0;
  }
  g = std::clamp(g, 0.0, std::isfinite(upper) ? upper : 1e300);
  while (g > 0.0 && int_cdf(d, g - 1.0, upper) >= u) g -= 1.0;
  while (g < upper && int_cdf(d, g, upper) < u) g += 1.0;
  return g;
}

// Smallest integer k in [0, upper] with sf(k) <= tail.
template <class Dist>
double int_upper_quantile(const Dist& d, double tail, double upper) {
  if (tail <= 0.0) return upper;
  if (tail >= 1.0) return 0.0;
  double g = 0.0;
  try {
    g = std::floor(boost::math::quantile(boost::math::complement(d, tail)));
  } catch (const std::exception&) {
    g = 0.0;
  }
  g = std::clamp(g, 0.0, std::isfinite(upper) ? upper : 1e300);
  while (g > 0.0 && int_sf(d, g - 1.0, upper) <= tail) g -= 1.0;
  while (g < upper && int_sf(d, g, upper) > tail) g += 1.0;
  return g;
}

// Nearest integer to x when x is within 1e-9 of it, else nullopt.
inline std::optional<double> integer_atom(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(r))) return r;
  return std::nullopt;
}

}  // namespace detail

/// A closed-form family seen through an affine frame.
class ExactDistribution {
 public:
  explicit ExactDistribution(Family f) : ExactDistribution(std::move(f), 1.0, 0.0) {}
  ExactDistribution(Family f, double scale, double shift)
      : family_(std::move(f)), scale_(scale), shift_(shift) {
    detail::validate(family_);
    if (!(scale_ != 0.0) || !std::isfinite(scale_) || !std::isfinite(shift_)) {
      throw DomainError("affine frame requires a finite non-zero scale");
    }
  }

  const Family& family() const noexcept { return family_; }
  double scale() const noexcept { return scale_; }
  double shift() const noexcept { return shift_; }
  bool identity_frame() const noexcept { return scale_ == 1.0 && shift_ == 0.0; }

  template <class T>
  bool holds() const noexcept {
    return std::holds_alternative<T>(family_);
  }

  bool is_discrete() const noexcept {
    return holds<Poisson>() || holds<Binomial>() || holds<Dirac>();
  }

  bool is_dirac() const noexcept { return holds<Dirac>(); }

  /// Location of a Dirac in the outer frame.
  double dirac_location() const { return scale_ * std::get<Dirac>(family_).location + shift_; }

  /// Compose the frame with y = a * x + b (a != 0).
  ExactDistribution affine(double a, double b) const {
    return ExactDistribution(family_, a * scale_, a * shift_ + b);
  }

  /// The family with the frame folded into its parameters, when the family
  /// is closed under that frame.
  std::optional<Family> canonical() const {
    const double s = scale_;
    const double t = shift_;
    return std::visit(
        detail::overloaded{
            [&](const Normal& d) -> std::optional<Family> {
              return Normal{s * d.mean + t, std::abs(s) * d.sd};
            },
            [&](const Uniform& d) -> std::optional<Family> {
              double a = s * d.min + t;
              double b = s * d.max + t;
              if (a > b) std::swap(a, b);
              return Uniform{a, b};
            },
            [&](const Dirac& d) -> std::optional<Family> { return Dirac{s * d.location + t}; },
            [&](const Exponential& d) -> std::optional<Family> {
              if (identity_frame()) return d;
              if (s > 0 && t == 0.0) return Exponential{d.rate / s};
              return std::nullopt;
            },
            [&](const Gamma& d) -> std::optional<Family> {
              if (identity_frame()) return d;
              if (s > 0 && t == 0.0) return Gamma{d.shape, d.rate / s};
              return std::nullopt;
            },
            [&](const auto& d) -> std::optional<Family> {
              if (identity_frame()) return d;
              return std::nullopt;
            },
        },
        family_);
  }

  // ---- constitutive functions -------------------------------------------

  double cdf(double x) const {
    if (std::isnan(x)) return x;
    const double z = (x - shift_) / scale_;
    if (scale_ > 0) return base_cdf(z);
    return base_sf_inclusive(z);
  }

  /// Density for continuous families, point mass for discrete ones.
  double pdf(double x) const {
    const double z = (x - shift_) / scale_;
    if (is_discrete()) return base_pmf(z);
    return base_pdf(z) / std::abs(scale_);
  }

  /// Generalized inverse inf{x : F(x) >= u}.
  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0,1]");
    if (scale_ > 0) return scale_ * base_quantile(u) + shift_;
    if (!is_discrete()) return scale_ * base_upper_quantile(u) + shift_;
    // Reflected discrete: largest base atom k with P(X >= k) >= u.
    if (holds<Dirac>()) return dirac_location();
    if (u == 0.0) return scale_ * base_support().second + shift_;
    const double j = base_upper_quantile(u);
    const double k = base_sf(j) == u ? j + 1.0 : j;
    return scale_ * k + shift_;
  }

  /// Smallest x with P(Y > x) <= tail; the complement-accurate upper quantile.
  double upper_quantile(double tail) const {
    if (!(tail >= 0.0 && tail <= 1.0)) throw DomainError("tail probability outside [0,1]");
    if (scale_ > 0) return scale_ * base_upper_quantile(tail) + shift_;
    if (!is_discrete()) return scale_ * base_quantile(tail) + shift_;
    // P(Y > y) <= tail  <=>  F_Y(y) >= 1 - tail.
    return quantile(1.0 - tail);
  }

  /// Support endpoints in the outer frame (may be infinite).
  std::pair<double, double> support() const {
    auto [lo, hi] = base_support();
    double a = scale_ * lo + shift_;
    double b = scale_ * hi + shift_;
    if (scale_ < 0) std::swap(a, b);
    return {a, b};
  }

  double mean() const { return scale_ * base_mean() + shift_; }
  double variance() const { return scale_ * scale_ * base_variance(); }

  double sample(Rng& rng) const { return scale_ * base_sample(rng) + shift_; }

  /// Atoms of a discrete family whose total mass is >= 1 - tail.
  /// Returns (support, probs) in increasing support order.
  std::pair<std::vector<double>, std::vector<double>> atoms(double tail) const {
    if (!is_discrete()) throw DomainError("atoms() on a continuous family");
    auto [lo, hi] = base_support();
    if (!std::isfinite(hi)) hi = base_upper_quantile(tail / 2.0);
    std::vector<double> xs;
    std::vector<double> ps;
    for (double k = lo; k <= hi; k += 1.0) {
      xs.push_back(scale_ * k + shift_);
      ps.push_back(base_pmf(k));
    }
    if (scale_ < 0) {
      std::reverse(xs.begin(), xs.end());
      std::reverse(ps.begin(), ps.end());
    }
    return {std::move(xs), std::move(ps)};
  }

  std::string name() const {
    return std::visit(detail::overloaded{
                          [](const Normal&) { return std::string("Norm"); },
                          [](const Poisson&) { return std::string("Pois"); },
                          [](const Binomial&) { return std::string("Binom"); },
                          [](const Exponential&) { return std::string("Exp"); },
                          [](const Gamma&) { return std::string("Gammad"); },
                          [](const Uniform&) { return std::string("Unif"); },
                          [](const ChiSq&) { return std::string("Chisq"); },
                          [](const Dirac&) { return std::string("Dirac"); },
                      },
                      family_);
  }

  friend bool operator==(const ExactDistribution& a, const ExactDistribution& b) {
    return a.scale_ == b.scale_ && a.shift_ == b.shift_ && a.family_ == b.family_;
  }

 private:
  // ---- base family (identity frame) -------------------------------------

  std::pair<double, double> base_support() const {
    return std::visit(
        detail::overloaded{
            [](const Normal&) { return std::pair{-kInf, kInf}; },
            [](const Poisson&) { return std::pair{0.0, kInf}; },
            [](const Binomial& d) { return std::pair{0.0, static_cast<double>(d.size)}; },
            [](const Exponential&) { return std::pair{0.0, kInf}; },
            [](const Gamma&) { return std::pair{0.0, kInf}; },
            [](const Uniform& d) { return std::pair{d.min, d.max}; },
            [](const ChiSq&) { return std::pair{0.0, kInf}; },
            [](const Dirac& d) { return std::pair{d.location, d.location}; },
        },
        family_);
  }

  double base_cdf(double x) const {
    using namespace boost::math;
    return std::visit(
        detail::overloaded{
            [&](const Normal& d) {
              if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
              return boost::math::cdf(normal_distribution<>(d.mean, d.sd), x);
            },
            [&](const Poisson& d) {
              return detail::int_cdf(poisson_distribution<>(d.lambda), x, kInf);
            },
            [&](const Binomial& d) {
              return detail::int_cdf(binomial_distribution<>(d.size, d.prob), x, d.size);
            },
            [&](const Exponential& d) { return x <= 0.0 ? 0.0 : -std::expm1(-d.rate * x); },
            [&](const Gamma& d) {
              if (x <= 0.0) return 0.0;
              if (std::isinf(x)) return 1.0;
              return gamma_p(d.shape, d.rate * x);
            },
            [&](const Uniform& d) {
              if (x <= d.min) return 0.0;
              if (x >= d.max) return 1.0;
              return (x - d.min) / (d.max - d.min);
            },
            [&](const ChiSq& d) { return detail::chisq_cdf(d.df, d.ncp, x); },
            [&](const Dirac& d) { return x >= d.location ? 1.0 : 0.0; },
        },
        family_);
  }

  // P(X > x)
  double base_sf(double x) const {
    using namespace boost::math;
    return std::visit(
        detail::overloaded{
            [&](const Normal& d) {
              if (std::isinf(x)) return x > 0 ? 0.0 : 1.0;
              return boost::math::cdf(complement(normal_distribution<>(d.mean, d.sd), x));
            },
            [&](const Poisson& d) {
              return detail::int_sf(poisson_distribution<>(d.lambda), x, kInf);
            },
            [&](const Binomial& d) {
              return detail::int_sf(binomial_distribution<>(d.size, d.prob), x, d.size);
            },
            [&](const Exponential& d) { return x <= 0.0 ? 1.0 : std::exp(-d.rate * x); },
            [&](const Gamma& d) {
              if (x <= 0.0) return 1.0;
              if (std::isinf(x)) return 0.0;
              return gamma_q(d.shape, d.rate * x);
            },
            [&](const Uniform& d) {
              if (x <= d.min) return 1.0;
              if (x >= d.max) return 0.0;
              return (d.max - x) / (d.max - d.min);
            },
            [&](const ChiSq& d) { return detail::chisq_sf(d.df, d.ncp, x); },
            [&](const Dirac& d) { return x >= d.location ? 0.0 : 1.0; },
        },
        family_);
  }

  // P(X >= x)
  double base_sf_inclusive(double x) const {
    if (!is_discrete()) return base_sf(x);
    if (holds<Dirac>()) return x <= std::get<Dirac>(family_).location ? 1.0 : 0.0;
    // Integer support: P(X >= x) = P(X > ceil(x) - 1).
    return base_sf(std::ceil(x) - 1.0);
  }

  double base_pmf(double x) const {
    using namespace boost::math;
    if (holds<Dirac>()) {
      const double c = std::get<Dirac>(family_).location;
      return std::abs(x - c) <= 1e-9 * std::max(1.0, std::abs(c)) ? 1.0 : 0.0;
    }
    const auto k = detail::integer_atom(x);
    if (!k || *k < 0.0) return 0.0;
    if (const auto* p = std::get_if<Poisson>(&family_)) {
      return boost::math::pdf(poisson_distribution<>(p->lambda), *k);
    }
    const auto& b = std::get<Binomial>(family_);
    if (*k > b.size) return 0.0;
    return boost::math::pdf(binomial_distribution<>(b.size, b.prob), *k);
  }

  double base_pdf(double x) const {
    using namespace boost::math;
    return std::visit(
        detail::overloaded{
            [&](const Normal& d) {
              if (std::isinf(x)) return 0.0;
              return boost::math::pdf(normal_distribution<>(d.mean, d.sd), x);
            },
            [&](const Exponential& d) { return x < 0.0 ? 0.0 : d.rate * std::exp(-d.rate * x); },
            [&](const Gamma& d) {
              if (x < 0.0 || std::isinf(x)) return 0.0;
              if (x == 0.0) {
                if (d.shape < 1.0) return kInf;
                return d.shape == 1.0 ? d.rate : 0.0;
              }
              return d.rate * gamma_p_derivative(d.shape, d.rate * x);
            },
            [&](const Uniform& d) {
              return (x >= d.min && x <= d.max) ? 1.0 / (d.max - d.min) : 0.0;
            },
            [&](const ChiSq& d) { return detail::chisq_pdf(d.df, d.ncp, x); },
            [&](const auto&) { return base_pmf(x); },
        },
        family_);
  }

  double base_quantile(double u) const {
    using namespace boost::math;
    return std::visit(
        detail::overloaded{
            [&](const Normal& d) {
              if (u <= 0.0) return -kInf;
              if (u >= 1.0) return kInf;
              return boost::math::quantile(normal_distribution<>(d.mean, d.sd), u);
            },
            [&](const Poisson& d) {
              if (u >= 1.0) return kInf;
              return detail::int_quantile(poisson_distribution<>(d.lambda), u, kInf);
            },
            [&](const Binomial& d) {
              return detail::int_quantile(binomial_distribution<>(d.size, d.prob), u,
                                          static_cast<double>(d.size));
            },
            [&](const Exponential& d) {
              if (u >= 1.0) return kInf;
              return -std::log1p(-u) / d.rate;
            },
            [&](const Gamma& d) {
              if (u <= 0.0) return 0.0;
              if (u >= 1.0) return kInf;
              return gamma_p_inv(d.shape, u) / d.rate;
            },
            [&](const Uniform& d) { return d.min + u * (d.max - d.min); },
            [&](const ChiSq& d) { return detail::chisq_quantile(d.df, d.ncp, u); },
            [&](const Dirac& d) { return d.location; },
        },
        family_);
  }

  // Smallest x with P(X > x) <= tail.
  double base_upper_quantile(double tail) const {
    using namespace boost::math;
    return std::visit(
        detail::overloaded{
            [&](const Normal& d) {
              if (tail <= 0.0) return kInf;
              if (tail >= 1.0) return -kInf;
              return boost::math::quantile(complement(normal_distribution<>(d.mean, d.sd), tail));
            },
            [&](const Poisson& d) {
              if (tail <= 0.0) return kInf;
              return detail::int_upper_quantile(poisson_distribution<>(d.lambda), tail, kInf);
            },
            [&](const Binomial& d) {
              return detail::int_upper_quantile(binomial_distribution<>(d.size, d.prob), tail,
                                                static_cast<double>(d.size));
            },
            [&](const Exponential& d) {
              if (tail <= 0.0) return kInf;
              if (tail >= 1.0) return 0.0;
              return -std::log(tail) / d.rate;
            },
            [&](const Gamma& d) {
              if (tail <= 0.0) return kInf;
              if (tail >= 1.0) return 0.0;
              return gamma_q_inv(d.shape, tail) / d.rate;
            },
            [&](const Uniform& d) { return d.max - tail * (d.max - d.min); },
            [&](const ChiSq& d) { return detail::chisq_upper_quantile(d.df, d.ncp, tail); },
            [&](const Dirac& d) { return d.location; },
        },
        family_);
  }

  double base_mean() const {
    return std::visit(detail::overloaded{
                          [](const Normal& d) { return d.mean; },
                          [](const Poisson& d) { return d.lambda; },
                          [](const Binomial& d) { return d.size * d.prob; },
                          [](const Exponential& d) { return 1.0 / d.rate; },
                          [](const Gamma& d) { return d.shape / d.rate; },
                          [](const Uniform& d) { return 0.5 * (d.min + d.max); },
                          [](const ChiSq& d) { return d.df + d.ncp; },
                          [](const Dirac& d) { return d.location; },
                      },
                      family_);
  }

  double base_variance() const {
    return std::visit(detail::overloaded{
                          [](const Normal& d) { return d.sd * d.sd; },
                          [](const Poisson& d) { return d.lambda; },
                          [](const Binomial& d) { return d.size * d.prob * (1.0 - d.prob); },
                          [](const Exponential& d) { return 1.0 / (d.rate * d.rate); },
                          [](const Gamma& d) { return d.shape / (d.rate * d.rate); },
                          [](const Uniform& d) {
                            const double w = d.max - d.min;
                            return w * w / 12.0;
                          },
                          [](const ChiSq& d) { return 2.0 * (d.df + 2.0 * d.ncp); },
                          [](const Dirac&) { return 0.0; },
                      },
                      family_);
  }

  double base_sample(Rng& rng) const {
    return std::visit(
        detail::overloaded{
            [&](const Normal& d) { return std::normal_distribution<double>(d.mean, d.sd)(rng); },
            [&](const Poisson& d) {
              return static_cast<double>(std::poisson_distribution<long long>(d.lambda)(rng));
            },
            [&](const Binomial& d) {
              return static_cast<double>(std::binomial_distribution<int>(d.size, d.prob)(rng));
            },
            [&](const Exponential& d) { return std::exponential_distribution<double>(d.rate)(rng); },
            [&](const Gamma& d) {
              return std::gamma_distribution<double>(d.shape, 1.0 / d.rate)(rng);
            },
            [&](const Uniform& d) { return std::uniform_real_distribution<double>(d.min, d.max)(rng); },
            [&](const ChiSq& d) {
              double k = 0.0;
              if (d.ncp > 0.0) {
                k = static_cast<double>(std::poisson_distribution<long long>(d.ncp / 2.0)(rng));
              }
              return std::gamma_distribution<double>(d.df / 2.0 + k, 2.0)(rng);
            },
            [&](const Dirac& d) { return d.location; },
        },
        family_);
  }

  Family family_;
  double scale_;
  double shift_;
};

}  // namespace distkit
