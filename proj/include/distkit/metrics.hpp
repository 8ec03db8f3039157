#pragma once

// Distances between distributions and a direct-summation reference for
// lattice convolution powers.
//
//   d_v(P, Q) = 1/2 * integral |p - q| dmu    (mu = Lebesgue + counting)
//   d_k(P, Q) = sup_t |P(-inf, t] - Q(-inf, t]|

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "distkit/distribution.hpp"
#include "distkit/error.hpp"
#include "distkit/options.hpp"
#include "distkit/transform.hpp"

namespace distkit {

namespace detail {

// Mass dropped when an exact discrete family is listed atom by atom.
inline constexpr double kMetricTail = 1e-16;
// Range used for exact continuous families.
inline constexpr double kMetricEps = 1e-15;

struct AtomList {
  std::vector<double> x;
  std::vector<double> p;  // absolute masses (already multiplied by the weight)
  double missing = 0.0;   // discrete mass not listed
};

inline AtomList atom_list(const Distribution& d) {
  AtomList a;
  const Carrier c = d.carrier();
  if (c == Carrier::Continuous) return a;
  double weight = 1.0;
  std::optional<DiscreteDistribution> disc;
  if (const auto* m = d.get_if<LebDecDistribution>()) {
    weight = m->disc_weight();
    if (weight > 0) disc = m->disc_part();
  } else {
    disc = to_discrete(d, kMetricTail);
  }
  if (!disc) return a;
  a.x = disc->support();
  a.p = disc->probs();
  double s = 0.0;
  for (auto& v : a.p) {
    v *= weight;
    s += v;
  }
  a.missing = std::max(weight - s, 0.0);
  // A truncated listing of an exact family that still sums to one (in
  // floating point) has nothing missing.
  return a;
}

// Density of the absolutely continuous part, scaled by its weight.
inline double ac_density(const Distribution& d, double x) {
  if (d.carrier() == Carrier::Discrete) return 0.0;
  const double v = pdf(d, x);
  return std::isfinite(v) ? v : 0.0;
}

inline double ac_weight(const Distribution& d) {
  if (const auto* m = d.get_if<LebDecDistribution>()) return m->ac_weight();
  return d.carrier() == Carrier::Continuous ? 1.0 : 0.0;
}

inline double ac_cdf(const Distribution& d, double x) {
  if (const auto* m = d.get_if<LebDecDistribution>()) return m->ac_weight() * m->ac_part().cdf(x);
  return d.carrier() == Carrier::Continuous ? cdf(d, x) : 0.0;
}

// Knots of tabulated continuous parts.
inline const std::vector<double>* ac_knots(const Distribution& d) {
  if (const auto* a = d.get_if<AbsContDistribution>()) return &a->density_knots();
  if (const auto* m = d.get_if<LebDecDistribution>()) return &m->ac_part().density_knots();
  return nullptr;
}

inline const std::vector<double>* cdf_knots(const Distribution& d) {
  if (const auto* a = d.get_if<AbsContDistribution>()) return &a->cdf_knots();
  if (const auto* m = d.get_if<LebDecDistribution>()) return &m->ac_part().cdf_knots();
  return nullptr;
}

// Range of the absolutely continuous part.
inline std::pair<double, double> ac_range(const Distribution& d) {
  if (const auto* a = d.get_if<AbsContDistribution>()) return {a->lower(), a->upper()};
  if (const auto* m = d.get_if<LebDecDistribution>()) return {m->ac_part().lower(), m->ac_part().upper()};
  return truncation_bounds(d, kMetricEps);
}

inline std::pair<double, double> metric_range(const Distribution& d) {
  if (d.carrier() == Carrier::Discrete) {
    const AtomList a = atom_list(d);
    return {a.x.front(), a.x.back()};
  }
  auto r = ac_range(d);
  if (const auto* m = d.get_if<LebDecDistribution>()) {
    r.first = std::min(r.first, m->disc_part().support().front());
    r.second = std::max(r.second, m->disc_part().support().back());
  }
  return r;
}

// Adaptive Simpson on [a, b] with absolute tolerance tol.
template <class Fn>
double simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol || m <= a || b <= m) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class Fn>
double adaptive_simpson(const Fn& f, double a, double b, double tol, int max_depth = 50) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Sorted union of two atom lists with masses matched within 1e-9 relative.
inline std::vector<std::pair<double, double>> atom_differences(const AtomList& a, const AtomList& b) {
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.x.size() || j < b.x.size()) {
    if (j == b.x.size() || (i < a.x.size() && a.x[i] < b.x[j] &&
                            !(std::abs(a.x[i] - b.x[j]) <= 1e-9 * std::max(1.0, std::abs(a.x[i]))))) {
      out.emplace_back(a.x[i], a.p[i]);
      ++i;
    } else if (i == a.x.size() ||
               (b.x[j] < a.x[i] && !(std::abs(a.x[i] - b.x[j]) <= 1e-9 * std::max(1.0, std::abs(b.x[j]))))) {
      out.emplace_back(b.x[j], -b.p[j]);
      ++j;
    } else {
      out.emplace_back(a.x[i], a.p[i] - b.p[j]);
      ++i;
      ++j;
    }
  }
  return out;
}

inline double point_mass(const Distribution& d, double x) {
  switch (d.carrier()) {
    case Carrier::Continuous:
      return 0.0;
    case Carrier::Discrete:
      return pdf(d, x);
    case Carrier::Mixed: {
      const auto* m = d.get_if<LebDecDistribution>();
      return m->disc_weight() * m->disc_part().pmf(x);
    }
  }
  return 0.0;
}

}  // namespace detail

/// P(X = x).
inline double point_mass(const Distribution& d, double x) { return detail::point_mass(d, x); }

/// Total variation distance. Atoms are compared by an exact half-sum; the
/// absolutely continuous parts by adaptive Simpson quadrature of
/// 1/2 |f1 - f2| with every density knot as a breakpoint; mass outside the
/// compared range enters through its difference.
inline double total_variation(const Distribution& d1, const Distribution& d2, double rel_tol = 1e-8) {
  const Carrier c1 = d1.carrier();
  const Carrier c2 = d2.carrier();
  if ((c1 == Carrier::Discrete && c2 == Carrier::Continuous) ||
      (c1 == Carrier::Continuous && c2 == Carrier::Discrete)) {
    throw CarrierMismatch("total_variation: discrete and continuous operands");
  }
  double dv = 0.0;

  // Atoms.
  const detail::AtomList a1 = detail::atom_list(d1);
  const detail::AtomList a2 = detail::atom_list(d2);
  if (!a1.x.empty() || !a2.x.empty()) {
    double s = 0.0;
    for (const auto& [x, diff] : detail::atom_differences(a1, a2)) s += std::abs(diff);
    dv += 0.5 * s + 0.5 * std::abs(a1.missing - a2.missing);
  }

  // Absolutely continuous parts.
  const double w1 = detail::ac_weight(d1);
  const double w2 = detail::ac_weight(d2);
  if (w1 > 0.0 || w2 > 0.0) {
    double lo = kInf;
    double hi = -kInf;
    for (const auto* d : {&d1, &d2}) {
      if (detail::ac_weight(*d) == 0.0) continue;
      const auto [a, b] = detail::ac_range(*d);
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    std::vector<double> brk{lo, hi};
    for (const auto* d : {&d1, &d2}) {
      if (const auto* k = detail::ac_knots(*d)) {
        for (double x : *k) {
          if (x > lo && x < hi) brk.push_back(x);
        }
      }
    }
    if (brk.size() == 2) {
      const int panels = 2048;
      for (int i = 1; i < panels; ++i) brk.push_back(lo + (hi - lo) * i / panels);
    }
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    auto g = [&](double x) {
      return 0.5 * std::abs(detail::ac_density(d1, x) - detail::ac_density(d2, x));
    };
    const double width = hi - lo;
    const double tol = rel_tol * 1e-2;
    double integral = 0.0;
    for (std::size_t i = 1; i < brk.size(); ++i) {
      const double a = brk[i - 1];
      const double b = brk[i];
      integral += detail::adaptive_simpson(g, a, b, tol * (b - a) / width);
    }
    const double in1 = detail::ac_cdf(d1, hi) - detail::ac_cdf(d1, lo);
    const double in2 = detail::ac_cdf(d2, hi) - detail::ac_cdf(d2, lo);
    dv += integral + 0.5 * std::abs((w1 - in1) - (w2 - in2));
  }
  return std::clamp(dv, 0.0, 1.0);
}

/// Kolmogorov distance, as the largest cdf difference over an equispaced
/// grid, points drawn from both operands (fixed seeds), every atom with its
/// left limit, and the cdf knots of tabulated parts. Points below
/// `lower_limit` are ignored.
inline double kolmogorov(const Distribution& d1, const Distribution& d2, const Options& o = {},
                         double lower_limit = -kInf) {
  double best = 0.0;
  auto at = [&](double x) {
    if (!(x >= lower_limit) || !std::isfinite(x)) return;
    const double f1 = cdf(d1, x);
    const double f2 = cdf(d2, x);
    best = std::max(best, std::abs(f1 - f2));
  };
  auto left_limit = [&](double x) {
    if (!(x >= lower_limit) || !std::isfinite(x)) return;
    const double f1 = cdf(d1, x) - detail::point_mass(d1, x);
    const double f2 = cdf(d2, x) - detail::point_mass(d2, x);
    best = std::max(best, std::abs(f1 - f2));
  };

  const auto r1 = detail::metric_range(d1);
  const auto r2 = detail::metric_range(d2);
  const double lo = std::min(r1.first, r2.first);
  const double hi = std::max(r1.second, r2.second);
  const std::size_t n = o.kolm_grid_size;
  for (std::size_t i = 0; i < n; ++i) {
    at(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  }

  // Random points by inverse transform; replaying a structural sampler of a
  // long convolution power costs N draws per point for the same law.
  auto draw = [](const Distribution& d, Rng& rng) {
    if (const auto* e = d.get_if<ExactDistribution>()) return e->sample(rng);
    return quantile(d, detail::uniform01(rng));
  };
  Rng rng1(o.rng_seed);
  Rng rng2(o.rng_seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < n; ++i) at(draw(d1, rng1));
  for (std::size_t i = 0; i < n; ++i) at(draw(d2, rng2));

  for (const auto* d : {&d1, &d2}) {
    const detail::AtomList a = detail::atom_list(*d);
    for (double x : a.x) {
      at(x);
      left_limit(x);
    }
    if (const auto* k = detail::cdf_knots(*d)) {
      for (double x : *k) at(x);
    }
  }
  return std::clamp(best, 0.0, 1.0);
}

/// The N-fold power of a lattice distribution by N - 1 direct double-sum
/// convolutions. Deliberately unoptimized; the reference for timing and
/// accuracy checks of the FFT path.
inline LatticeDistribution naive_aggregate_oracle(const LatticeDistribution& severity, long long n) {
  if (n < 1) throw DomainError("naive_aggregate_oracle requires N >= 1");
  const std::vector<double>& s = severity.probs();
  std::vector<double> acc = s;
  for (long long k = 1; k < n; ++k) {
    std::vector<double> next(acc.size() + s.size() - 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      const double a = acc[i];
      if (a == 0.0) continue;
      double* out = next.data() + i;
      for (std::size_t j = 0; j < s.size(); ++j) out[j] += a * s[j];
    }
    acc = std::move(next);
  }
  return LatticeDistribution(static_cast<double>(n) * severity.origin(), severity.width(), std::move(acc),
                             severity.truncated());
}

}  // namespace distkit
