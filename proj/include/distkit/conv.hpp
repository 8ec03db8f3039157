#pragma once

// Convolution of independent distributions.
//
// convolve() dispatches in this order: Dirac shift, closed-form family
// table, discrete with discrete (lattice FFT or direct double sum),
// discrete with continuous (direct computation), continuous with
// continuous (the FFT algorithm below), and component-wise for mixed
// carriers.
//
// The FFT algorithm for two continuous operands F1, F2:
//   1. cut both supports to one common [A, B] (eps/2 per unbounded side);
//   2. discretize both on m = 2^q cells of width h, masses
//      p_j = F([A + j h, A + (j+1) h]) placed at the midpoints;
//   3. zero-pad to 2m;
//   4. convolve the integer-grid sequences by FFT;
//   5. put the cdf jump of pi_j at 2A + (j + 1.5) h (half-cell correction);
//   6. interpolate the cdf linearly and the density through pi_j / h at
//      2A + (j + 1) h;
//   7. rescale both to unit mass.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "distkit/distribution.hpp"
#include "distkit/error.hpp"
#include "distkit/fft.hpp"
#include "distkit/options.hpp"
#include "distkit/transform.hpp"

namespace distkit {

/// Cell masses of a continuous distribution on 2^q cells of [A, B].
/// The lattice sits at the cell midpoints, A + (j + 1/2) h.
inline LatticeDistribution discretize(const Distribution& f, double a, double b, int q) {
  if (!(a < b)) throw DomainError("discretize: requires A < B");
  if (q < 1 || q > 26) throw DomainError("discretize: grid exponent out of range");
  const std::size_t m = std::size_t{1} << q;
  const double h = (b - a) / static_cast<double>(m);
  std::vector<double> p(m);
  double prev = cdf(f, a);
  for (std::size_t j = 0; j < m; ++j) {
    const double next = j + 1 == m ? cdf(f, b) : cdf(f, a + static_cast<double>(j + 1) * h);
    p[j] = std::max(next - prev, 0.0);
    prev = next;
  }
  double total = 0.0;
  for (double v : p) total += v;
  if (!(total > 0.0)) throw DomainError("discretize: no mass on [A, B]");
  return LatticeDistribution(a + 0.5 * h, h, std::move(p), true);
}

/// Equal widths, origins offset by a multiple of the width, and a result
/// support shorter than the product of the operand supports.
inline bool lattices_compatible(const LatticeDistribution& l1, const LatticeDistribution& l2) {
  const double w1 = l1.width();
  const double w2 = l2.width();
  if (std::abs(w1 - w2) > 1e-9 * std::max(w1, w2)) return false;
  const double k = (l2.origin() - l1.origin()) / w1;
  if (std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, std::abs(std::round(k)))) return false;
  const double m1 = static_cast<double>(l1.size());
  const double m2 = static_cast<double>(l2.size());
  return m1 + m2 - 1.0 < m1 * m2;
}

/// Exact lattice convolution through a zero-padded FFT; no continuity
/// correction since atoms land exactly on the lattice.
inline LatticeDistribution convolve_lattice(const LatticeDistribution& l1,
                                            const LatticeDistribution& l2) {
  if (!lattices_compatible(l1, l2)) {
    throw IncompatibleLattices("convolve_lattice: lattices are not compatible");
  }
  const std::size_t len = l1.size() + l2.size() - 1;
  const std::size_t n = fft::next_pow2(len);
  std::vector<double> x(n, 0.0);
  std::vector<double> y(n, 0.0);
  std::copy(l1.probs().begin(), l1.probs().end(), x.begin());
  std::copy(l2.probs().begin(), l2.probs().end(), y.begin());
  std::vector<double> z = fft::circular_convolve(x, y);
  z.resize(len);
  return LatticeDistribution(l1.origin() + l2.origin(), l1.width(), std::move(z),
                             l1.truncated() || l2.truncated());
}

/// Direct double sum over atom pairs, merging sums that coincide.
inline DiscreteDistribution convolve_discrete_direct(const DiscreteDistribution& d1,
                                                     const DiscreteDistribution& d2) {
  std::vector<double> xs;
  std::vector<double> ps;
  xs.reserve(d1.size() * d2.size());
  ps.reserve(d1.size() * d2.size());
  for (std::size_t i = 0; i < d1.size(); ++i) {
    for (std::size_t j = 0; j < d2.size(); ++j) {
      xs.push_back(d1.support()[i] + d2.support()[j]);
      ps.push_back(d1.probs()[i] * d2.probs()[j]);
    }
  }
  const bool truncated = d1.truncated() || d2.truncated();
  return DiscreteDistribution::from_atoms(std::move(xs), std::move(ps), 1e-9, truncated);
}

namespace detail {

// Steps 5-7 for an N-fold sum of midpoint-discretized summands on [A, B]:
// pi_j is the mass at N A + (j + N/2) h; its cdf jump is placed half a cell
// later. The outer knots are N A and N B.
inline AbsContDistribution assemble_abscont(const std::vector<double>& pi, double a, double b,
                                            double h, double n) {
  const double lo = n * a;
  const double hi = n * b;
  const std::size_t k = pi.size();
  std::vector<double> cx;
  std::vector<double> cy;
  std::vector<double> px;
  std::vector<double> py;
  cx.reserve(k + 2);
  cy.reserve(k + 2);
  px.reserve(k + 2);
  py.reserve(k + 2);
  cx.push_back(lo);
  cy.push_back(0.0);
  px.push_back(lo);
  py.push_back(0.0);
  double run = 0.0;
  double clamped = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double v = std::max(pi[j], 0.0);
    clamped += v - pi[j];
    run += v;
    const double jj = static_cast<double>(j);
    const double xc = lo + (jj + 0.5 * n + 0.5) * h;
    const double xd = lo + (jj + 0.5 * n) * h;
    if (xc < hi) {
      cx.push_back(xc);
      cy.push_back(run);
    }
    px.push_back(xd);
    py.push_back(v / h);
  }
  cx.push_back(hi);
  cy.push_back(run);
  px.push_back(hi);
  py.push_back(0.0);
  std::vector<std::string> warnings;
  if (clamped > 1e-9) warnings.push_back("negative FFT round-off mass " + std::to_string(clamped) + " clamped");
  return AbsContDistribution::standardize(std::move(cx), std::move(cy), std::move(px), std::move(py),
                                          h, nullptr, std::move(warnings));
}

}  // namespace detail

/// FFT convolution of two continuous operands (exact families or AbsCont).
inline AbsContDistribution convolve_abscont(const Distribution& f1, const Distribution& f2,
                                            const Options& o) {
  o.validate();
  if (f1.carrier() != Carrier::Continuous || f2.carrier() != Carrier::Continuous) {
    throw CarrierMismatch("convolve_abscont needs two continuous operands");
  }
  const auto [a1, b1] = truncation_bounds(f1, o.trunc_quantile);
  const auto [a2, b2] = truncation_bounds(f2, o.trunc_quantile);
  const double a = std::min(a1, a2);
  const double b = std::max(b1, b2);
  const LatticeDistribution l1 = discretize(f1, a, b, o.grid_exponent);
  const LatticeDistribution l2 = discretize(f2, a, b, o.grid_exponent);
  const std::size_t m = l1.size();
  std::vector<double> x(2 * m, 0.0);
  std::vector<double> y(2 * m, 0.0);
  std::copy(l1.probs().begin(), l1.probs().end(), x.begin());
  std::copy(l2.probs().begin(), l2.probs().end(), y.begin());
  std::vector<double> pi = fft::circular_convolve(x, y);
  pi.resize(2 * m - 1);
  return detail::assemble_abscont(pi, a, b, l1.width(), 2.0);
}

/// Discrete plus continuous by direct computation, F(x) = sum p_k Fa(x - x_k),
/// on 2^q cells spanning the continuous bounds shifted by the atom range.
inline AbsContDistribution convolve_mixed(const DiscreteDistribution& ld, const Distribution& fa,
                                          const Options& o) {
  o.validate();
  if (fa.carrier() != Carrier::Continuous) {
    throw CarrierMismatch("convolve_mixed needs a continuous second operand");
  }
  const auto [aa, ba] = truncation_bounds(fa, o.trunc_quantile);
  const double lo = aa + ld.support().front();
  const double hi = ba + ld.support().back();
  const std::size_t n = o.grid_cells();
  const double h = (hi - lo) / static_cast<double>(n);
  std::vector<double> xs(n + 1);
  for (std::size_t i = 0; i <= n; ++i) xs[i] = i == n ? hi : lo + static_cast<double>(i) * h;
  std::vector<double> cy(n + 1, 0.0);
  std::vector<double> py(n + 1, 0.0);
  for (std::size_t k = 0; k < ld.size(); ++k) {
    const double pk = ld.probs()[k];
    if (pk == 0.0) continue;
    const double xk = ld.support()[k];
    for (std::size_t i = 0; i <= n; ++i) {
      const double z = xs[i] - xk;
      if (z < aa) continue;
      cy[i] += pk * (z > ba ? cdf(fa, ba) : cdf(fa, z));
      if (z <= ba) py[i] += pk * pdf(fa, z);
    }
  }
  for (auto& v : py) {
    if (!std::isfinite(v)) v = 0.0;
  }
  std::vector<double> px = xs;
  return AbsContDistribution::standardize(std::move(xs), std::move(cy), std::move(px), std::move(py),
                                          h);
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<Distribution> exact_sum(const ExactDistribution& e1,
                                             const ExactDistribution& e2) {
  const auto c1 = e1.canonical();
  const auto c2 = e2.canonical();
  if (!c1 || !c2) return std::nullopt;
  const Family& f1 = *c1;
  const Family& f2 = *c2;
  if (const auto* n1 = std::get_if<Normal>(&f1)) {
    if (const auto* n2 = std::get_if<Normal>(&f2)) {
      return Distribution(Normal{n1->mean + n2->mean, std::sqrt(n1->sd * n1->sd + n2->sd * n2->sd)});
    }
  }
  if (const auto* p1 = std::get_if<Poisson>(&f1)) {
    if (const auto* p2 = std::get_if<Poisson>(&f2)) return Distribution(Poisson{p1->lambda + p2->lambda});
  }
  if (const auto* b1 = std::get_if<Binomial>(&f1)) {
    if (const auto* b2 = std::get_if<Binomial>(&f2)) {
      if (b1->prob == b2->prob) return Distribution(Binomial{b1->size + b2->size, b1->prob});
    }
  }
  if (const auto* c1q = std::get_if<ChiSq>(&f1)) {
    if (const auto* c2q = std::get_if<ChiSq>(&f2)) {
      return Distribution(ChiSq{c1q->df + c2q->df, c1q->ncp + c2q->ncp});
    }
  }
  // Exponential and Gamma with a shared rate.
  auto as_gamma = [](const Family& f) -> std::optional<Gamma> {
    if (const auto* g = std::get_if<Gamma>(&f)) return *g;
    if (const auto* e = std::get_if<Exponential>(&f)) return Gamma{1.0, e->rate};
    return std::nullopt;
  };
  const auto g1 = as_gamma(f1);
  const auto g2 = as_gamma(f2);
  if (g1 && g2 && g1->rate == g2->rate) return Distribution(Gamma{g1->shape + g2->shape, g1->rate});
  return std::nullopt;
}

inline std::optional<Distribution> exact_power(const ExactDistribution& e, long long n) {
  const auto c = e.canonical();
  if (!c) return std::nullopt;
  const double nd = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const Normal& d) -> std::optional<Distribution> {
            return Distribution(Normal{nd * d.mean, std::sqrt(nd) * d.sd});
          },
          [&](const Poisson& d) -> std::optional<Distribution> { return Distribution(Poisson{nd * d.lambda}); },
          [&](const Binomial& d) -> std::optional<Distribution> {
            const long long size = static_cast<long long>(d.size) * n;
            if (size > std::numeric_limits<int>::max()) return std::nullopt;
            return Distribution(Binomial{static_cast<int>(size), d.prob});
          },
          [&](const Exponential& d) -> std::optional<Distribution> {
            return Distribution(Gamma{nd, d.rate});
          },
          [&](const Gamma& d) -> std::optional<Distribution> { return Distribution(Gamma{nd * d.shape, d.rate}); },
          [&](const ChiSq& d) -> std::optional<Distribution> {
            return Distribution(ChiSq{nd * d.df, nd * d.ncp});
          },
          [&](const Dirac& d) -> std::optional<Distribution> { return Distribution(Dirac{nd * d.location}); },
          [&](const Uniform&) -> std::optional<Distribution> { return std::nullopt; },
      },
      *c);
}

inline Distribution discrete_sum(const Distribution& d1, const Distribution& d2, const Options& o) {
  const auto l1 = to_lattice(d1, o.trunc_quantile);
  const auto l2 = to_lattice(d2, o.trunc_quantile);
  if (l1 && l2 && lattices_compatible(*l1, *l2)) return Distribution(convolve_lattice(*l1, *l2));
  return Distribution(convolve_discrete_direct(to_discrete(d1, o.trunc_quantile),
                                               to_discrete(d2, o.trunc_quantile)));
}

// Lifts a distribution into (ac, disc) parts; discrete families are
// truncated at eps.
inline Parts conv_parts(const Distribution& d, const Options& o) { return parts(d, o.trunc_quantile); }

inline DiscreteDistribution unit_mass(const DiscreteDistribution& d) {
  return d.truncated() ? d.standardized() : d;
}

}  // namespace detail

/// Component-wise convolution of Lebesgue-decomposed operands; the three
/// absolutely continuous contributions are merged on a common grid of
/// 2^(q+1) cells by weighted addition.
inline Distribution convolve_lebdec(const Distribution& d1, const Distribution& d2, const Options& o);

inline Distribution convolve(const Distribution& d1, const Distribution& d2, const Options& o) {
  o.validate();
  auto sampler = std::make_shared<samplers::Sum>(d1, d2);
  if (d1.is_dirac()) {
    return affine(d2, 1.0, d1.get_if<ExactDistribution>()->dirac_location());
  }
  if (d2.is_dirac()) {
    return affine(d1, 1.0, d2.get_if<ExactDistribution>()->dirac_location());
  }
  if (d1.exact() && d2.exact()) {
    if (auto r = detail::exact_sum(*d1.exact(), *d2.exact())) return *r;
  }
  const Carrier c1 = d1.carrier();
  const Carrier c2 = d2.carrier();
  if (c1 == Carrier::Discrete && c2 == Carrier::Discrete) {
    return detail::discrete_sum(d1, d2, o).with_sampler(sampler);
  }
  if (c1 == Carrier::Discrete && c2 == Carrier::Continuous) {
    return Distribution(convolve_mixed(detail::unit_mass(to_discrete(d1, o.trunc_quantile)), d2, o),
                        sampler);
  }
  if (c1 == Carrier::Continuous && c2 == Carrier::Discrete) {
    return Distribution(convolve_mixed(detail::unit_mass(to_discrete(d2, o.trunc_quantile)), d1, o),
                        sampler);
  }
  if (c1 == Carrier::Continuous && c2 == Carrier::Continuous) {
    return Distribution(convolve_abscont(d1, d2, o), sampler);
  }
  return convolve_lebdec(d1, d2, o);
}

inline Distribution convolve_lebdec(const Distribution& d1, const Distribution& d2, const Options& o) {
  o.validate();
  auto sampler = std::make_shared<samplers::Sum>(d1, d2);
  const Parts p1 = detail::conv_parts(d1, o);
  const Parts p2 = detail::conv_parts(d2, o);

  std::optional<DiscreteDistribution> disc;
  const double disc_w = p1.disc_weight * p2.disc_weight;
  if (disc_w > 0.0) {
    const Distribution s = detail::discrete_sum(Distribution(*p1.disc), Distribution(*p2.disc), o);
    disc = detail::unit_mass(to_discrete(s, o.trunc_quantile));
  }

  std::vector<double> weights;
  std::vector<AbsContDistribution> pieces;
  if (p1.ac && p2.ac) {
    weights.push_back(p1.ac_weight * p2.ac_weight);
    pieces.push_back(convolve_abscont(*p1.ac, *p2.ac, o));
  }
  if (p1.ac && p2.disc) {
    weights.push_back(p1.ac_weight * p2.disc_weight);
    pieces.push_back(convolve_mixed(detail::unit_mass(*p2.disc), *p1.ac, o));
  }
  if (p1.disc && p2.ac) {
    weights.push_back(p1.disc_weight * p2.ac_weight);
    pieces.push_back(convolve_mixed(detail::unit_mass(*p1.disc), *p2.ac, o));
  }

  if (pieces.empty()) return Distribution(std::move(*disc), sampler);

  double lo = kInf;
  double hi = -kInf;
  double wsum = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    lo = std::min(lo, pieces[i].lower());
    hi = std::max(hi, pieces[i].upper());
    wsum += weights[i];
  }
  std::optional<AbsContDistribution> ac;
  if (pieces.size() == 1) {
    ac = std::move(pieces.front());
  } else {
    const std::size_t n = std::size_t{2} << o.grid_exponent;
    const double h = (hi - lo) / static_cast<double>(n);
    std::vector<double> xs(n + 1);
    std::vector<double> cy(n + 1, 0.0);
    std::vector<double> py(n + 1, 0.0);
    for (std::size_t i = 0; i <= n; ++i) xs[i] = i == n ? hi : lo + static_cast<double>(i) * h;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const double w = weights[k] / wsum;
      for (std::size_t i = 0; i <= n; ++i) {
        cy[i] += w * pieces[k].cdf(xs[i]);
        py[i] += w * pieces[k].pdf(xs[i]);
      }
    }
    std::vector<double> px = xs;
    ac = AbsContDistribution::standardize(std::move(xs), std::move(cy), std::move(px), std::move(py), h);
  }
  if (!disc) return Distribution(std::move(*ac), sampler);
  const double total = wsum + disc_w;
  const double dw = disc_w / total;
  return Distribution(LebDecDistribution(1.0 - dw, std::move(*ac), dw, std::move(*disc)), sampler);
}

namespace detail {

inline Distribution power_by_squaring(const Distribution& d, long long n, const Options& o) {
  std::optional<Distribution> acc;
  Distribution base = d;
  for (long long k = n; k > 0; k >>= 1) {
    if (k & 1) acc = acc ? convolve(*acc, base, o) : base;
    if (k > 1) base = convolve(base, base, o);
  }
  return *acc;
}

}  // namespace detail

/// N-fold convolution power.
inline Distribution convpow(const Distribution& d, long long n, const Options& o) {
  if (n < 1) throw DomainError("convpow requires N >= 1");
  o.validate();
  if (n == 1) return d;
  auto sampler = std::make_shared<samplers::SumPower>(d, n);
  if (d.is_dirac()) {
    return Distribution(Dirac{static_cast<double>(n) * d.get_if<ExactDistribution>()->dirac_location()});
  }
  if (d.exact()) {
    if (auto r = detail::exact_power(*d.exact(), n)) return *r;
  }
  const auto nn = static_cast<unsigned long long>(n);
  const double nd = static_cast<double>(n);
  switch (d.carrier()) {
    case Carrier::Discrete: {
      const auto l = to_lattice(d, o.trunc_quantile);
      if (!l) {
        // Not a lattice: repeated squaring with the generic sum.
        return detail::power_by_squaring(d, n, o).with_sampler(sampler);
      }
      const std::size_t m = l->size();
      const std::size_t len = static_cast<std::size_t>(n) * (m - 1) + 1;
      std::vector<double> x(fft::next_pow2(len), 0.0);
      std::copy(l->probs().begin(), l->probs().end(), x.begin());
      std::vector<double> z = fft::circular_convpow(x, nn);
      z.resize(len);
      LatticeDistribution out(nd * l->origin(), l->width(), std::move(z), l->truncated());
      return Distribution(std::move(out), sampler);
    }
    case Carrier::Continuous: {
      const auto [a, b] = truncation_bounds(d, o.trunc_quantile);
      const LatticeDistribution l = discretize(d, a, b, o.grid_exponent);
      const std::size_t m = l.size();
      const std::size_t len = static_cast<std::size_t>(n) * (m - 1) + 1;
      std::vector<double> x(fft::next_pow2(len), 0.0);
      std::copy(l.probs().begin(), l.probs().end(), x.begin());
      std::vector<double> pi = fft::circular_convpow(x, nn);
      pi.resize(len);
      return Distribution(detail::assemble_abscont(pi, a, b, l.width(), nd), sampler);
    }
    case Carrier::Mixed:
      break;
  }
  return detail::power_by_squaring(d, n, o).with_sampler(sampler);
}

/// d1 - d2 for independent operands.
inline Distribution subtract(const Distribution& d1, const Distribution& d2, const Options& o) {
  return convolve(d1, negate(d2), o);
}

}  // namespace distkit
