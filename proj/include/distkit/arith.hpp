#pragma once

// Arithmetic of independent random variables beyond the sum:
// X * Y, X / Y and X ^ Y.
//
// Products are formed component-wise. Each operand splits into an
// absolutely continuous part and atoms. Atom by atom the product is exact
// (a point mass, or a rescaled copy of the other operand); for two
// continuous parts the supports are cut at zero and the positive factors
// multiplied through exp(log |X| + log |Y|).

#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "distkit/conv.hpp"
#include "distkit/distribution.hpp"
#include "distkit/error.hpp"
#include "distkit/options.hpp"
#include "distkit/transform.hpp"

namespace distkit {

/// Sign decomposition of a continuous operand: P(X < 0) * neg + P(X > 0) * pos.
struct SignSplit {
  double neg_weight = 0.0;
  std::optional<Distribution> neg;  // law of -X given X < 0, on (0, inf)
  double pos_weight = 0.0;
  std::optional<Distribution> pos;  // law of X given X > 0
};

/// Parts with weight below 1e-12 are dropped and the weights rescaled.
inline SignSplit sign_split(const Distribution& d, const Options& o) {
  if (d.carrier() != Carrier::Continuous) throw CarrierMismatch("sign_split on a non-continuous operand");
  const double f0 = cdf(d, 0.0);
  SignSplit s;
  s.neg_weight = f0;
  s.pos_weight = 1.0 - f0;
  if (s.neg_weight < 1e-12) {
    s.neg_weight = 0.0;
    s.pos_weight = 1.0;
  } else if (s.pos_weight < 1e-12) {
    s.pos_weight = 0.0;
    s.neg_weight = 1.0;
  }
  if (s.pos_weight > 0.0) {
    if (s.neg_weight == 0.0 && support(d).first >= 0.0) {
      s.pos = d;
    } else {
      s.pos = Distribution(tabulate(std::make_shared<forms::SignPart>(d, true), o));
    }
  }
  if (s.neg_weight > 0.0) {
    const Distribution flipped = negate(d);
    if (s.pos_weight == 0.0 && support(flipped).first >= 0.0) {
      s.neg = flipped;
    } else {
      s.neg = Distribution(tabulate(std::make_shared<forms::SignPart>(flipped, true), o));
    }
  }
  return s;
}

namespace detail {

// Lower truncation for discrete operands inside products: the zero atom
// weight must survive to ~1e-15, so atoms are kept far beyond eps.
inline double product_atom_tail(const Options& o) { return std::min(o.trunc_quantile, 1e-15); }

// Product of two continuous, positive-support operands.
inline Distribution positive_product(const Distribution& u, const Distribution& v, const Options& o) {
  const Distribution lu = log_transform(u, o);
  const Distribution lv = log_transform(v, o);
  return exp_transform(convolve(lu, lv, o), o);
}

// Product of two continuous operands, as weighted components.
inline std::vector<Component> continuous_product(const Distribution& x, const Distribution& y,
                                                 const Options& o) {
  const SignSplit sx = sign_split(x, o);
  const SignSplit sy = sign_split(y, o);
  std::vector<Component> out;
  auto add = [&](double wx, const std::optional<Distribution>& px, double wy,
                 const std::optional<Distribution>& py, bool negative) {
    const double w = wx * wy;
    if (!(w > 0.0) || !px || !py) return;
    const Distribution prod = positive_product(*px, *py, o);
    out.push_back({w, negative ? negate(prod) : prod});
  };
  add(sx.pos_weight, sx.pos, sy.pos_weight, sy.pos, false);
  add(sx.neg_weight, sx.neg, sy.neg_weight, sy.neg, false);
  add(sx.pos_weight, sx.pos, sy.neg_weight, sy.neg, true);
  add(sx.neg_weight, sx.neg, sy.pos_weight, sy.pos, true);
  return out;
}

// Atoms times a continuous operand: sum_k p_k * law(x_k * C), with the
// zero atom kept as a point mass.
inline void atoms_times_continuous(double weight, const DiscreteDistribution& atoms,
                                   const Distribution& c, std::vector<Component>& out) {
  const double mass = atoms.total_mass();
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double p = weight * atoms.probs()[k] / mass;
    if (!(p > 0.0)) continue;
    const double xk = atoms.support()[k];
    if (xk == 0.0) {
      out.push_back({p, Distribution(Dirac{0.0})});
    } else {
      out.push_back({p, affine(c, xk, 0.0)});
    }
  }
}

inline DiscreteDistribution atoms_product(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  std::vector<double> xs;
  std::vector<double> ps;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      xs.push_back(a.support()[i] * b.support()[j]);
      ps.push_back(a.probs()[i] * b.probs()[j]);
    }
  }
  return DiscreteDistribution::from_atoms(std::move(xs), std::move(ps), 1e-12, false);
}

}  // namespace detail

/// P(X = 0).
inline double zero_mass(const Distribution& d) {
  if (d.carrier() == Carrier::Continuous) return 0.0;
  if (const auto* e = d.get_if<ExactDistribution>()) return e->pdf(0.0);
  const Parts p = parts(d, 1e-15);
  return p.disc ? p.disc_weight * p.disc->pmf(0.0) / p.disc->total_mass() : 0.0;
}

inline Distribution multiply(const Distribution& x, const Distribution& y, const Options& o) {
  o.validate();
  if (x.is_dirac()) return affine(y, x.get_if<ExactDistribution>()->dirac_location(), 0.0);
  if (y.is_dirac()) return affine(x, y.get_if<ExactDistribution>()->dirac_location(), 0.0);
  auto sampler = std::make_shared<samplers::Binary>(samplers::BinaryOp::Product, x, y);
  const double tail = detail::product_atom_tail(o);
  const Parts px = parts(x, tail);
  const Parts py = parts(y, tail);
  std::vector<Component> comps;
  if (px.disc && py.disc) {
    comps.push_back({px.disc_weight * py.disc_weight,
                     Distribution(detail::atoms_product(px.disc->standardized(), py.disc->standardized()))});
  }
  if (px.disc && py.ac) detail::atoms_times_continuous(px.disc_weight * py.ac_weight, *px.disc, *py.ac, comps);
  if (px.ac && py.disc) detail::atoms_times_continuous(px.ac_weight * py.disc_weight, *py.disc, *px.ac, comps);
  if (px.ac && py.ac) {
    for (auto& c : detail::continuous_product(*px.ac, *py.ac, o)) {
      c.weight *= px.ac_weight * py.ac_weight;
      comps.push_back(std::move(c));
    }
  }
  return mixture(comps, o).with_sampler(sampler);
}

/// Law of 1 / X; X must not charge 0.
inline Distribution reciprocal(const Distribution& d, const Options& o) {
  if (d.is_dirac()) {
    const double c = d.get_if<ExactDistribution>()->dirac_location();
    if (c == 0.0) throw ZeroDivisorMass("reciprocal of Dirac(0)");
    return Distribution(Dirac{1.0 / c});
  }
  if (zero_mass(d) > 1e-12) throw ZeroDivisorMass("divisor has an atom at 0");
  auto sampler = std::make_shared<samplers::Unary>(samplers::UnaryMap::Reciprocal, d);
  const Parts p = parts(d, detail::product_atom_tail(o));
  std::vector<Component> comps;
  if (p.disc) {
    std::vector<double> xs = p.disc->support();
    std::vector<double> ps = p.disc->probs();
    std::vector<double> kx;
    std::vector<double> kp;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == 0.0) continue;
      kx.push_back(1.0 / xs[i]);
      kp.push_back(ps[i]);
    }
    if (!kx.empty()) {
      comps.push_back({p.disc_weight, Distribution(DiscreteDistribution::from_atoms(kx, kp, 1e-12, false))});
    }
  }
  if (p.ac) {
    const SignSplit s = sign_split(*p.ac, o);
    if (s.pos) {
      comps.push_back({p.ac_weight * s.pos_weight,
                       Distribution(tabulate(std::make_shared<forms::MonotoneImage>(*s.pos, forms::Map::reciprocal()), o))});
    }
    if (s.neg) {
      const Distribution r(tabulate(std::make_shared<forms::MonotoneImage>(*s.neg, forms::Map::reciprocal()), o));
      comps.push_back({p.ac_weight * s.neg_weight, negate(r)});
    }
  }
  return mixture(comps, o).with_sampler(sampler);
}

inline Distribution divide(const Distribution& x, const Distribution& y, const Options& o) {
  o.validate();
  if (y.is_dirac()) {
    const double c = y.get_if<ExactDistribution>()->dirac_location();
    if (c == 0.0) throw ZeroDivisorMass("division by Dirac(0)");
    return affine(x, 1.0 / c, 0.0);
  }
  auto sampler = std::make_shared<samplers::Binary>(samplers::BinaryOp::Quotient, x, y);
  return multiply(x, reciprocal(y, o), o).with_sampler(sampler);
}

namespace detail {

inline std::optional<long long> integer_exponent(double c) {
  if (c == std::round(c) && std::abs(c) <= 64.0) return static_cast<long long>(c);
  return std::nullopt;
}

}  // namespace detail

/// X ^ Y. A Dirac exponent c gives the image x -> x^c (any sign of X for
/// integer c); otherwise X must be positive and X^Y = exp(Y log X).
inline Distribution power(const Distribution& x, const Distribution& y, const Options& o) {
  o.validate();
  if (y.is_dirac()) {
    const double c = y.get_if<ExactDistribution>()->dirac_location();
    if (x.is_dirac()) {
      const double b = x.get_if<ExactDistribution>()->dirac_location();
      const double v = std::pow(b, c);
      if (!std::isfinite(v)) throw SupportError("power of Dirac is not finite");
      return Distribution(Dirac{v});
    }
    if (const auto n = detail::integer_exponent(c)) {
      if (*n == 0) return Distribution(Dirac{1.0});
      if (*n == 1) return x;
      if (*n < 0) return reciprocal(power(x, Distribution(Dirac{static_cast<double>(-*n)}), o), o);
      if (*n % 2 == 0) return even_power(x, static_cast<int>(*n), o);
      return monotone_image(x, forms::Map::power(static_cast<double>(*n)), o,
                            std::make_shared<samplers::IntPower>(x, c));
    }
    const Distribution pos = positive_part(x, o);
    return monotone_image(pos, forms::Map::power(c), o, std::make_shared<samplers::IntPower>(pos, c));
  }
  if (x.is_dirac()) {
    const double b = x.get_if<ExactDistribution>()->dirac_location();
    if (!(b > 0.0)) throw SupportError("X^Y with a non-positive Dirac base");
    return exp_transform(affine(y, std::log(b), 0.0), o)
        .with_sampler(std::make_shared<samplers::Binary>(samplers::BinaryOp::Power, x, y));
  }
  auto sampler = std::make_shared<samplers::Binary>(samplers::BinaryOp::Power, positive_part(x, o), y);
  return exp_transform(multiply(y, log_transform(x, o), o), o).with_sampler(sampler);
}

}  // namespace distkit
