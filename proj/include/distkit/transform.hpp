#pragma once

// Image distributions: affine maps, monotone maps (exp, log, reciprocal,
// powers), the fold x -> x^(2k), sign parts and finite mixtures.
//
// Continuous images keep their exact composition as a ContinuousForm and
// carry a tabulation on 2^q equispaced knots between the image's
// eps-quantiles (finite support endpoints are used as they are).

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "distkit/distribution.hpp"
#include "distkit/error.hpp"
#include "distkit/options.hpp"

namespace distkit {

/// Support endpoints (either may be infinite).
inline std::pair<double, double> support(const Distribution& d) {
  return std::visit(
      detail::overloaded{
          [](const ExactDistribution& e) { return e.support(); },
          [](const LatticeDistribution& l) { return std::pair{l.origin(), l.last_atom()}; },
          [](const DiscreteDistribution& s) {
            return std::pair{s.support().front(), s.support().back()};
          },
          [](const AbsContDistribution& a) {
            if (a.form()) return a.form()->support();
            return std::pair{a.lower(), a.upper()};
          },
          [](const LebDecDistribution& m) {
            const auto ac = m.ac_part().form() ? m.ac_part().form()->support()
                                               : std::pair{m.ac_part().lower(), m.ac_part().upper()};
            double lo = kInf;
            double hi = -kInf;
            if (m.ac_weight() > 0) {
              lo = std::min(lo, ac.first);
              hi = std::max(hi, ac.second);
            }
            if (m.disc_weight() > 0) {
              lo = std::min(lo, m.disc_part().support().front());
              hi = std::max(hi, m.disc_part().support().back());
            }
            return std::pair{lo, hi};
          },
      },
      d.repr());
}

namespace forms {

namespace detail {

// Generalized inverse of an increasing cdf by bisection, with the bracket
// grown outward from the support when it is unbounded.
template <class Cdf>
double invert_cdf(Cdf cdf, double u, double lo, double hi) {
  if (!std::isfinite(lo)) {
    lo = std::isfinite(hi) ? hi - 1.0 : -1.0;
    while (cdf(lo) >= u && lo > -1e300) lo = lo * 2.0 - 1.0;
  }
  if (!std::isfinite(hi)) {
    hi = std::max(lo, 0.0) + 1.0;
    while (cdf(hi) < u && hi < 1e300) hi = hi * 2.0 + 1.0;
  }
  if (u <= 0.0) {
    // Leftmost point of the support.
    return distkit::detail::bisect_increasing(
        [&](double x) { return cdf(x) > 0.0 ? 1.0 : 0.0; }, 0.5, lo, hi);
  }
  return distkit::detail::bisect_increasing(cdf, u, lo, hi);
}

}  // namespace detail

/// y = g(x) for a strictly monotone g.
struct Map {
  enum class Kind { Affine, Exp, Log, Reciprocal, Power };
  Kind kind;
  double a = 1.0;  // affine scale, or power exponent
  double b = 0.0;  // affine shift

  static Map affine(double a, double b) { return {Kind::Affine, a, b}; }
  static Map exp() { return {Kind::Exp}; }
  static Map log() { return {Kind::Log}; }
  static Map reciprocal() { return {Kind::Reciprocal}; }
  /// x^a on (0, inf), or on the whole line for odd integer a.
  static Map power(double a) { return {Kind::Power, a}; }

  bool odd_power() const {
    return kind == Kind::Power && a == std::round(a) && std::fmod(std::abs(a), 2.0) == 1.0;
  }

  bool increasing() const {
    switch (kind) {
      case Kind::Affine:
        return a > 0;
      case Kind::Reciprocal:
        return false;
      case Kind::Power:
        return a > 0;
      default:
        return true;
    }
  }

  double apply(double x) const {
    switch (kind) {
      case Kind::Affine:
        return a * x + b;
      case Kind::Exp:
        return std::exp(x);
      case Kind::Log:
        return std::log(x);
      case Kind::Reciprocal:
        return 1.0 / x;
      case Kind::Power:
        if (odd_power() && x < 0) return -std::pow(-x, a);
        return std::pow(x, a);
    }
    return x;
  }

  double inverse(double y) const {
    switch (kind) {
      case Kind::Affine:
        return (y - b) / a;
      case Kind::Exp:
        return std::log(y);
      case Kind::Log:
        return std::exp(y);
      case Kind::Reciprocal:
        return 1.0 / y;
      case Kind::Power:
        if (odd_power() && y < 0) return -std::pow(-y, 1.0 / a);
        return std::pow(y, 1.0 / a);
    }
    return y;
  }

  /// |d g^{-1}(y) / dy|.
  double inverse_jacobian(double y) const {
    switch (kind) {
      case Kind::Affine:
        return 1.0 / std::abs(a);
      case Kind::Exp:
        return 1.0 / y;
      case Kind::Log:
        return std::exp(y);
      case Kind::Reciprocal:
        return 1.0 / (y * y);
      case Kind::Power:
        return std::abs(std::pow(std::abs(y), 1.0 / a - 1.0) / a);
    }
    return 1.0;
  }

  /// Image of the interval [lo, hi].
  std::pair<double, double> image(double lo, double hi) const {
    double u = apply(lo);
    double v = apply(hi);
    if (!increasing()) std::swap(u, v);
    if (kind == Kind::Reciprocal) {
      if (lo == 0.0) v = kInf;
      if (hi == 0.0) u = -kInf;
    }
    return {u, v};
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::Affine:
        os << "affine(" << a << "," << b << ")";
        break;
      case Kind::Exp:
        os << "exp";
        break;
      case Kind::Log:
        os << "log";
        break;
      case Kind::Reciprocal:
        os << "reciprocal";
        break;
      case Kind::Power:
        os << "power(" << a << ")";
        break;
    }
    return os.str();
  }
};

inline bool finite_density(double v) { return std::isfinite(v) && v >= 0.0; }

/// Law of g(X) for a continuous X and a monotone g valid on X's support.
class MonotoneImage final : public ContinuousForm {
 public:
  MonotoneImage(Distribution base, Map g) : base_(std::move(base)), g_(g) {
    const auto [lo, hi] = distkit::support(base_);
    support_ = g_.image(lo, hi);
  }

  double cdf(double y) const override {
    if (std::isnan(y)) return y;
    if (y <= support_.first) return 0.0;
    if (y >= support_.second) return 1.0;
    const double x = g_.inverse(y);
    if (g_.increasing()) return distkit::cdf(base_, x);
    return 1.0 - distkit::cdf(base_, x);
  }

  double pdf(double y) const override {
    if (!(y > support_.first && y < support_.second)) return 0.0;
    const double v = distkit::pdf(base_, g_.inverse(y)) * g_.inverse_jacobian(y);
    return std::isnan(v) ? 0.0 : v;
  }

  double quantile(double u) const override {
    const double x = distkit::quantile(base_, g_.increasing() ? u : 1.0 - u);
    return std::clamp(g_.apply(x), support_.first, support_.second);
  }

  std::pair<double, double> support() const override { return support_; }
  std::string describe() const override { return g_.describe() + "(" + base_.kind_name() + ")"; }

 private:
  Distribution base_;
  Map g_;
  std::pair<double, double> support_;
};

/// Law of X^n for even n: F(y^(1/n)) - F(-y^(1/n)).
class Fold final : public ContinuousForm {
 public:
  Fold(Distribution base, int n) : base_(std::move(base)), n_(n) {
    const auto [lo, hi] = distkit::support(base_);
    const double a = std::pow(std::abs(lo), n_);
    const double b = std::pow(std::abs(hi), n_);
    support_ = {(lo < 0 && hi > 0) ? 0.0 : std::min(a, b), std::max(a, b)};
  }

  double cdf(double y) const override {
    if (std::isnan(y)) return y;
    if (y <= 0.0) return 0.0;
    const double r = root(y);
    return std::max(distkit::cdf(base_, r) - distkit::cdf(base_, -r), 0.0);
  }

  double pdf(double y) const override {
    if (y < 0.0) return 0.0;
    if (y == 0.0) return distkit::pdf(base_, 0.0) > 0.0 ? kInf : 0.0;
    const double r = root(y);
    const double v = (distkit::pdf(base_, r) + distkit::pdf(base_, -r)) * r / (n_ * y);
    return std::isnan(v) ? 0.0 : v;
  }

  double quantile(double u) const override {
    if (u >= 1.0) return support_.second;
    return detail::invert_cdf([&](double y) { return cdf(y); }, u, support_.first,
                              support_.second);
  }

  std::pair<double, double> support() const override { return support_; }
  std::string describe() const override {
    return "fold" + std::to_string(n_) + "(" + base_.kind_name() + ")";
  }

 private:
  double root(double y) const { return n_ == 2 ? std::sqrt(y) : std::pow(y, 1.0 / n_); }

  Distribution base_;
  int n_;
  std::pair<double, double> support_;
};

/// A continuous X conditioned on X > 0 (positive side) or X < 0.
class SignPart final : public ContinuousForm {
 public:
  SignPart(Distribution base, bool positive) : base_(std::move(base)), positive_(positive) {
    f0_ = distkit::cdf(base_, 0.0);
    mass_ = positive_ ? 1.0 - f0_ : f0_;
    if (!(mass_ > 0.0)) throw SupportError("sign part carries no mass");
    const auto [lo, hi] = distkit::support(base_);
    support_ = positive_ ? std::pair{std::max(lo, 0.0), hi} : std::pair{lo, std::min(hi, 0.0)};
  }

  double mass() const noexcept { return mass_; }

  double cdf(double x) const override {
    if (std::isnan(x)) return x;
    if (positive_) {
      if (x <= 0.0) return 0.0;
      return std::clamp((distkit::cdf(base_, x) - f0_) / mass_, 0.0, 1.0);
    }
    if (x >= 0.0) return 1.0;
    return std::clamp(distkit::cdf(base_, x) / mass_, 0.0, 1.0);
  }

  double pdf(double x) const override {
    if (positive_ ? x <= 0.0 : x >= 0.0) return 0.0;
    return distkit::pdf(base_, x) / mass_;
  }

  double quantile(double u) const override {
    const double v = positive_ ? f0_ + u * mass_ : u * mass_;
    const double x = distkit::quantile(base_, std::clamp(v, 0.0, 1.0));
    return std::clamp(x, support_.first, support_.second);
  }

  std::pair<double, double> support() const override { return support_; }
  std::string describe() const override {
    return std::string(positive_ ? "positive" : "negative") + "(" + base_.kind_name() + ")";
  }

 private:
  Distribution base_;
  bool positive_;
  double f0_ = 0.0;
  double mass_ = 1.0;
  std::pair<double, double> support_;
};

/// Finite mixture of continuous distributions.
class Mixture final : public ContinuousForm {
 public:
  Mixture(std::vector<double> weights, std::vector<Distribution> parts)
      : weights_(std::move(weights)), parts_(std::move(parts)) {
    double total = 0.0;
    for (double w : weights_) total += w;
    for (auto& w : weights_) w /= total;
    support_ = {kInf, -kInf};
    for (const auto& p : parts_) {
      const auto [lo, hi] = distkit::support(p);
      support_.first = std::min(support_.first, lo);
      support_.second = std::max(support_.second, hi);
    }
  }

  double cdf(double x) const override {
    if (std::isnan(x)) return x;
    double s = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) s += weights_[i] * distkit::cdf(parts_[i], x);
    return std::clamp(s, 0.0, 1.0);
  }

  double pdf(double x) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < parts_.size(); ++i) s += weights_[i] * distkit::pdf(parts_[i], x);
    return s;
  }

  double quantile(double u) const override {
    if (parts_.size() == 1) return distkit::quantile(parts_.front(), u);
    double lo = kInf;
    double hi = -kInf;
    for (const auto& p : parts_) {
      lo = std::min(lo, distkit::quantile(p, u));
      hi = std::max(hi, distkit::quantile(p, u));
    }
    if (lo == hi) return lo;
    return detail::invert_cdf([&](double x) { return cdf(x); }, u, lo, hi);
  }

  std::pair<double, double> support() const override { return support_; }
  std::string describe() const override {
    return "mixture of " + std::to_string(parts_.size());
  }

 private:
  std::vector<double> weights_;
  std::vector<Distribution> parts_;
  std::pair<double, double> support_;
};

}  // namespace forms

// ---------------------------------------------------------------------------

/// Tabulates a form on 2^q cells between its eps-bounds. A density knot at
/// a finite endpoint where the density is singular moves half a cell in.
inline AbsContDistribution tabulate(std::shared_ptr<const ContinuousForm> form, const Options& o) {
  o.validate();
  const double eps = o.trunc_quantile;
  auto [lo, hi] = form->support();
  if (!std::isfinite(lo)) lo = form->quantile(eps / 2.0);
  if (!std::isfinite(hi)) hi = form->quantile(1.0 - eps / 2.0);
  if (!(hi > lo)) throw DomainError("tabulate: degenerate support for " + form->describe());
  const std::size_t n = o.grid_cells();
  const double h = (hi - lo) / static_cast<double>(n);
  std::vector<double> xs(n + 1);
  std::vector<double> cy(n + 1);
  std::vector<double> px(n + 1);
  std::vector<double> py(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = i == n ? hi : lo + static_cast<double>(i) * h;
    cy[i] = form->cdf(xs[i]);
    px[i] = xs[i];
  }
  px.front() = lo;
  for (std::size_t i = 0; i <= n; ++i) py[i] = form->pdf(px[i]);
  if (!forms::finite_density(py.front())) {
    px.front() = lo + 0.5 * h;
    py.front() = form->pdf(px.front());
  }
  if (!forms::finite_density(py.back())) {
    px.back() = hi - 0.5 * h;
    py.back() = form->pdf(px.back());
  }
  for (auto& v : py) {
    if (!forms::finite_density(v)) v = 0.0;
  }
  return AbsContDistribution::standardize(std::move(xs), std::move(cy), std::move(px),
                                          std::move(py), h, std::move(form));
}

// ---- affine -----------------------------------------------------------------

inline AbsContDistribution affine_abscont(const AbsContDistribution& a, double s, double t) {
  std::vector<double> cx = a.cdf_knots();
  std::vector<double> cy = a.cdf_values();
  std::vector<double> px = a.density_knots();
  std::vector<double> py = a.density_values();
  for (auto& x : cx) x = s * x + t;
  for (auto& x : px) x = s * x + t;
  for (auto& v : py) v /= std::abs(s);
  if (s < 0) {
    std::reverse(cx.begin(), cx.end());
    std::reverse(cy.begin(), cy.end());
    for (auto& v : cy) v = 1.0 - v;
    cy.front() = 0.0;
    cy.back() = 1.0;
    std::reverse(px.begin(), px.end());
    std::reverse(py.begin(), py.end());
  }
  std::shared_ptr<const ContinuousForm> form;
  if (a.form()) {
    form = std::make_shared<forms::MonotoneImage>(Distribution(a), forms::Map::affine(s, t));
  }
  return AbsContDistribution(std::move(cx), std::move(cy), std::move(px), std::move(py),
                             a.grid().h * std::abs(s), std::move(form), a.warnings());
}

inline DiscreteDistribution map_atoms(const DiscreteDistribution& d, const forms::Map& g) {
  std::vector<double> xs = d.support();
  for (auto& x : xs) x = g.apply(x);
  return DiscreteDistribution::from_atoms(std::move(xs), d.probs(), 1e-12, d.truncated());
}

/// Image under y = a * x + b. a = 0 gives Dirac(b).
inline Distribution affine(const Distribution& d, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("affine: non-finite coefficients");
  if (a == 1.0 && b == 0.0) return d;
  if (a == 0.0) return Distribution(Dirac{b});
  auto sampler = std::make_shared<samplers::Affine>(d, a, b);
  return std::visit(
      detail::overloaded{
          [&](const ExactDistribution& e) {
            Distribution out(e.affine(a, b));
            return d.exact_dispatch() ? out : out.generic();
          },
          [&](const LatticeDistribution& l) {
            return Distribution(LatticeDistribution(a * l.origin() + b, a * l.width(), l.probs(),
                                                    l.truncated()),
                                sampler);
          },
          [&](const DiscreteDistribution& s) {
            return Distribution(map_atoms(s, forms::Map::affine(a, b)), sampler);
          },
          [&](const AbsContDistribution& c) { return Distribution(affine_abscont(c, a, b), sampler); },
          [&](const LebDecDistribution& m) {
            return Distribution(
                LebDecDistribution(m.ac_weight(), affine_abscont(m.ac_part(), a, b), m.disc_weight(),
                                   map_atoms(m.disc_part(), forms::Map::affine(a, b))),
                sampler);
          },
      },
      d.repr());
}

inline Distribution negate(const Distribution& d) { return affine(d, -1.0, 0.0); }

// ---- decomposition into parts ---------------------------------------------

/// A distribution split as ac_weight * continuous + disc_weight * atoms.
struct Parts {
  double ac_weight = 0.0;
  std::optional<Distribution> ac;  // exact continuous family or AbsCont
  double disc_weight = 0.0;
  std::optional<DiscreteDistribution> disc;
};

/// `atom_tail` bounds the mass dropped from unbounded discrete families.
inline Parts parts(const Distribution& d, double atom_tail) {
  Parts p;
  if (const auto* m = d.get_if<LebDecDistribution>()) {
    p.ac_weight = m->ac_weight();
    p.disc_weight = m->disc_weight();
    if (p.ac_weight > 0) p.ac = Distribution(m->ac_part());
    if (p.disc_weight > 0) p.disc = m->disc_part();
    return p;
  }
  if (d.carrier() == Carrier::Discrete) {
    p.disc_weight = 1.0;
    p.disc = to_discrete(d, atom_tail);
  } else {
    p.ac_weight = 1.0;
    p.ac = d;
  }
  return p;
}

// ---- mixtures -------------------------------------------------------------

struct Component {
  double weight;
  Distribution dist;
};

/// Finite mixture; atoms are merged and continuous parts combined into one
/// tabulated part. Components with weight <= 0 are dropped.
inline Distribution mixture(const std::vector<Component>& comps, const Options& o) {
  std::vector<double> ax;
  std::vector<double> ap;
  std::vector<double> cw;
  std::vector<Distribution> cd;
  std::vector<double> sw;
  std::vector<Distribution> sd;
  double total = 0.0;
  for (const auto& c : comps) {
    if (!(c.weight > 0.0)) continue;
    total += c.weight;
    sw.push_back(c.weight);
    sd.push_back(c.dist);
    const Parts p = parts(c.dist, std::min(o.trunc_quantile, 1e-15));
    if (p.disc) {
      const double mass = p.disc->total_mass();
      for (std::size_t i = 0; i < p.disc->size(); ++i) {
        ax.push_back(p.disc->support()[i]);
        ap.push_back(c.weight * p.disc_weight * p.disc->probs()[i] / mass);
      }
    }
    if (p.ac) {
      cw.push_back(c.weight * p.ac_weight);
      cd.push_back(*p.ac);
    }
  }
  if (sd.empty()) throw DomainError("mixture of no components");
  if (sd.size() == 1) return sd.front();
  auto sampler = std::make_shared<samplers::Mixture>(sw, sd);
  double disc_w = 0.0;
  for (auto& v : ap) {
    v /= total;
    disc_w += v;
  }
  double ac_w = 0.0;
  for (double w : cw) ac_w += w / total;

  std::optional<DiscreteDistribution> disc;
  if (!ap.empty()) {
    std::vector<double> cond = ap;
    for (auto& v : cond) v /= disc_w;
    disc = DiscreteDistribution::from_atoms(ax, cond, 1e-12, false);
  }
  if (cd.empty()) return Distribution(*disc, sampler);
  auto form = std::make_shared<forms::Mixture>(cw, cd);
  AbsContDistribution ac = tabulate(form, o);
  if (!disc) return Distribution(std::move(ac), sampler);
  // The weights come from distinct sums; restore an exact unit total.
  const double w_ac = 1.0 - disc_w;
  return Distribution(LebDecDistribution(w_ac, std::move(ac), disc_w, std::move(*disc)), sampler);
}

// ---- monotone and folded images ---------------------------------------------

/// Image under a monotone map. Continuous parts are kept as an exact form;
/// atoms are mapped individually.
inline Distribution monotone_image(const Distribution& d, const forms::Map& g, const Options& o,
                                   std::shared_ptr<const Sampler> sampler) {
  if (d.is_dirac()) return Distribution(Dirac{g.apply(d.get_if<ExactDistribution>()->dirac_location())});
  const Parts p = parts(d, std::min(o.trunc_quantile, 1e-15));
  std::optional<AbsContDistribution> ac;
  std::optional<DiscreteDistribution> disc;
  if (p.ac) ac = tabulate(std::make_shared<forms::MonotoneImage>(*p.ac, g), o);
  if (p.disc) disc = map_atoms(*p.disc, g);
  if (ac && disc) {
    return Distribution(LebDecDistribution(p.ac_weight, std::move(*ac), p.disc_weight, std::move(*disc)),
                        std::move(sampler));
  }
  if (ac) return Distribution(std::move(*ac), std::move(sampler));
  return Distribution(std::move(*disc), std::move(sampler));
}

/// X^n for even n >= 2.
inline Distribution even_power(const Distribution& d, int n, const Options& o) {
  if (d.is_dirac()) return Distribution(Dirac{std::pow(d.get_if<ExactDistribution>()->dirac_location(), n)});
  auto sampler = std::make_shared<samplers::IntPower>(d, static_cast<double>(n));
  const Parts p = parts(d, std::min(o.trunc_quantile, 1e-15));
  std::optional<AbsContDistribution> ac;
  std::optional<DiscreteDistribution> disc;
  if (p.ac) ac = tabulate(std::make_shared<forms::Fold>(*p.ac, n), o);
  if (p.disc) {
    std::vector<double> xs = p.disc->support();
    for (auto& x : xs) x = std::pow(x, n);
    disc = DiscreteDistribution::from_atoms(std::move(xs), p.disc->probs(), 1e-12,
                                            p.disc->truncated());
  }
  if (ac && disc) {
    return Distribution(LebDecDistribution(p.ac_weight, std::move(*ac), p.disc_weight, std::move(*disc)),
                        sampler);
  }
  if (ac) return Distribution(std::move(*ac), sampler);
  return Distribution(std::move(*disc), sampler);
}

inline Distribution square(const Distribution& d, const Options& o) { return even_power(d, 2, o); }

inline Distribution exp_transform(const Distribution& d, const Options& o) {
  return monotone_image(d, forms::Map::exp(), o,
                        std::make_shared<samplers::Unary>(samplers::UnaryMap::Exp, d));
}

/// P(X <= 0) for the purpose of support checks.
inline double nonpositive_mass(const Distribution& d) {
  const Parts p = parts(d, 1e-15);
  double m = 0.0;
  if (p.ac) m += p.ac_weight * cdf(*p.ac, 0.0);
  if (p.disc) m += p.disc_weight * p.disc->cdf(0.0) / p.disc->total_mass();
  return m;
}

/// The conditional law on (0, inf); mass at or below 0 must not exceed eps.
inline Distribution positive_part(const Distribution& d, const Options& o) {
  const double m = nonpositive_mass(d);
  if (m > o.trunc_quantile) {
    std::ostringstream os;
    os << "support not contained in (0, inf): P(X <= 0) = " << m;
    throw SupportError(os.str());
  }
  if (m == 0.0) return d;
  const Parts p = parts(d, std::min(o.trunc_quantile, 1e-15));
  std::vector<Component> comps;
  if (p.ac) {
    auto pos = std::make_shared<forms::SignPart>(*p.ac, true);
    comps.push_back({p.ac_weight * pos->mass(), Distribution(tabulate(pos, o))});
  }
  if (p.disc) {
    std::vector<double> xs;
    std::vector<double> ps;
    for (std::size_t i = 0; i < p.disc->size(); ++i) {
      if (p.disc->support()[i] > 0.0) {
        xs.push_back(p.disc->support()[i]);
        ps.push_back(p.disc->probs()[i]);
      }
    }
    if (!xs.empty()) {
      double s = 0.0;
      for (double v : ps) s += v;
      comps.push_back({p.disc_weight * s / p.disc->total_mass(),
                       Distribution(DiscreteDistribution::from_atoms(xs, ps, 1e-12, false))});
    }
  }
  return mixture(comps, o);
}

inline Distribution log_transform(const Distribution& d, const Options& o) {
  if (d.is_dirac()) {
    const double c = d.get_if<ExactDistribution>()->dirac_location();
    if (!(c > 0.0)) throw SupportError("log of Dirac at a non-positive point");
    return Distribution(Dirac{std::log(c)});
  }
  const Distribution pos = positive_part(d, o);
  return monotone_image(pos, forms::Map::log(), o,
                        std::make_shared<samplers::Unary>(samplers::UnaryMap::Log, pos));
}

}  // namespace distkit
