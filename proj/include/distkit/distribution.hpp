#pragma once

// Distribution values. Every variant answers the four constitutive
// functions: cdf, density (or point mass), quantile and sampler.
//
// Values are immutable. A Distribution is a pair of shared pointers (the
// representation and the sampling recipe), so copies are cheap and safe to
// share between threads.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "distkit/error.hpp"
#include "distkit/exact.hpp"

namespace distkit {

namespace detail {

// Piecewise-linear interpolation through (xs, ys), constant `left` below the
// first knot and `right` above the last.
inline double interp(std::span<const double> xs, std::span<const double> ys, double x, double left,
                     double right) {
  if (std::isnan(x)) return x;
  if (x < xs.front()) return left;
  if (x > xs.back()) return right;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.end()) return ys.back();
  const std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (i == 0) return ys.front();
  const double x0 = xs[i - 1];
  const double x1 = xs[i];
  const double t = (x - x0) / (x1 - x0);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

inline bool strictly_increasing(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) return false;
  }
  return true;
}

inline std::vector<double> cumsum(std::span<const double> p) {
  std::vector<double> out(p.size());
  std::partial_sum(p.begin(), p.end(), out.begin());
  return out;
}

inline double uniform01(Rng& rng) { return std::generate_canonical<double, 53>(rng); }

}  // namespace detail

// ---------------------------------------------------------------------------

/// Atoms a0 + j * w, j = 0..m-1, with w > 0.
class LatticeDistribution {
 public:
  LatticeDistribution(double origin, double width, std::vector<double> probs,
                      bool truncated = false)
      : origin_(origin), width_(width), probs_(std::move(probs)), truncated_(truncated) {
    if (probs_.empty()) throw DomainError("lattice needs at least one atom");
    if (!(width_ != 0.0) || !std::isfinite(width_) || !std::isfinite(origin_)) {
      throw DomainError("lattice width must be finite and non-zero");
    }
    if (width_ < 0) {
      origin_ = origin_ + width_ * static_cast<double>(probs_.size() - 1);
      width_ = -width_;
      std::reverse(probs_.begin(), probs_.end());
    }
    for (auto& p : probs_) {
      if (!(p >= -1e-12)) throw DomainError("lattice probabilities must be non-negative");
      p = std::max(p, 0.0);
    }
    cum_ = detail::cumsum(probs_);
    if (!(cum_.back() > 0.0)) throw DomainError("lattice carries no mass");
    if (cum_.back() > 1.0 + 1e-9) throw DomainError("lattice mass exceeds one");
  }

  double origin() const noexcept { return origin_; }
  double width() const noexcept { return width_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  bool truncated() const noexcept { return truncated_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double atom(std::size_t j) const noexcept { return origin_ + width_ * static_cast<double>(j); }
  double last_atom() const noexcept { return atom(probs_.size() - 1); }
  double total_mass() const noexcept { return cum_.back(); }

  double cdf(double x) const {
    if (std::isnan(x)) return x;
    const double pos = (x - origin_) / width_;
    if (pos < -1e-9) return 0.0;
    const double j = std::floor(pos + 1e-9);
    if (j >= static_cast<double>(probs_.size() - 1)) return cum_.back();
    return cum_[static_cast<std::size_t>(j)];
  }

  double pmf(double x) const {
    const double pos = (x - origin_) / width_;
    const double j = std::round(pos);
    if (j < 0.0 || j > static_cast<double>(probs_.size() - 1)) return 0.0;
    if (std::abs(pos - j) > 1e-9) return 0.0;
    return probs_[static_cast<std::size_t>(j)];
  }

  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0,1]");
    auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    if (u == 0.0) it = std::find_if(cum_.begin(), cum_.end(), [](double c) { return c > 0.0; });
    if (it == cum_.end()) return last_atom();
    return atom(static_cast<std::size_t>(it - cum_.begin()));
  }

  /// Rescaled to unit mass (the standardization step for lattice results).
  LatticeDistribution standardized() const {
    std::vector<double> p = probs_;
    const double total = cum_.back();
    for (auto& v : p) v /= total;
    return LatticeDistribution(origin_, width_, std::move(p), false);
  }

  double mean() const {
    double s = 0.0;
    for (std::size_t j = 0; j < probs_.size(); ++j) s += probs_[j] * atom(j);
    return s / cum_.back();
  }

 private:
  double origin_;
  double width_;
  std::vector<double> probs_;
  bool truncated_;
  std::vector<double> cum_;
};

/// Finite discrete distribution on a strictly increasing support.
class DiscreteDistribution {
 public:
  DiscreteDistribution(std::vector<double> support, std::vector<double> probs,
                       bool truncated = false)
      : support_(std::move(support)), probs_(std::move(probs)), truncated_(truncated) {
    if (support_.empty() || support_.size() != probs_.size()) {
      throw DomainError("discrete distribution needs matching, non-empty support and probs");
    }
    if (!detail::strictly_increasing(support_)) {
      throw DomainError("discrete support must be strictly increasing");
    }
    for (auto& p : probs_) {
      if (!(p >= -1e-12)) throw DomainError("discrete probabilities must be non-negative");
      p = std::max(p, 0.0);
    }
    cum_ = detail::cumsum(probs_);
    if (!(cum_.back() > 0.0)) throw DomainError("discrete distribution carries no mass");
    if (cum_.back() > 1.0 + 1e-9) throw DomainError("discrete mass exceeds one");
    if (!truncated_ && std::abs(cum_.back() - 1.0) > 1e-10) {
      throw DomainError("discrete probabilities must sum to one (or be flagged truncated)");
    }
    double gap = kInf;
    for (std::size_t i = 1; i < support_.size(); ++i) gap = std::min(gap, support_[i] - support_[i - 1]);
    tol_ = std::isfinite(gap) ? gap * 1e-9 : 1e-9 * std::max(1.0, std::abs(support_.front()));
  }

  /// Sorts atoms, merges those closer than `tol` and drops zero masses.
  static DiscreteDistribution from_atoms(std::vector<double> xs, std::vector<double> ps,
                                         double rel_tol = 1e-9, bool truncated = false) {
    if (xs.size() != ps.size() || xs.empty()) throw DomainError("from_atoms: bad input");
    std::vector<std::size_t> idx(xs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
    double scale = 0.0;
    for (double x : xs) scale = std::max(scale, std::abs(x));
    const double tol = rel_tol * std::max(1.0, scale);
    std::vector<double> sx;
    std::vector<double> sp;
    double total = 0.0;
    for (auto i : idx) {
      if (ps[i] <= 0.0) continue;
      total += ps[i];
      if (!sx.empty() && xs[i] - sx.back() <= tol) {
        sp.back() += ps[i];
      } else {
        sx.push_back(xs[i]);
        sp.push_back(ps[i]);
      }
    }
    if (sx.empty()) throw DomainError("from_atoms: no positive mass");
    if (!truncated) {
      for (auto& p : sp) p /= total;
    }
    return DiscreteDistribution(std::move(sx), std::move(sp), truncated);
  }

  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  bool truncated() const noexcept { return truncated_; }
  std::size_t size() const noexcept { return support_.size(); }
  double total_mass() const noexcept { return cum_.back(); }

  double cdf(double x) const {
    if (std::isnan(x)) return x;
    auto it = std::upper_bound(support_.begin(), support_.end(), x + tol_);
    if (it == support_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
  }

  double pmf(double x) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), x - tol_);
    if (it == support_.end() || std::abs(*it - x) > tol_) return 0.0;
    return probs_[static_cast<std::size_t>(it - support_.begin())];
  }

  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0,1]");
    auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
    if (u == 0.0) it = std::find_if(cum_.begin(), cum_.end(), [](double c) { return c > 0.0; });
    if (it == cum_.end()) return support_.back();
    return support_[static_cast<std::size_t>(it - cum_.begin())];
  }

  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < support_.size(); ++i) s += probs_[i] * support_[i];
    return s / cum_.back();
  }

  DiscreteDistribution standardized() const {
    std::vector<double> p = probs_;
    for (auto& v : p) v /= cum_.back();
    return DiscreteDistribution(support_, std::move(p), false);
  }

 private:
  std::vector<double> support_;
  std::vector<double> probs_;
  bool truncated_;
  std::vector<double> cum_;
  double tol_ = 0.0;
};

/// Exact evaluation behind a tabulated continuous distribution, used when a
/// distribution is a known transform of others (images under monotone maps,
/// folds, finite mixtures). The tabulated knots stay authoritative for
/// serialization; evaluation goes through the form.
class ContinuousForm {
 public:
  virtual ~ContinuousForm() = default;
  virtual double cdf(double x) const = 0;
  virtual double pdf(double x) const = 0;
  virtual double quantile(double u) const = 0;
  /// Support endpoints; either may be infinite.
  virtual std::pair<double, double> support() const = 0;
  virtual std::string describe() const = 0;
};

/// Piecewise-linear density and cdf on a bounded grid.
///
/// The cdf and the density carry their own knots: the FFT convolution places
/// cdf knots half a cell off the density knots. The quantile is the inverse
/// of the piecewise-linear cdf (axes exchanged, linear interpolation).
class AbsContDistribution {
 public:
  struct Grid {
    double lower;
    double upper;
    std::size_t count;
    double h;
  };

  /// Validating constructor; values must already be standardized.
  AbsContDistribution(std::vector<double> cdf_x, std::vector<double> cdf_y,
                      std::vector<double> pdf_x, std::vector<double> pdf_y, double h,
                      std::shared_ptr<const ContinuousForm> form = nullptr,
                      std::vector<std::string> warnings = {})
      : cdf_x_(std::move(cdf_x)),
        cdf_y_(std::move(cdf_y)),
        pdf_x_(std::move(pdf_x)),
        pdf_y_(std::move(pdf_y)),
        h_(h),
        form_(std::move(form)),
        warnings_(std::move(warnings)) {
    if (cdf_x_.size() < 2 || cdf_x_.size() != cdf_y_.size() || pdf_x_.size() < 2 ||
        pdf_x_.size() != pdf_y_.size()) {
      throw DomainError("abscont: knot and value arrays must match and hold >= 2 points");
    }
    if (!detail::strictly_increasing(cdf_x_) || !detail::strictly_increasing(pdf_x_)) {
      throw DomainError("abscont: knots must be strictly increasing");
    }
    if (std::abs(cdf_y_.front()) > 1e-8 || std::abs(cdf_y_.back() - 1.0) > 1e-8) {
      throw DomainError("abscont: cdf must run from 0 to 1");
    }
    for (std::size_t i = 1; i < cdf_y_.size(); ++i) {
      if (cdf_y_[i] < cdf_y_[i - 1]) throw DomainError("abscont: cdf must be non-decreasing");
    }
    for (double v : pdf_y_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("abscont: density must be finite and >= 0");
    }
  }

  /// Builds a distribution from raw (unnormalized) values: negative density
  /// values are clamped, the cdf is rescaled to run from 0 to 1, and the
  /// density is divided by its exact piecewise-linear integral.
  static AbsContDistribution standardize(std::vector<double> cdf_x, std::vector<double> cdf_y,
                                         std::vector<double> pdf_x, std::vector<double> pdf_y,
                                         double h,
                                         std::shared_ptr<const ContinuousForm> form = nullptr,
                                         std::vector<std::string> warnings = {}) {
    if (cdf_y.size() < 2 || pdf_y.size() < 2) throw DomainError("abscont: too few knots");
    const double lo = cdf_y.front();
    double run = 0.0;
    for (auto& v : cdf_y) {
      v = std::max(v - lo, run);
      run = v;
    }
    const double total = cdf_y.back();
    if (!(total > 0.0)) throw DomainError("abscont: cdf carries no mass");
    for (auto& v : cdf_y) v = std::min(v / total, 1.0);
    cdf_y.front() = 0.0;
    cdf_y.back() = 1.0;
    for (auto& v : pdf_y) v = std::max(v, 0.0);
    const double integral = trapezoid(pdf_x, pdf_y);
    if (!(integral > 0.0)) throw DomainError("abscont: density integrates to zero");
    for (auto& v : pdf_y) v /= integral;
    return AbsContDistribution(std::move(cdf_x), std::move(cdf_y), std::move(pdf_x),
                               std::move(pdf_y), h, std::move(form), std::move(warnings));
  }

  /// Exact integral of a piecewise-linear function.
  static double trapezoid(std::span<const double> xs, std::span<const double> ys) {
    double s = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) s += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
    return s;
  }

  Grid grid() const noexcept { return {cdf_x_.front(), cdf_x_.back(), cdf_x_.size(), h_}; }
  double lower() const noexcept { return cdf_x_.front(); }
  double upper() const noexcept { return cdf_x_.back(); }
  const std::vector<double>& cdf_knots() const noexcept { return cdf_x_; }
  const std::vector<double>& cdf_values() const noexcept { return cdf_y_; }
  const std::vector<double>& density_knots() const noexcept { return pdf_x_; }
  const std::vector<double>& density_values() const noexcept { return pdf_y_; }
  const std::shared_ptr<const ContinuousForm>& form() const noexcept { return form_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  double cdf(double x) const {
    if (form_) return form_->cdf(x);
    return table_cdf(x);
  }

  double pdf(double x) const {
    if (form_) return form_->pdf(x);
    return detail::interp(pdf_x_, pdf_y_, x, 0.0, 0.0);
  }

  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0,1]");
    if (form_) return form_->quantile(u);
    return table_quantile(u);
  }

  /// Tabulated cdf, ignoring any exact form.
  double table_cdf(double x) const { return detail::interp(cdf_x_, cdf_y_, x, 0.0, 1.0); }

  /// Inverse of the tabulated cdf: inf{x : F(x) >= u} for the interpolant.
  double table_quantile(double u) const {
    auto it = std::lower_bound(cdf_y_.begin(), cdf_y_.end(), u);
    if (it == cdf_y_.end()) return cdf_x_.back();
    const std::size_t i = static_cast<std::size_t>(it - cdf_y_.begin());
    if (i == 0) {
      // u == 0: first point where the cdf starts to rise.
      std::size_t j = 0;
      while (j + 1 < cdf_y_.size() && cdf_y_[j + 1] == 0.0) ++j;
      return cdf_x_[j];
    }
    const double y0 = cdf_y_[i - 1];
    const double y1 = cdf_y_[i];
    const double t = (u - y0) / (y1 - y0);
    return cdf_x_[i - 1] + t * (cdf_x_[i] - cdf_x_[i - 1]);
  }

  /// Mean of the tabulated density (exact for the piecewise-linear function).
  double mean() const {
    double s = 0.0;
    for (std::size_t i = 1; i < pdf_x_.size(); ++i) {
      const double x0 = pdf_x_[i - 1];
      const double x1 = pdf_x_[i];
      s += (x1 - x0) * (pdf_y_[i - 1] * (2 * x0 + x1) + pdf_y_[i] * (x0 + 2 * x1)) / 6.0;
    }
    return s;
  }

  double density_integral() const { return trapezoid(pdf_x_, pdf_y_); }

 private:
  std::vector<double> cdf_x_;
  std::vector<double> cdf_y_;
  std::vector<double> pdf_x_;
  std::vector<double> pdf_y_;
  double h_;
  std::shared_ptr<const ContinuousForm> form_;
  std::vector<std::string> warnings_;
};

/// ac_weight * ac_part + disc_weight * disc_part.
class LebDecDistribution {
 public:
  LebDecDistribution(double ac_weight, AbsContDistribution ac, double disc_weight,
                     DiscreteDistribution disc)
      : ac_weight_(ac_weight), ac_(std::move(ac)), disc_weight_(disc_weight), disc_(std::move(disc)) {
    if (ac_weight_ < 0.0 || disc_weight_ < 0.0 || ac_weight_ > 1.0 || disc_weight_ > 1.0) {
      throw DomainError("lebdec weights must lie in [0,1]");
    }
    if (std::abs(ac_weight_ + disc_weight_ - 1.0) > 1e-12) {
      throw DomainError("lebdec weights must sum to one");
    }
  }

  double ac_weight() const noexcept { return ac_weight_; }
  double disc_weight() const noexcept { return disc_weight_; }
  const AbsContDistribution& ac_part() const noexcept { return ac_; }
  const DiscreteDistribution& disc_part() const noexcept { return disc_; }

  double cdf(double x) const { return ac_weight_ * ac_.cdf(x) + disc_weight_ * disc_.cdf(x); }

  /// Absolutely continuous density scaled by its weight; atoms are not
  /// reported here (use disc_part() for point masses).
  double pdf(double x) const { return ac_weight_ * ac_.pdf(x); }

  double quantile(double u) const {
    if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0,1]");
    double lo = std::min(ac_.lower(), disc_.support().front());
    double hi = std::max(ac_.upper(), disc_.support().back());
    if (ac_.form()) {
      // The exact form may extend past the tabulated grid.
      if (ac_weight_ * ac_.cdf(lo) >= u) lo = std::min(lo, ac_.quantile(0.0));
      if (cdf(hi) < u) hi = std::max(hi, ac_.quantile(1.0));
      if (!std::isfinite(lo)) lo = ac_.lower();
      if (!std::isfinite(hi)) hi = ac_.upper();
    }
    while (cdf(lo) >= u && u > 0.0) lo -= std::max(1.0, std::abs(lo));
    if (cdf(hi) < u) return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (cdf(mid) >= u)
        hi = mid;
      else
        lo = mid;
    }
    // Snap onto an atom that sits in the final bracket.
    const auto& s = disc_.support();
    auto it = std::lower_bound(s.begin(), s.end(), lo);
    if (it != s.end() && *it <= hi + 1e-12 * std::max(1.0, std::abs(hi)) && cdf(*it) >= u) {
      return *it;
    }
    return hi;
  }

 private:
  double ac_weight_;
  AbsContDistribution ac_;
  double disc_weight_;
  DiscreteDistribution disc_;
};

// ---------------------------------------------------------------------------

class Sampler;

enum class Carrier { Discrete, Continuous, Mixed };

class Distribution {
 public:
  using Repr = std::variant<ExactDistribution, LatticeDistribution, DiscreteDistribution,
                            AbsContDistribution, LebDecDistribution>;

  Distribution(ExactDistribution d);  // NOLINT(google-explicit-constructor)
  Distribution(Family f) : Distribution(ExactDistribution(std::move(f))) {}  // NOLINT
  Distribution(LatticeDistribution d, std::shared_ptr<const Sampler> s = nullptr)  // NOLINT
      : repr_(std::make_shared<const Repr>(std::move(d))), sampler_(std::move(s)) {}
  Distribution(DiscreteDistribution d, std::shared_ptr<const Sampler> s = nullptr)  // NOLINT
      : repr_(std::make_shared<const Repr>(std::move(d))), sampler_(std::move(s)) {}
  Distribution(AbsContDistribution d, std::shared_ptr<const Sampler> s = nullptr)  // NOLINT
      : repr_(std::make_shared<const Repr>(std::move(d))), sampler_(std::move(s)) {}
  Distribution(LebDecDistribution d, std::shared_ptr<const Sampler> s = nullptr)  // NOLINT
      : repr_(std::make_shared<const Repr>(std::move(d))), sampler_(std::move(s)) {}

  const Repr& repr() const noexcept { return *repr_; }

  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(repr_.get());
  }

  template <class T>
  bool is() const noexcept {
    return std::holds_alternative<T>(*repr_);
  }

  /// Exact family usable by the closed-form convolution table.
  const ExactDistribution* exact() const noexcept {
    return exact_dispatch_ ? get_if<ExactDistribution>() : nullptr;
  }

  bool exact_dispatch() const noexcept { return exact_dispatch_; }

  /// The same distribution with closed-form dispatch switched off, so that
  /// arithmetic takes the general (lattice / FFT) route.
  Distribution generic() const {
    Distribution d = *this;
    d.exact_dispatch_ = false;
    return d;
  }

  const std::shared_ptr<const Sampler>& sampler() const noexcept { return sampler_; }

  Distribution with_sampler(std::shared_ptr<const Sampler> s) const {
    Distribution d = *this;
    d.sampler_ = std::move(s);
    return d;
  }

  Carrier carrier() const noexcept {
    return std::visit(detail::overloaded{
                          [](const ExactDistribution& e) {
                            return e.is_discrete() ? Carrier::Discrete : Carrier::Continuous;
                          },
                          [](const LatticeDistribution&) { return Carrier::Discrete; },
                          [](const DiscreteDistribution&) { return Carrier::Discrete; },
                          [](const AbsContDistribution&) { return Carrier::Continuous; },
                          [](const LebDecDistribution&) { return Carrier::Mixed; },
                      },
                      *repr_);
  }

  bool is_dirac() const noexcept {
    const auto* e = get_if<ExactDistribution>();
    return e != nullptr && e->is_dirac();
  }

  std::string kind_name() const {
    return std::visit(detail::overloaded{
                          [](const ExactDistribution& e) { return e.name(); },
                          [](const LatticeDistribution&) { return std::string("Lattice"); },
                          [](const DiscreteDistribution&) { return std::string("Discrete"); },
                          [](const AbsContDistribution&) { return std::string("AbsCont"); },
                          [](const LebDecDistribution&) { return std::string("LebDec"); },
                      },
                      *repr_);
  }

 private:
  std::shared_ptr<const Repr> repr_;
  std::shared_ptr<const Sampler> sampler_;
  bool exact_dispatch_ = true;
};

/// A sampling recipe. Derived distributions keep the operation tree over
/// their operands and replay it, so draws are exact rather than taken from
/// an approximated quantile function.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual double draw(Rng& rng) const = 0;
};

// ---- constitutive functions ---------------------------------------------

inline double cdf(const Distribution& d, double x) {
  return std::visit([&](const auto& r) { return r.cdf(x); }, d.repr());
}

inline double pdf(const Distribution& d, double x) {
  return std::visit(detail::overloaded{
                        [&](const ExactDistribution& r) { return r.pdf(x); },
                        [&](const LatticeDistribution& r) { return r.pmf(x); },
                        [&](const DiscreteDistribution& r) { return r.pmf(x); },
                        [&](const AbsContDistribution& r) { return r.pdf(x); },
                        [&](const LebDecDistribution& r) { return r.pdf(x); },
                    },
                    d.repr());
}

inline double quantile(const Distribution& d, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0,1]");
  return std::visit([&](const auto& r) { return r.quantile(u); }, d.repr());
}

template <class Fn>
std::vector<double> map_values(std::span<const double> xs, Fn fn) {
  std::vector<double> out(xs.size());
  std::transform(xs.begin(), xs.end(), out.begin(), fn);
  return out;
}

inline std::vector<double> cdf(const Distribution& d, std::span<const double> xs) {
  return map_values(xs, [&](double x) { return cdf(d, x); });
}
inline std::vector<double> pdf(const Distribution& d, std::span<const double> xs) {
  return map_values(xs, [&](double x) { return pdf(d, x); });
}
inline std::vector<double> quantile(const Distribution& d, std::span<const double> us) {
  return map_values(us, [&](double u) { return quantile(d, u); });
}

/// One draw: the recipe when present, inverse-cdf sampling otherwise.
inline double sample_one(const Distribution& d, Rng& rng) {
  if (d.sampler()) return d.sampler()->draw(rng);
  if (const auto* e = d.get_if<ExactDistribution>()) return e->sample(rng);
  return quantile(d, detail::uniform01(rng));
}

inline std::vector<double> sample(const Distribution& d, std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) v = sample_one(d, rng);
  return out;
}

// ---- samplers -------------------------------------------------------------

namespace samplers {

class InverseCdf final : public Sampler {
 public:
  explicit InverseCdf(Distribution d) : d_(d.with_sampler(nullptr)) {}
  double draw(Rng& rng) const override { return quantile(d_, detail::uniform01(rng)); }

 private:
  Distribution d_;
};

class Sum final : public Sampler {
 public:
  Sum(Distribution a, Distribution b) : a_(std::move(a)), b_(std::move(b)) {}
  double draw(Rng& rng) const override {
    const double x = sample_one(a_, rng);
    return x + sample_one(b_, rng);
  }

 private:
  Distribution a_;
  Distribution b_;
};

class SumPower final : public Sampler {
 public:
  SumPower(Distribution a, long long n) : a_(std::move(a)), n_(n) {}
  double draw(Rng& rng) const override {
    double s = 0.0;
    for (long long i = 0; i < n_; ++i) s += sample_one(a_, rng);
    return s;
  }

 private:
  Distribution a_;
  long long n_;
};

class Affine final : public Sampler {
 public:
  Affine(Distribution a, double scale, double shift)
      : a_(std::move(a)), scale_(scale), shift_(shift) {}
  double draw(Rng& rng) const override { return scale_ * sample_one(a_, rng) + shift_; }

 private:
  Distribution a_;
  double scale_;
  double shift_;
};

enum class BinaryOp { Product, Quotient, Power };

class Binary final : public Sampler {
 public:
  Binary(BinaryOp op, Distribution a, Distribution b) : op_(op), a_(std::move(a)), b_(std::move(b)) {}
  double draw(Rng& rng) const override {
    const double x = sample_one(a_, rng);
    const double y = sample_one(b_, rng);
    switch (op_) {
      case BinaryOp::Product:
        return x * y;
      case BinaryOp::Quotient:
        return x / y;
      case BinaryOp::Power:
        return std::pow(x, y);
    }
    return x;
  }

 private:
  BinaryOp op_;
  Distribution a_;
  Distribution b_;
};

enum class UnaryMap { Exp, Log, Square, Reciprocal, Abs };

class Unary final : public Sampler {
 public:
  Unary(UnaryMap map, Distribution a, double param = 0.0)
      : map_(map), a_(std::move(a)), param_(param) {}
  double draw(Rng& rng) const override {
    const double x = sample_one(a_, rng);
    switch (map_) {
      case UnaryMap::Exp:
        return std::exp(x);
      case UnaryMap::Log:
        return std::log(x);
      case UnaryMap::Square:
        return x * x;
      case UnaryMap::Reciprocal:
        return 1.0 / x;
      case UnaryMap::Abs:
        return std::abs(x);
    }
    return x;
  }

 private:
  UnaryMap map_;
  Distribution a_;
  double param_;
};

class IntPower final : public Sampler {
 public:
  IntPower(Distribution a, double exponent) : a_(std::move(a)), exponent_(exponent) {}
  double draw(Rng& rng) const override { return std::pow(sample_one(a_, rng), exponent_); }

 private:
  Distribution a_;
  double exponent_;
};

class Mixture final : public Sampler {
 public:
  Mixture(std::vector<double> weights, std::vector<Distribution> parts)
      : parts_(std::move(parts)), cum_(detail::cumsum(weights)) {}
  double draw(Rng& rng) const override {
    const double u = detail::uniform01(rng) * cum_.back();
    auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    if (it == cum_.end()) --it;
    return sample_one(parts_[static_cast<std::size_t>(it - cum_.begin())], rng);
  }

 private:
  std::vector<Distribution> parts_;
  std::vector<double> cum_;
};

}  // namespace samplers

inline Distribution::Distribution(ExactDistribution d)
    : repr_(std::make_shared<const Repr>(std::move(d))) {}

// ---- bounds and lattice casting ---------------------------------------------

/// Interval carrying all but `eps` of the mass (eps/2 cut on each unbounded
/// side); finite support endpoints are used as they are.
inline std::pair<double, double> truncation_bounds(const Distribution& d, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("truncation_bounds: eps must lie in (0,1)");
  return std::visit(
      detail::overloaded{
          [&](const ExactDistribution& e) {
            auto [lo, hi] = e.support();
            if (!std::isfinite(lo)) lo = e.quantile(eps / 2.0);
            if (!std::isfinite(hi)) hi = e.upper_quantile(eps / 2.0);
            return std::pair{lo, hi};
          },
          [](const LatticeDistribution& l) { return std::pair{l.origin(), l.last_atom()}; },
          [](const DiscreteDistribution& s) {
            return std::pair{s.support().front(), s.support().back()};
          },
          [](const AbsContDistribution& a) { return std::pair{a.lower(), a.upper()}; },
          [](const LebDecDistribution& m) {
            double lo = kInf;
            double hi = -kInf;
            if (m.ac_weight() > 0) {
              lo = std::min(lo, m.ac_part().lower());
              hi = std::max(hi, m.ac_part().upper());
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

/// Casts a finite discrete distribution onto a lattice, filling gaps with
/// zero-probability atoms. Throws NotLattice when the gaps are not integer
/// multiples (relative tolerance 1e-9) of the smallest gap.
inline LatticeDistribution as_lattice(const DiscreteDistribution& d) {
  const auto& s = d.support();
  if (s.size() == 1) return LatticeDistribution(s.front(), 1.0, d.probs(), d.truncated());
  double w = kInf;
  for (std::size_t i = 1; i < s.size(); ++i) w = std::min(w, s[i] - s[i - 1]);
  const double span = s.back() - s.front();
  const double cells = span / w;
  if (cells > 5e7) throw NotLattice("support too sparse to cast onto a lattice");
  std::vector<double> probs(static_cast<std::size_t>(std::llround(cells)) + 1, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double pos = (s[i] - s.front()) / w;
    const double j = std::round(pos);
    if (std::abs(pos - j) > 1e-9 * std::max(1.0, j)) {
      throw NotLattice("support gaps are not integer multiples of the minimal gap");
    }
    probs[static_cast<std::size_t>(j)] += d.probs()[i];
  }
  return LatticeDistribution(s.front(), w, std::move(probs), d.truncated());
}

/// Finite lattice form of a discrete-carrier distribution. Exact families
/// with unbounded support keep all but `eps` of their mass.
inline std::optional<LatticeDistribution> to_lattice(const Distribution& d, double eps) {
  if (const auto* l = d.get_if<LatticeDistribution>()) return *l;
  if (const auto* s = d.get_if<DiscreteDistribution>()) {
    try {
      return as_lattice(*s);
    } catch (const NotLattice&) {
      return std::nullopt;
    }
  }
  if (const auto* e = d.get_if<ExactDistribution>()) {
    if (!e->is_discrete()) return std::nullopt;
    if (e->is_dirac()) return LatticeDistribution(e->dirac_location(), 1.0, {1.0}, false);
    auto [xs, ps] = e->atoms(eps);
    const bool truncated = !std::isfinite(e->support().second - e->support().first);
    const double w = xs.size() > 1 ? xs[1] - xs[0] : std::abs(e->scale());
    return LatticeDistribution(xs.front(), w, std::move(ps), truncated);
  }
  return std::nullopt;
}

/// Finite atom list of a discrete-carrier distribution.
inline DiscreteDistribution to_discrete(const Distribution& d, double eps) {
  if (const auto* s = d.get_if<DiscreteDistribution>()) return *s;
  if (const auto* l = d.get_if<LatticeDistribution>()) {
    std::vector<double> xs;
    std::vector<double> ps;
    for (std::size_t j = 0; j < l->size(); ++j) {
      if (l->probs()[j] > 0.0) {
        xs.push_back(l->atom(j));
        ps.push_back(l->probs()[j]);
      }
    }
    const bool truncated = l->truncated() || std::abs(l->total_mass() - 1.0) > 1e-10;
    return DiscreteDistribution(std::move(xs), std::move(ps), truncated);
  }
  if (const auto* e = d.get_if<ExactDistribution>()) {
    if (!e->is_discrete()) throw CarrierMismatch("to_discrete on a continuous family");
    auto [xs, ps] = e->atoms(eps);
    std::vector<double> kx;
    std::vector<double> kp;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (ps[i] > 0.0) {
        kx.push_back(xs[i]);
        kp.push_back(ps[i]);
      }
    }
    double total = std::accumulate(kp.begin(), kp.end(), 0.0);
    return DiscreteDistribution(std::move(kx), std::move(kp), std::abs(total - 1.0) > 1e-10);
  }
  throw CarrierMismatch("to_discrete on a non-discrete distribution");
}

/// Mean, exact for closed forms and finite atoms, from the tabulated
/// density otherwise.
inline double mean(const Distribution& d) {
  return std::visit(detail::overloaded{
                        [](const ExactDistribution& e) { return e.mean(); },
                        [](const LatticeDistribution& l) { return l.mean(); },
                        [](const DiscreteDistribution& s) { return s.mean(); },
                        [](const AbsContDistribution& a) { return a.mean(); },
                        [](const LebDecDistribution& m) {
                          double s = 0.0;
                          if (m.ac_weight() > 0) s += m.ac_weight() * m.ac_part().mean();
                          if (m.disc_weight() > 0) s += m.disc_weight() * m.disc_part().mean();
                          return s;
                        },
                    },
                    d.repr());
}

}  // namespace distkit
