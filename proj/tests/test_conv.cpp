#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "distkit/conv.hpp"
#include "distkit/metrics.hpp"

using namespace distkit;

namespace {

double binom_pmf(int n, double p, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
}

std::vector<double> direct_sum(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> z(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) z[i + j] += a[i] * b[j];
  }
  return z;
}

Options opts(double eps, int q) {
  Options o;
  o.trunc_quantile = eps;
  o.grid_exponent = q;
  return o;
}

}  // namespace

TEST_CASE("exact dispatch keeps parameter arithmetic exact") {
  const Distribution s = convolve(Distribution(Normal{1, 2}), Distribution(Normal{-2, 1}), Options{});
  const auto* e = s.exact();
  REQUIRE(e != nullptr);
  REQUIRE(e->holds<Normal>());
  CHECK(e->identity_frame());
  const auto& n = std::get<Normal>(e->family());
  CHECK(n.mean == -1.0);
  CHECK(n.sd == std::sqrt(5.0));
  CHECK(std::abs(n.sd - 2.23606797749979) < 1e-14);

  const auto pois = convolve(Distribution(Poisson{1.5}), Distribution(Poisson{2}), Options{});
  CHECK(std::get<Poisson>(pois.exact()->family()).lambda == 3.5);
  const auto gam = convolve(Distribution(Exponential{2}), Distribution(Exponential{2}), Options{});
  CHECK(std::get<Gamma>(gam.exact()->family()) == Gamma{2, 2});
  const auto chi = convolve(Distribution(ChiSq{3, 1}), Distribution(ChiSq{1, 3}), Options{});
  CHECK(std::get<ChiSq>(chi.exact()->family()) == ChiSq{4, 4});
  // Different success probabilities fall through to the lattice path.
  const auto mixed = convolve(Distribution(Binomial{2, 0.5}), Distribution(Binomial{2, 0.5000001}), Options{});
  CHECK(mixed.exact() == nullptr);
}

TEST_CASE("binomial sum against the direct double sum") {
  const Distribution b1(Binomial{3, 0.5});
  const Distribution b2(Binomial{2, 0.5});
  const auto exact = convolve(b1, b2, Options{});
  CHECK(std::get<Binomial>(exact.exact()->family()) == Binomial{5, 0.5});

  std::vector<double> p1, p2;
  for (int k = 0; k <= 3; ++k) p1.push_back(binom_pmf(3, 0.5, k));
  for (int k = 0; k <= 2; ++k) p2.push_back(binom_pmf(2, 0.5, k));
  const auto ref = direct_sum(p1, p2);
  const auto fft = convolve(b1.generic(), b2.generic(), Options{});
  for (int k = 0; k <= 5; ++k) {
    CHECK(std::abs(pdf(fft, k) - ref[k]) < 1e-14);
    CHECK(std::abs(pdf(fft, k) - binom_pmf(5, 0.5, k)) < 1e-14);
  }
}

TEST_CASE("adding a point mass at zero changes nothing") {
  const Distribution d = convolve(Distribution(Uniform{0, 1}).generic(), Distribution(Exponential{1}).generic(),
                                  Options{});
  const Distribution s = convolve(Distribution(Dirac{0}), d, Options{});
  for (double x : {-0.5, 0.1, 0.7, 1.3, 4.0}) {
    CHECK(std::abs(cdf(s, x) - cdf(d, x)) < 1e-12);
    CHECK(std::abs(pdf(s, x) - pdf(d, x)) < 1e-12);
  }
  for (double u : {0.01, 0.3, 0.5, 0.99}) CHECK(std::abs(quantile(s, u) - quantile(d, u)) < 1e-12);
}

TEST_CASE("lattice compatibility") {
  const LatticeDistribution a(0.0, 1.0, {0.25, 0.25, 0.25, 0.25});
  const LatticeDistribution half(0.5, 1.0, {0.25, 0.25, 0.25, 0.25});
  const LatticeDistribution shifted(3.0, 1.0, {0.25, 0.25, 0.25, 0.25});
  CHECK_FALSE(lattices_compatible(a, half));
  CHECK(lattices_compatible(a, shifted));
  const LatticeDistribution one(1.0, 1.0, {1.0});
  const LatticeDistribution two(2.0, 1.0, {1.0});
  CHECK_FALSE(lattices_compatible(one, two));
  CHECK_THROWS_AS(convolve_lattice(one, two), IncompatibleLattices);
  const auto s = convolve(Distribution(one), Distribution(two), Options{});
  CHECK(cdf(s, 3.0 - 1e-6) == 0.0);
  CHECK(cdf(s, 3.0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("lattice convolution") {
  const LatticeDistribution l1(0.0, 0.5, {0.2, 0.5, 0.3});
  const LatticeDistribution l2(1.0, 0.5, {0.6, 0.1, 0.3});
  const auto r = convolve_lattice(l1, l2);
  CHECK(r.origin() == 1.0);
  CHECK(r.width() == 0.5);
  const auto ref = direct_sum(l1.probs(), l2.probs());
  REQUIRE(r.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(r.probs()[i] - ref[i]) < 1e-15);

  // A single atom fails the support-length criterion and goes through the direct sum.
  const Distribution shifted = convolve(Distribution(LatticeDistribution(2.0, 0.5, {1.0})), Distribution(l1), Options{});
  for (std::size_t i = 0; i < l1.size(); ++i) CHECK(std::abs(point_mass(shifted, 2.0 + l1.atom(i)) - l1.probs()[i]) < 1e-15);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(64), y(40);
  double sx = 0.0, sy = 0.0;
  for (auto& v : x) sx += v = u(rng);
  for (auto& v : y) sy += v = u(rng);
  for (auto& v : x) v /= sx;
  for (auto& v : y) v /= sy;
  const auto big = convolve_lattice(LatticeDistribution(-3.0, 1.0, x), LatticeDistribution(5.0, 1.0, y));
  const auto bref = direct_sum(x, y);
  double worst = 0.0;
  for (std::size_t i = 0; i < bref.size(); ++i) worst = std::max(worst, std::abs(big.probs()[i] - bref[i]));
  CHECK(worst < 1e-13);
  CHECK(std::abs(big.total_mass() - 1.0) < 1e-12);

  std::vector<double> bp;
  for (int k = 0; k <= 30; ++k) bp.push_back(binom_pmf(30, 0.8, k));
  const LatticeDistribution b30(0.0, 1.0, bp);
  const auto b60 = Distribution(convolve_lattice(b30, b30));
  CHECK(total_variation(b60, Distribution(Binomial{60, 0.8})) <= 1e-14);
}

TEST_CASE("discretization on a grid") {
  const auto u = discretize(Distribution(Uniform{0, 1}), 0.0, 1.0, 3);
  REQUIRE(u.size() == 8);
  CHECK(u.origin() == 1.0 / 16);
  CHECK(u.width() == 1.0 / 8);
  for (double p : u.probs()) CHECK(p == Catch::Approx(0.125).margin(1e-15));

  const Distribution n(Normal{0, 1});
  const auto [a, b] = truncation_bounds(n, 1e-5);
  const auto ln = discretize(n, a, b, 12);
  CHECK(std::abs(ln.total_mass() - (1.0 - 1e-5)) < 1e-12);
  CHECK(ln.truncated());

  const Distribution e(Exponential{1});
  const auto [ea, eb] = truncation_bounds(e, 1e-5);
  const auto le = discretize(e, ea, eb, 10);
  CHECK(std::abs(le.probs()[0] - (1.0 - std::exp(-le.width()))) < 1e-15);

  CHECK_THROWS_AS(discretize(n, 1.0, 1.0, 10), DomainError);
}

TEST_CASE("sum of two uniforms is triangular") {
  const auto t = convolve_abscont(Distribution(Uniform{0, 1}), Distribution(Uniform{0, 1}), Options{});
  CHECK(std::abs(t.pdf(1.0) - 1.0) < 2e-3);
  CHECK(std::abs(t.cdf(1.0) - 0.5) < 1e-6);
  for (double x : {0.25, 0.5, 1.5, 1.75}) CHECK(std::abs(t.pdf(x) - (x < 1 ? x : 2 - x)) < 2e-3);
  CHECK(t.pdf(-0.1) == 0.0);
  CHECK(t.pdf(2.1) == 0.0);
}

TEST_CASE("sum of two exponentials against the gamma law") {
  const auto o = opts(1e-8, 12);
  const Distribution e = Distribution(Exponential{1}).generic();
  const Distribution s = convolve(e, e, o);
  CHECK(s.is<AbsContDistribution>());
  CHECK(total_variation(s, Distribution(Gamma{2, 1})) <= 2e-5);
}

TEST_CASE("continuous convolution is symmetric") {
  const Distribution f1(Normal{0.5, 1});
  const Distribution f2(Gamma{2, 3});
  const auto a = convolve_abscont(f1, f2, Options{});
  const auto b = convolve_abscont(f2, f1, Options{});
  REQUIRE(a.cdf_knots().size() == b.cdf_knots().size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.cdf_knots().size(); ++i) {
    worst = std::max(worst, std::abs(a.cdf_knots()[i] - b.cdf_knots()[i]));
    worst = std::max(worst, std::abs(a.cdf_values()[i] - b.cdf_values()[i]));
  }
  for (std::size_t i = 0; i < a.density_values().size(); ++i) {
    worst = std::max(worst, std::abs(a.density_values()[i] - b.density_values()[i]));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("discrete plus continuous by direct computation") {
  // Tail cuts (eps/2) and linear interpolation between knots (h^2/8) bound
  // the distance from below; a small eps and a fine grid keep both under 1e-8.
  const auto o = opts(1e-10, 16);
  const auto shifted = convolve_mixed(DiscreteDistribution({2.0}, {1.0}), Distribution(Normal{0, 1}), o);
  CHECK(kolmogorov(Distribution(shifted), Distribution(Normal{2, 1}), o) <= 1e-8);

  const auto u2 =
      convolve_mixed(DiscreteDistribution({0.0, 1.0}, {0.5, 0.5}), Distribution(Uniform{0, 1}), Options{});
  CHECK(kolmogorov(Distribution(u2), Distribution(Uniform{0, 2})) <= 1e-6);
}

TEST_CASE("lebesgue-decomposed operands convolve component-wise") {
  const Options o;
  const DiscreteDistribution zero({0.0}, {1.0});
  const AbsContDistribution unif = convolve_mixed(zero, Distribution(Uniform{0, 1}), o);
  const Distribution d(LebDecDistribution(0.5, unif, 0.5, zero));
  const Distribution s = convolve(d, d, o);
  const auto* m = s.get_if<LebDecDistribution>();
  REQUIRE(m != nullptr);
  CHECK(std::abs(m->disc_weight() - 0.25) < 1e-12);
  CHECK(std::abs(m->ac_weight() + m->disc_weight() - 1.0) < 1e-12);
  CHECK(std::abs(point_mass(s, 0.0) - 0.25) < 1e-12);

  // Monte Carlo oracle drawn straight from the definition.
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 1000000;
  std::vector<double> xs(n);
  for (auto& x : xs) {
    const double a = u(rng) < 0.5 ? 0.0 : u(rng);
    const double b = u(rng) < 0.5 ? 0.0 : u(rng);
    x = a + b;
  }
  std::sort(xs.begin(), xs.end());
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0, 1.3, 1.8}) {
    const double ecdf =
        static_cast<double>(std::upper_bound(xs.begin(), xs.end(), t) - xs.begin()) / static_cast<double>(n);
    CHECK(std::abs(cdf(s, t) - ecdf) < 0.005);
  }

  for (double t : {-1.0, 0.0, 0.4, 1.0, 1.7, 3.0}) {
    CHECK(std::abs(cdf(s, t) - (m->ac_weight() * m->ac_part().cdf(t) + m->disc_weight() * m->disc_part().cdf(t))) <
          1e-12);
  }
}

TEST_CASE("purely discrete lebesgue parts stay discrete") {
  const Options o;
  const DiscreteDistribution a({0.0, 1.0}, {0.5, 0.5});
  const DiscreteDistribution b({0.0, 2.0}, {0.25, 0.75});
  const Distribution s = convolve_lebdec(Distribution(a), Distribution(b), o);
  CHECK(s.carrier() == Carrier::Discrete);
  const auto ref = convolve_discrete_direct(a, b);
  for (double x : ref.support()) CHECK(std::abs(point_mass(s, x) - ref.pmf(x)) < 1e-15);
}

TEST_CASE("convolution powers") {
  const Distribution u(Uniform{0, 1});
  CHECK(convpow(u, 1, Options{}).is<ExactDistribution>());
  CHECK_THROWS_AS(convpow(u, 0, Options{}), DomainError);

  CHECK(std::get<Gamma>(convpow(Distribution(Exponential{3}), 5, Options{}).exact()->family()) == Gamma{5, 3});
  CHECK(std::get<Binomial>(convpow(Distribution(Binomial{30, 0.8}), 10, Options{}).exact()->family()) ==
        Binomial{300, 0.8});
  CHECK(std::get<Poisson>(convpow(Distribution(Poisson{15}), 100, Options{}).exact()->family()).lambda == 1500);

  const auto small = convpow(Distribution(Binomial{3, 0.5}).generic(), 4, Options{});
  for (int k = 0; k <= 12; ++k) CHECK(std::abs(pdf(small, k) - binom_pmf(12, 0.5, k)) < 1e-14);

  const auto tri = convpow(u.generic(), 2, Options{});
  const auto pair = convolve(u.generic(), u.generic(), Options{});
  CHECK(kolmogorov(tri, pair) < 1e-6);
}

TEST_CASE("composite sum: associativity and mean additivity") {
  const Options o;
  const Distribution d1(Normal{1, 2});
  const Distribution d2 = convpow(Distribution(Uniform{0, 1}), 3, o);
  const Distribution d3(Poisson{1});
  const Distribution left = convolve(convolve(d1, d2, o), d3, o);
  const Distribution right = convolve(d1, convolve(d2, d3, o), o);
  CHECK(kolmogorov(left, right, o) <= 1e-4);

  const double expected = 1.0 + 1.5 + 1.0;
  CHECK(std::abs(mean(left) - expected) <= std::max(1e-6, 1e-4 * expected));
  CHECK(std::abs(mean(right) - expected) <= std::max(1e-6, 1e-4 * expected));
}

TEST_CASE("subtraction") {
  const auto n = subtract(Distribution(Normal{1, 2}), Distribution(Normal{2, 1}), Options{});
  const auto& f = std::get<Normal>(n.exact()->family());
  CHECK(f.mean == -1.0);
  CHECK(f.sd == std::sqrt(5.0));

  const auto d = subtract(Distribution(Dirac{5}), Distribution(Dirac{3}), Options{});
  REQUIRE(d.is_dirac());
  CHECK(d.exact()->dirac_location() == 2.0);

  const Distribution g = Distribution(Gamma{3, 2}).generic();
  CHECK(std::abs(mean(subtract(g, g, Options{}))) < 1e-6);
}
