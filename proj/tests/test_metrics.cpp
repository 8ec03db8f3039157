#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "distkit/conv.hpp"
#include "distkit/metrics.hpp"

using namespace distkit;

namespace {

DiscreteDistribution bernoulli(double p) { return DiscreteDistribution({0.0, 1.0}, {1.0 - p, p}); }

LatticeDistribution random_lattice(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(m);
  double s = 0.0;
  for (auto& v : p) s += v = u(rng);
  for (auto& v : p) v /= s;
  return LatticeDistribution(0.0, 1.0, std::move(p));
}

}  // namespace

TEST_CASE("distance of a law to itself is zero") {
  const Options o;
  const Distribution c = convolve(Distribution(Normal{0, 1}).generic(), Distribution(Gamma{2, 1}).generic(), o);
  for (const auto& d : {Distribution(Normal{1, 2}), Distribution(Poisson{3}), c}) {
    CHECK(total_variation(d, d) == 0.0);
    CHECK(kolmogorov(d, d, o) == 0.0);
  }
}

TEST_CASE("closed-form distances") {
  const Options o;
  CHECK(std::abs(total_variation(Distribution(bernoulli(0.5)), Distribution(bernoulli(0.75))) - 0.25) < 1e-15);
  CHECK(std::abs(kolmogorov(Distribution(bernoulli(0.5)), Distribution(bernoulli(0.75)), o) - 0.25) < 1e-15);
  CHECK(std::abs(kolmogorov(Distribution(Uniform{0, 1}), Distribution(Uniform{0.1, 1.1}), o) - 0.1) < 1e-9);
  CHECK(std::abs(total_variation(Distribution(Uniform{0, 1}), Distribution(Uniform{0.5, 1.5})) - 0.5) < 1e-8);
}

TEST_CASE("kolmogorov distance never exceeds total variation on discrete pairs") {
  const Options o;
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const Distribution a(random_lattice(12, rng));
    const Distribution b(random_lattice(12, rng));
    const double dv = total_variation(a, b);
    const double dk = kolmogorov(a, b, o);
    CHECK(dk <= dv + 1e-15);
    CHECK(std::abs(dv - total_variation(b, a)) < 1e-12);
    CHECK(std::abs(dk - kolmogorov(b, a, o)) < 1e-12);
  }
  const Distribution p(Poisson{4});
  const Distribution q(Binomial{20, 0.2});
  CHECK(kolmogorov(p, q, o) <= total_variation(p, q) + 1e-15);
}

TEST_CASE("continuous pairs respect the quadrature slack") {
  const Options o;
  const Distribution e = Distribution(Exponential{1}).generic();
  const Distribution s = convolve(e, e, o);
  const Distribution g(Gamma{2, 1});
  CHECK(kolmogorov(s, g, o) <= total_variation(s, g) + 5e-8);
  CHECK(std::abs(total_variation(s, g) - total_variation(g, s)) < 1e-12);
}

TEST_CASE("mixing carriers is rejected") {
  CHECK_THROWS_AS(total_variation(Distribution(Poisson{1}), Distribution(Normal{0, 1})), CarrierMismatch);
}

TEST_CASE("naive aggregate oracle") {
  std::mt19937_64 rng(23);
  const LatticeDistribution s = random_lattice(64, rng);
  const LatticeDistribution one = naive_aggregate_oracle(s, 1);
  CHECK(one.probs() == s.probs());

  const LatticeDistribution four = naive_aggregate_oracle(s, 4);
  LatticeDistribution acc = s;
  for (int k = 1; k < 4; ++k) acc = convolve_lattice(acc, s);
  REQUIRE(acc.size() == four.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < acc.size(); ++i) worst = std::max(worst, std::abs(acc.probs()[i] - four.probs()[i]));
  CHECK(worst < 1e-12);
  CHECK_THROWS_AS(naive_aggregate_oracle(s, 0), DomainError);
}
