#pragma once

// Reproduction benchmarks: convolution powers compared with their exact
// laws, non-central chi-square approximations, and FFT versus direct
// summation timings. Each case yields one CSV row with a PASS/FAIL status.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "distkit/arith.hpp"
#include "distkit/conv.hpp"
#include "distkit/distribution.hpp"
#include "distkit/metrics.hpp"
#include "distkit/options.hpp"
#include "distkit/transform.hpp"

namespace distkit::bench {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Row {
  std::string suite;
  std::string name;
  double d_v = kNaN;
  double d_kappa = kNaN;
  double value = kNaN;
  double reference = kNaN;
  double threshold_v = kNaN;
  double threshold_kappa = kNaN;
  double seconds = 0.0;
  std::string invariants = "ok";
  bool pass = false;
};

struct Config {
  unsigned jobs = 1;
  bool heavy = false;  // include the rows needing a 2^26-point transform
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline bool within(double v, double thr) { return std::isnan(thr) || (std::isfinite(v) && v <= thr); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Invariants

/// Mass of a result (1 for exact families).
inline double total_mass(const Distribution& d) {
  return std::visit(distkit::detail::overloaded{
                        [](const ExactDistribution&) { return 1.0; },
                        [](const LatticeDistribution& l) { return l.total_mass(); },
                        [](const DiscreteDistribution& x) { return x.total_mass(); },
                        [](const AbsContDistribution& a) { return a.density_integral(); },
                        [](const LebDecDistribution& m) {
                          return m.ac_weight() * m.ac_part().density_integral() +
                                 m.disc_weight() * m.disc_part().total_mass();
                        },
                    },
                    d.repr());
}

/// Empty when mass, mean and quantile/cdf consistency hold; otherwise a
/// short description of what failed.
inline std::string check_invariants(const Distribution& d, double expected_mean) {
  std::string out;
  auto fail = [&](const std::string& s) { out += out.empty() ? s : "; " + s; };
  const double mass = total_mass(d);
  if (!(std::abs(mass - 1.0) <= 1e-8)) fail("mass " + detail::fmt("%.3e", mass - 1.0));
  if (std::isfinite(expected_mean)) {
    const double m = mean(d);
    const double tol = std::max(1e-6, 1e-4 * std::abs(expected_mean));
    if (!(std::abs(m - expected_mean) <= tol)) fail("mean off by " + detail::fmt("%.3e", m - expected_mean));
  }
  const bool discrete = d.carrier() == Carrier::Discrete;
  for (int i = 0; i < 1000; ++i) {
    const double u = (i + 0.5) / 1000.0;
    const double x = quantile(d, u);
    const double f = cdf(d, x);
    if (!(f >= u - 1e-8)) {
      fail("cdf(quantile(" + detail::fmt("%.4f", u) + ")) = " + detail::fmt("%.10f", f));
      break;
    }
    if (discrete && !(f - point_mass(d, x) < u + 1e-12)) {
      fail("quantile not minimal at u=" + detail::fmt("%.4f", u));
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cases

inline double paper_slack(double paper, double factor, double floor) { return std::max(floor, factor * paper); }

inline Row binom_case(int n, int k, double p, double paper_v, double paper_k) {
  const auto t0 = std::chrono::steady_clock::now();
  Options o;
  o.trunc_quantile = 1e-15;
  const Distribution fft = convpow(Distribution(Binomial{k, p}).generic(), n, o);
  const Distribution exact(Binomial{n * k, p});
  Row r;
  r.suite = "binom";
  r.name = "n=" + std::to_string(n) + " k=" + std::to_string(k) + " p=" + detail::fmt("%g", p);
  r.d_v = total_variation(fft, exact);
  r.d_kappa = kolmogorov(fft, exact, o);
  r.seconds = detail::seconds_since(t0);
  r.threshold_v = paper_slack(paper_v, 50.0, 1e-13);
  r.threshold_kappa = paper_slack(paper_k, 50.0, 1e-13);
  const std::string inv = check_invariants(fft, n * k * p);
  if (!inv.empty()) r.invariants = inv;
  r.pass = detail::within(r.d_v, r.threshold_v) && detail::within(r.d_kappa, r.threshold_kappa) && inv.empty();
  return r;
}

inline Row pois_case(int n, double lambda, double paper_v, double paper_k) {
  const auto t0 = std::chrono::steady_clock::now();
  Options o;
  o.trunc_quantile = 1e-15;
  const Distribution fft = convpow(Distribution(Poisson{lambda}).generic(), n, o);
  const Distribution exact(Poisson{n * lambda});
  Row r;
  r.suite = "pois";
  r.name = "n=" + std::to_string(n) + " lambda=" + detail::fmt("%g", lambda);
  r.d_v = total_variation(fft, exact);
  r.d_kappa = kolmogorov(fft, exact, o);
  r.seconds = detail::seconds_since(t0);
  r.threshold_v = paper_slack(paper_v, 50.0, 1e-11);
  r.threshold_kappa = paper_slack(paper_k, 50.0, 1e-11);
  const std::string inv = check_invariants(fft, n * lambda);
  if (!inv.empty()) r.invariants = inv;
  r.pass = detail::within(r.d_v, r.threshold_v) && detail::within(r.d_kappa, r.threshold_kappa) && inv.empty();
  return r;
}

struct ContinuousSpec {
  int n;
  double param1;  // mean (norm) or rate (exp)
  double param2;  // sd (norm), unused (exp)
  double eps;
  int q;
  double paper_v;
  double paper_k;
  double threshold_v = kNaN;  // NaN: 10 x paper
  double threshold_k = kNaN;
};

struct ContinuousResult {
  Row row;
  Distribution fft;
  Distribution exact;
};

inline ContinuousResult norm_run(const ContinuousSpec& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Options o;
  o.trunc_quantile = s.eps;
  o.grid_exponent = s.q;
  const Distribution fft = convpow(Distribution(Normal{s.param1, s.param2}).generic(), s.n, o);
  const Distribution exact(Normal{s.n * s.param1, std::sqrt(static_cast<double>(s.n)) * s.param2});
  Row r;
  r.suite = "norm";
  r.name = "n=" + std::to_string(s.n) + " mean=" + detail::fmt("%g", s.param1) + " sd=" + detail::fmt("%g", s.param2) +
           " eps=" + detail::fmt("%g", s.eps) + " q=" + std::to_string(s.q);
  r.d_v = total_variation(fft, exact);
  r.d_kappa = kolmogorov(fft, exact, o);
  r.seconds = detail::seconds_since(t0);
  r.threshold_v = std::isnan(s.threshold_v) ? 10.0 * s.paper_v : s.threshold_v;
  r.threshold_kappa = std::isnan(s.threshold_k) ? 10.0 * s.paper_k : s.threshold_k;
  const std::string inv = check_invariants(fft, s.n * s.param1);
  if (!inv.empty()) r.invariants = inv;
  r.pass = detail::within(r.d_v, r.threshold_v) && detail::within(r.d_kappa, r.threshold_kappa) && inv.empty();
  return {r, fft, exact};
}

/// Start of the range where the tabulated power of a distribution on
/// [A, ...] is accurate: N*A + (N/2 + 1/2) h.
inline double accurate_lower_limit(const Distribution& fft, int n) {
  const auto* a = fft.get_if<AbsContDistribution>();
  if (a == nullptr) return -kInf;
  const auto g = a->grid();
  return g.lower + (0.5 * n + 0.5) * g.h;
}

inline ContinuousResult exp_run(const ContinuousSpec& s) {
  const auto t0 = std::chrono::steady_clock::now();
  Options o;
  o.trunc_quantile = s.eps;
  o.grid_exponent = s.q;
  const Distribution fft = convpow(Distribution(Exponential{s.param1}).generic(), s.n, o);
  const Distribution exact(Gamma{static_cast<double>(s.n), s.param1});
  Row r;
  r.suite = "exp";
  r.name = "n=" + std::to_string(s.n) + " rate=" + detail::fmt("%g", s.param1) + " eps=" + detail::fmt("%g", s.eps) +
           " q=" + std::to_string(s.q);
  r.d_v = total_variation(fft, exact);
  r.d_kappa = kolmogorov(fft, exact, o);
  r.seconds = detail::seconds_since(t0);
  r.threshold_v = std::isnan(s.threshold_v) ? 10.0 * s.paper_v : s.threshold_v;
  r.threshold_kappa = std::isnan(s.threshold_k) ? 10.0 * s.paper_k : s.threshold_k;
  const double m = s.n / s.param1;
  const std::string inv = check_invariants(fft, m);
  if (!inv.empty()) r.invariants = inv;
  r.pass = detail::within(r.d_v, r.threshold_v) && detail::within(r.d_kappa, r.threshold_kappa) && inv.empty();
  return {r, fft, exact};
}

enum class ChisqMethod { FFT1, FFT2, FFT3 };

inline const char* method_name(ChisqMethod m) {
  switch (m) {
    case ChisqMethod::FFT1: return "FFT1";
    case ChisqMethod::FFT2: return "FFT2";
    case ChisqMethod::FFT3: return "FFT3";
  }
  return "";
}

inline double method_tolerance(ChisqMethod m) {
  switch (m) {
    case ChisqMethod::FFT1: return 5e-5;
    case ChisqMethod::FFT2: return 2e-5;
    case ChisqMethod::FFT3: return 5e-6;
  }
  return 0.0;
}

/// Sum of squared normals approximating ChiSq(df, ncp), at eps = 1e-8, q = 18:
///   FFT1: df copies of N(sqrt(ncp/df), 1)^2
///   FFT2: df - 1 copies of N(0, 1)^2 plus N(sqrt(ncp), 1)^2
///   FFT3: ChiSq(df - 1) plus N(sqrt(ncp), 1)^2
inline Distribution chisq_approximation(int df, double ncp, ChisqMethod m, const Options& o) {
  switch (m) {
    case ChisqMethod::FFT1:
      return convpow(square(Distribution(Normal{std::sqrt(ncp / df), 1.0}), o), df, o);
    case ChisqMethod::FFT2:
      return convolve(convpow(square(Distribution(Normal{0.0, 1.0}), o), df - 1, o),
                      square(Distribution(Normal{std::sqrt(ncp), 1.0}), o), o);
    case ChisqMethod::FFT3:
      return convolve(Distribution(ChiSq{static_cast<double>(df - 1), 0.0}),
                      square(Distribution(Normal{std::sqrt(ncp), 1.0}), o), o);
  }
  throw DomainError("unknown method");
}

inline Options chisq_options() {
  Options o;
  o.trunc_quantile = 1e-8;
  o.grid_exponent = 18;
  return o;
}

struct ChisqSpec {
  int df;
  double ncp;
  std::vector<double> xs;
};

/// One row per (spec, x); the approximation is built once per spec.
inline std::vector<Row> chisq_rows(const ChisqSpec& s, ChisqMethod m) {
  const auto t0 = std::chrono::steady_clock::now();
  const Options o = chisq_options();
  const Distribution d = chisq_approximation(s.df, s.ncp, m, o);
  const double build = detail::seconds_since(t0);
  const std::string inv = check_invariants(d, s.df + s.ncp);
  const Distribution exact(ChiSq{static_cast<double>(s.df), s.ncp});
  std::vector<Row> rows;
  for (double x : s.xs) {
    Row r;
    r.suite = "chisq";
    r.name = std::string(method_name(m)) + " df=" + std::to_string(s.df) + " ncp=" + detail::fmt("%g", s.ncp) +
             " x=" + detail::fmt("%g", x);
    r.value = cdf(d, x);
    r.reference = cdf(exact, x);
    r.d_v = std::abs(r.value - r.reference);
    r.threshold_v = method_tolerance(m);
    r.seconds = build;
    if (!inv.empty()) r.invariants = inv;
    r.pass = detail::within(r.d_v, r.threshold_v) && inv.empty();
    rows.push_back(r);
  }
  return rows;
}

// Timing of the lattice convolution power of a discretized ChiSq(1) against
// direct summation.
struct TimingResult {
  double fft_seconds;
  double naive_seconds;
  double max_abs_diff;
  std::string invariants;
};

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline TimingResult timing_run(int q, int n = 10, int runs = 5) {
  const Distribution chi(ChiSq{1.0, 0.0});
  const auto [a, b] = truncation_bounds(chi, 1e-5);
  const LatticeDistribution severity = discretize(chi, a, b, q).standardized();
  const Distribution sev(severity);
  Options o;
  o.grid_exponent = q;
  std::vector<double> tf;
  std::vector<double> tn;
  std::optional<Distribution> fft;
  std::optional<LatticeDistribution> naive;
  for (int i = 0; i < runs; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    fft = convpow(sev, n, o);
    tf.push_back(detail::seconds_since(t0));
    t0 = std::chrono::steady_clock::now();
    naive = naive_aggregate_oracle(severity, n);
    tn.push_back(detail::seconds_since(t0));
  }
  const auto* l = fft->get_if<LatticeDistribution>();
  double diff = kInf;
  if (l != nullptr && l->size() == naive->size()) {
    diff = 0.0;
    for (std::size_t j = 0; j < l->size(); ++j) diff = std::max(diff, std::abs(l->probs()[j] - naive->probs()[j]));
  }
  return {median(tf), median(tn), diff, check_invariants(*fft, n * severity.mean())};
}

inline Row timing_row(int q, double max_ratio) {
  const TimingResult t = timing_run(q);
  Row r;
  r.suite = "timing";
  r.name = "N=10 q=" + std::to_string(q);
  r.value = t.fft_seconds / t.naive_seconds;
  r.reference = max_ratio;
  r.d_v = t.max_abs_diff;
  r.threshold_v = 1e-12;
  r.seconds = t.fft_seconds + t.naive_seconds;
  if (!t.invariants.empty()) r.invariants = t.invariants;
  r.pass = r.value <= max_ratio && t.max_abs_diff <= 1e-12 && t.invariants.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Suites

struct BinomSpec {
  int n, k;
  double p, paper_v, paper_k;
};

inline const std::vector<BinomSpec>& binom_specs() {
  static const std::vector<BinomSpec> v = {
      {2, 10, 0.5, 3.3e-16, 2.2e-16},  {5, 20, 0.7, 1.7e-15, 9.6e-16},   {10, 30, 0.8, 2.6e-15, 1.1e-15},
      {100, 15, 0.2, 5.3e-15, 4.3e-15}, {1000, 50, 0.4, 8.3e-13, 4.2e-13},
  };
  return v;
}

struct PoisSpec {
  int n;
  double lambda, paper_v, paper_k;
};

inline const std::vector<PoisSpec>& pois_specs() {
  static const std::vector<PoisSpec> v = {
      {2, 0.1, 2.9e-16, 2.2e-16}, {5, 10, 3.7e-15, 3.1e-15},  {10, 7.5, 4.0e-15, 4.0e-15},
      {100, 15, 1.8e-13, 1.0e-13}, {1000, 50, 2.0e-11, 1.0e-11},
  };
  return v;
}

inline std::vector<ContinuousSpec> norm_specs() {
  std::vector<ContinuousSpec> v;
  for (auto [mu, sd] : std::vector<std::pair<double, double>>{{-10, 100}, {-2, 5}, {0, 1}, {1, 50}, {100, 1000}}) {
    ContinuousSpec s{2, mu, sd, 1e-8, 12, 1.2e-6, 2.1e-6};
    s.threshold_v = 6e-6;
    v.push_back(s);
  }
  const std::vector<ContinuousSpec> table = {
      {2, 0, 1, 1e-6, 8, 2.2e-4, 3.9e-4},   {2, 0, 1, 1e-6, 10, 1.3e-5, 2.3e-5},  {2, 0, 1, 1e-6, 12, 3.5e-6, 1.8e-6},
      {2, 0, 1, 1e-8, 10, 1.9e-5, 3.4e-5},  {2, 0, 1, 1e-8, 14, 8.5e-8, 1.2e-7},  {2, 0, 1, 1e-10, 12, 1.6e-6, 2.7e-6},
      {2, 0, 1, 1e-10, 14, 9.8e-8, 1.7e-7}, {2, 0, 1, 1e-10, 18, 5.2e-10, 5.3e-10}, {5, 0, 1, 1e-8, 12, 3.4e-6, 9.7e-4},
      {5, 0, 1, 1e-8, 16, 6.6e-8, 6.1e-5},  {10, 0, 1, 1e-8, 12, 1.1e-5, 1.1e-5}, {10, 0, 1, 1e-8, 16, 6.3e-8, 3.5e-8},
      {50, 0, 1, 1e-8, 12, 1.6e-4, 9.6e-5}, {50, 0, 1, 1e-8, 18, 1.0e-7, 5.3e-8},
  };
  for (auto s : table) {
    if (s.eps == 1e-10 && s.q == 14) {
      s.threshold_v = 5e-7;
      s.threshold_k = 9e-7;
    }
    v.push_back(s);
  }
  return v;
}

inline std::vector<ContinuousSpec> exp_specs(bool heavy) {
  std::vector<ContinuousSpec> v;
  for (double rate : {0.01, 0.5, 1.0, 5.0, 10.0}) v.push_back({2, rate, 0, 1e-8, 12, 5.6e-6, 4.0e-5});
  const std::vector<ContinuousSpec> table = {
      {2, 1, 0, 1e-6, 8, 7.5e-4, 4.7e-3},    {2, 1, 0, 1e-6, 10, 4.7e-5, 3.4e-4}, {2, 1, 0, 1e-6, 12, 4.5e-6, 2.2e-5},
      {2, 1, 0, 1e-8, 10, 8.1e-5, 6.0e-4},   {2, 1, 0, 1e-8, 16, 3.6e-8, 1.6e-7}, {2, 1, 0, 1e-10, 12, 8.0e-6, 6.2e-5},
      {2, 1, 0, 1e-10, 14, 5.1e-7, 3.9e-6},  {2, 1, 0, 1e-10, 20, 2.7e-10, 9.6e-10}, {5, 1, 0, 1e-8, 12, 2.7e-5, 2.8e-5},
      {5, 1, 0, 1e-8, 16, 1.4e-7, 9.5e-8},   {10, 1, 0, 1e-8, 12, 1.4e-4, 1.4e-4}, {10, 1, 0, 1e-8, 16, 6.2e-7, 5.3e-7},
      {50, 1, 0, 1e-8, 12, 4.9e-3, 4.9e-3},
  };
  for (auto s : table) {
    if (s.n == 5 && s.q == 16) s.threshold_v = 1e-6;
    v.push_back(s);
  }
  if (heavy) v.push_back({50, 1, 0, 1e-8, 20, 3.8e-7, 3.8e-7});
  return v;
}

inline const std::vector<ChisqSpec>& chisq_specs() {
  static const std::vector<ChisqSpec> v = {
      {4, 4, {1.765, 10.0, 17.309, 24.0}}, {4, 10, {10.0}},          {7, 1, {4.0, 16.004}},
      {7, 16, {10.257, 24.0, 38.970}},     {12, 6, {24.0}},          {12, 18, {24.0}},
      {16, 8, {30.0, 40.0}},               {16, 32, {30.0, 60.0}},   {24, 24, {36.0, 48.0, 72.0}},
  };
  return v;
}

/// Largest relative deviation of d_v from the mean of a group of rows.
inline Row invariance_row(const std::string& suite, const std::string& name, const std::vector<Row>& group) {
  double sum = 0.0;
  for (const auto& r : group) sum += r.d_v;
  const double avg = sum / static_cast<double>(group.size());
  double worst = 0.0;
  for (const auto& r : group) worst = std::max(worst, std::abs(r.d_v - avg) / avg);
  Row r;
  r.suite = suite;
  r.name = name;
  r.value = worst;
  r.reference = 0.1;
  r.pass = worst <= 0.1;
  r.invariants = "-";
  return r;
}

/// Runs tasks on `jobs` threads; results keep task order.
template <class T>
std::vector<T> run_parallel(const std::vector<std::function<T()>>& tasks, unsigned jobs) {
  std::vector<T> out(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> threads;
  for (unsigned i = 1; i < n; ++i) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

inline std::vector<std::string> suite_names() { return {"binom", "pois", "norm", "exp", "chisq", "timing"}; }

inline std::vector<Row> run_suite(const std::string& suite, const Config& cfg = {}) {
  std::vector<std::function<std::vector<Row>()>> tasks;
  if (suite == "binom") {
    for (const auto& s : binom_specs()) tasks.push_back([s] { return std::vector<Row>{binom_case(s.n, s.k, s.p, s.paper_v, s.paper_k)}; });
  } else if (suite == "pois") {
    for (const auto& s : pois_specs()) tasks.push_back([s] { return std::vector<Row>{pois_case(s.n, s.lambda, s.paper_v, s.paper_k)}; });
  } else if (suite == "norm") {
    for (const auto& s : norm_specs()) tasks.push_back([s] { return std::vector<Row>{norm_run(s).row}; });
  } else if (suite == "exp") {
    for (const auto& s : exp_specs(cfg.heavy)) {
      tasks.push_back([s] {
        ContinuousResult res = exp_run(s);
        std::vector<Row> rows{res.row};
        if (s.n == 5 && s.q == 16) {
          Options o;
          const double lim = accurate_lower_limit(res.fft, s.n);
          Row t;
          t.suite = "exp";
          t.name = res.row.name + " restricted d_kappa";
          t.d_v = res.row.d_v;
          t.d_kappa = kolmogorov(res.fft, res.exact, o, lim);
          t.threshold_kappa = res.row.d_v;
          t.invariants = "-";
          t.pass = t.d_kappa <= t.d_v;
          rows.push_back(t);
        }
        return rows;
      });
    }
  } else if (suite == "chisq") {
    for (const auto& s : chisq_specs()) {
      for (auto m : {ChisqMethod::FFT1, ChisqMethod::FFT2, ChisqMethod::FFT3}) {
        tasks.push_back([s, m] { return chisq_rows(s, m); });
      }
    }
  } else if (suite == "timing") {
    // Timings run alone so parallel jobs cannot skew them.
    return {timing_row(12, 0.5), timing_row(14, 0.05)};
  } else {
    throw DomainError("unknown bench suite '" + suite + "'");
  }
  std::vector<Row> rows;
  for (auto& group : run_parallel(tasks, cfg.jobs)) rows.insert(rows.end(), group.begin(), group.end());
  if (suite == "norm") {
    rows.push_back(invariance_row("norm", "invariance n=2 eps=1e-08 q=12",
                                  std::vector<Row>(rows.begin(), rows.begin() + 5)));
  } else if (suite == "exp") {
    rows.push_back(invariance_row("exp", "invariance n=2 eps=1e-08 q=12",
                                  std::vector<Row>(rows.begin(), rows.begin() + 5)));
  }
  return rows;
}

inline std::string csv_header() {
  return "suite,case,d_v,d_kappa,value,reference,threshold_v,threshold_kappa,seconds,invariants,status";
}

inline std::string csv_line(const Row& r) {
  auto num = [](double v) { return std::isnan(v) ? std::string() : detail::fmt("%.7g", v); };
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  std::ostringstream out;
  out << r.suite << ',' << quote(r.name) << ',' << num(r.d_v) << ',' << num(r.d_kappa) << ',' << num(r.value) << ','
      << num(r.reference) << ',' << num(r.threshold_v) << ',' << num(r.threshold_kappa) << ','
      << detail::fmt("%.3f", r.seconds) << ',' << quote(r.invariants) << ',' << (r.pass ? "PASS" : "FAIL");
  return out.str();
}

inline std::string to_csv(const std::vector<Row>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += csv_line(r) + "\n";
  return out;
}

}  // namespace distkit::bench
