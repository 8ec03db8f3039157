// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "distkit/distkit.hpp"

using namespace distkit;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// All bench rows, keyed by "suite/case".
std::map<std::string, bench::Row> rows;
std::vector<bench::Row> ordered;

const bench::Row* row(const std::string& suite, const std::string& name) {
  const auto it = rows.find(suite + "/" + name);
  if (it == rows.end()) {
    std::printf("  missing bench row %s/%s\n", suite.c_str(), name.c_str());
    return nullptr;
  }
  return &it->second;
}

double rel_spread(const std::vector<double>& v) {
  double avg = 0.0;
  for (double x : v) avg += x;
  avg /= static_cast<double>(v.size());
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x - avg) / avg);
  return worst;
}

void criterion1() {
  const auto v = expr::eval("Norm(1,2)+Norm(-2,1)");
  const auto& d = std::get<Distribution>(v);
  bool ok = d.exact() != nullptr && d.exact()->holds<Normal>() && d.exact()->identity_frame();
  double mean = 0.0, sd = 0.0;
  if (ok) {
    const auto& n = std::get<Normal>(d.exact()->family());
    mean = n.mean;
    sd = n.sd;
    ok = mean == -1.0 && sd == std::sqrt(1.0 * 1.0 + 2.0 * 2.0) && std::abs(sd - 2.23606797749979) <= 1e-14;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "Normal(mean=%.15g, sd=%.15g)", mean, sd);
  report(1, ok, buf);
}

void criterion2() {
  bool ok = true;
  std::string msg;
  const bench::Row* main = row("binom", "n=10 k=30 p=0.8");
  if (main == nullptr) {
    ok = false;
  } else {
    ok = main->d_v <= 1e-13 && main->d_kappa <= 1e-13 && main->seconds < 5.0;
    msg = "(10,30,.8) d_v=" + num(main->d_v) + " d_kappa=" + num(main->d_kappa) + " t=" + num(main->seconds) + "s";
  }
  for (const char* name : {"n=2 k=10 p=0.5", "n=5 k=20 p=0.7"}) {
    const bench::Row* r = row("binom", name);
    if (r == nullptr) {
      ok = false;
      continue;
    }
    ok = ok && r->d_v <= 1e-13 && r->seconds < 5.0;
    msg += std::string("; ") + name + " d_v=" + num(r->d_v);
  }
  report(2, ok, msg);
}

void criterion3() {
  const bench::Row* r = row("pois", "n=100 lambda=15");
  if (r == nullptr) return report(3, false, "missing row");
  report(3, r->d_v <= 1e-11 && r->seconds < 10.0,
         "d_v=" + num(r->d_v) + " d_kappa=" + num(r->d_kappa) + " t=" + num(r->seconds) + "s");
}

void criterion4() {
  const bench::Row* fine = row("norm", "n=2 mean=0 sd=1 eps=1e-10 q=14");
  const bench::Row* coarse = row("norm", "n=2 mean=0 sd=1 eps=1e-08 q=12");
  std::vector<double> group;
  double seconds = 0.0;
  bool ok = fine != nullptr && coarse != nullptr;
  for (const char* name : {"n=2 mean=-10 sd=100 eps=1e-08 q=12", "n=2 mean=0 sd=1 eps=1e-08 q=12",
                           "n=2 mean=100 sd=1000 eps=1e-08 q=12"}) {
    const bench::Row* r = row("norm", name);
    if (r == nullptr) {
      ok = false;
      continue;
    }
    group.push_back(r->d_v);
    seconds += r->seconds;
  }
  if (!ok) return report(4, false, "missing rows");
  seconds += fine->seconds;
  const double spread = rel_spread(group);
  ok = fine->d_v <= 5e-7 && fine->d_kappa <= 9e-7 && coarse->d_v <= 6e-6 && spread <= 0.1 && seconds < 30.0;
  report(4, ok,
         "(1e-10,14) d_v=" + num(fine->d_v) + " d_kappa=" + num(fine->d_kappa) + "; (1e-8,12) d_v=" +
             num(coarse->d_v) + "; invariance spread=" + num(spread) + " t=" + num(seconds) + "s");
}

void criterion5() {
  const std::string name = "n=5 rate=1 eps=1e-08 q=16";
  const bench::Row* r = row("exp", name);
  const bench::Row* restricted = row("exp", name + " restricted d_kappa");
  std::vector<double> group;
  bool ok = r != nullptr && restricted != nullptr;
  for (const char* g : {"n=2 rate=0.01 eps=1e-08 q=12", "n=2 rate=1 eps=1e-08 q=12", "n=2 rate=10 eps=1e-08 q=12"}) {
    const bench::Row* x = row("exp", g);
    if (x == nullptr) {
      ok = false;
      continue;
    }
    group.push_back(x->d_v);
  }
  if (!ok) return report(5, false, "missing rows");
  const double spread = rel_spread(group);
  ok = r->d_v <= 1e-6 && spread <= 0.1 && restricted->d_kappa <= r->d_v && r->seconds < 60.0;
  report(5, ok,
         "d_v=" + num(r->d_v) + " rate spread=" + num(spread) + " restricted d_kappa=" + num(restricted->d_kappa) +
             " t=" + num(r->seconds) + "s");
}

void criterion6() {
  struct Want {
    const char* name;
    double value;
    double tol;
  };
  const Want wants[] = {
      {"FFT1 df=4 ncp=4 x=1.765", 0.04999865, 5e-5},
      {"FFT2 df=4 ncp=4 x=1.765", 0.04999924, 2e-5},
      {"FFT3 df=4 ncp=4 x=1.765", 0.04999936, 5e-6},
      {"FFT3 df=7 ncp=16 x=38.97", 0.9499992, 5e-6},
  };
  bool ok = true;
  std::string msg;
  for (const auto& w : wants) {
    const bench::Row* r = row("chisq", w.name);
    if (r == nullptr) {
      ok = false;
      continue;
    }
    ok = ok && std::abs(r->value - w.value) <= w.tol && r->seconds < 120.0;
    msg += std::string(msg.empty() ? "" : "; ") + w.name + " = " + num(r->value);
  }
  report(6, ok, msg);
}

void criterion7() {
  const auto d = std::get<Distribution>(expr::eval("Norm(1,2)+convpow(Unif(0,1),3)+Pois(1)"));
  const double q = quantile(d, 1.0 / 3.0);
  const double f5 = pdf(d, 0.5);
  const double f8 = pdf(d, 0.8);
  const bool ok = std::abs(q - 2.490786) <= 1e-3 && std::abs(f5 - 0.07526675) <= 1e-4 &&
                  std::abs(f8 - 0.08894269) <= 1e-4;
  report(7, ok, "q(1/3)=" + num(q) + " d(0.5)=" + num(f5) + " d(0.8)=" + num(f8));
}

void criterion8() {
  const auto x = std::get<Distribution>(expr::eval("Norm()*Pois(lambda=1)"));
  const double q = quantile(x, 0.25);
  const double want[] = {0.8545304, 0.9409595, 0.9729868};
  bool ok = std::abs(q + 0.3471003) <= 1e-3;
  std::string msg = "q(0.25)=" + num(q) + " p=";
  for (int i = 0; i < 3; ++i) {
    const double p = cdf(x, i + 1.0);
    ok = ok && std::abs(p - want[i]) <= 1e-4;
    msg += num(p) + (i < 2 ? "," : "");
  }
  const double zero = point_mass(x, 0.0);
  ok = ok && std::abs(zero - std::exp(-1.0)) <= 1e-9;
  report(8, ok, msg + " P(X=0)-exp(-1)=" + num(zero - std::exp(-1.0)));
}

void criterion9() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double conv_err = 0.0, rt_err = 0.0, pow_err = 0.0;
  auto probs = [&](std::size_t m) {
    std::vector<double> p(m);
    double s = 0.0;
    for (auto& v : p) s += v = u(rng);
    for (auto& v : p) v /= s;
    return p;
  };
  for (std::size_t m : {8u, 64u, 256u, 1024u}) {
    for (int t = 0; t < 100; ++t) {
      const auto x = probs(m);
      const auto y = probs(m);
      const auto z = fft::circular_convolve(x, y);
      for (std::size_t n = 0; n < m; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += x[j] * y[(n + m - j) % m];
        conv_err = std::max(conv_err, std::abs(z[n] - s));
      }
      const auto back = fft::idft(fft::dft(x));
      for (std::size_t j = 0; j < m; ++j) rt_err = std::max(rt_err, std::abs(back[j] - fft::Complex(x[j], 0.0)));
      const unsigned long long n_pow = 1 + static_cast<unsigned long long>(t % 10);
      std::vector<double> acc = x;
      for (unsigned long long k = 1; k < n_pow; ++k) acc = fft::circular_convolve(acc, x);
      const auto p = fft::circular_convpow(x, n_pow);
      for (std::size_t j = 0; j < m; ++j) pow_err = std::max(pow_err, std::abs(p[j] - acc[j]));
    }
  }
  report(9, conv_err <= 1e-12 && rt_err <= 1e-12 && pow_err <= 1e-10,
         "convolve err=" + num(conv_err) + " round trip err=" + num(rt_err) + " convpow err=" + num(pow_err));
}

void criterion10() {
  const bench::Row* r12 = row("timing", "N=10 q=12");
  const bench::Row* r14 = row("timing", "N=10 q=14");
  if (r12 == nullptr || r14 == nullptr) return report(10, false, "missing rows");
  report(10, r12->value <= 0.5 && r14->value <= 0.05 && r12->d_v <= 1e-12 && r14->d_v <= 1e-12,
         "fft/naive time ratio q=12: " + num(r12->value) + ", q=14: " + num(r14->value));
}

void criterion11() {
  std::size_t checked = 0;
  std::vector<std::string> bad;
  for (const auto& r : ordered) {
    if (r.invariants == "-") continue;
    ++checked;
    if (r.invariants != "ok") bad.push_back(r.suite + "/" + r.name + ": " + r.invariants);
  }
  for (const auto& b : bad) std::printf("  invariant violation %s\n", b.c_str());
  report(11, bad.empty(), std::to_string(checked - bad.size()) + " of " + std::to_string(checked) +
                              " bench outputs satisfy mass, mean and quantile/cdf invariants");
}

}  // namespace

int main() {
  criterion1();
  for (const auto& suite : bench::suite_names()) {
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& r : bench::run_suite(suite)) {
      rows[r.suite + "/" + r.name] = r;
      ordered.push_back(r);
    }
    std::printf("  bench %s: %.1fs\n", suite.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
