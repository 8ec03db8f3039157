// distkit command-line front end.
//
//   distkit eval "<expr>" [--fn p|d|q|r] [--at x1,x2,...] [--count n] ...
//   distkit bench <suite|all> [--jobs n] [--out file] [--heavy]
//   distkit plotdata "<expr>" [--points n] [--out file] ...
//
// Exit codes: 0 success, 1 bench failure, 2 parse or usage error,
// 3 evaluation error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "distkit/bench.hpp"
#include "distkit/expr.hpp"
#include "distkit/serialize.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kBenchFail = 1;
constexpr int kUsage = 2;
constexpr int kEval = 3;

struct Common {
  double eps = distkit::Options{}.trunc_quantile;
  int grid_exp = distkit::Options{}.grid_exponent;
  std::optional<std::uint64_t> seed;
  int precision = 7;

  void add_to(CLI::App* app) {
    app->add_option("--eps,--trunc-quantile", eps, "Total tail mass cut from unbounded supports");
    app->add_option("--grid-exp", grid_exp, "Grid exponent q (2^q cells)");
    app->add_option("--seed", seed, "Random seed (falls back to DISTKIT_SEED)");
    app->add_option("--precision", precision, "Significant digits of printed numbers")->check(CLI::Range(1, 17));
  }

  distkit::Options options() const {
    distkit::Options o;
    o.trunc_quantile = eps;
    o.grid_exponent = grid_exp;
    if (seed) {
      o.rng_seed = *seed;
    } else if (const char* env = std::getenv("DISTKIT_SEED")) {
      try {
        o.rng_seed = std::stoull(env);
      } catch (const std::exception&) {
        throw CLI::ValidationError("DISTKIT_SEED", "not an unsigned integer");
      }
    }
    try {
      o.validate();
    } catch (const distkit::Error& e) {
      throw CLI::ValidationError("options", e.what());
    }
    return o;
  }
};

std::string format(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::vector<double> parse_points(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--at", "not a number: '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw CLI::ValidationError("--at", "not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void print_numbers(const std::vector<double>& at, const std::vector<double>& values, const std::string& fmt,
                   int precision) {
  if (fmt == "csv") {
    std::cout << (at.empty() ? "value" : "x,value") << "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!at.empty()) std::cout << format(at[i], precision) << ",";
      std::cout << format(values[i], precision) << "\n";
    }
    return;
  }
  std::cout << "[";
  for (std::size_t i = 0; i < values.size(); ++i) std::cout << (i ? "," : "") << format(values[i], precision);
  std::cout << "]\n";
}

void print_distribution(const distkit::Distribution& d, const std::string& fmt) {
  if (fmt == "csv") {
    // Top-level fields, one per line.
    const distkit::json j = distkit::to_json(d);
    std::cout << "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::cout << it.key() << "," << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
    }
    return;
  }
  std::cout << distkit::dump(d) << "\n";
}

int cmd_eval(const std::string& src, const Common& c, const std::string& fn, const std::string& at_text,
             std::size_t count, const std::string& fmt) {
  const distkit::Options o = c.options();
  const std::vector<double> at = at_text.empty() ? std::vector<double>{} : parse_points(at_text);
  distkit::expr::NodePtr ast;
  try {
    ast = distkit::expr::parse(src);
  } catch (const distkit::ParseError& e) {
    std::cerr << "distkit: " << e.what() << "\n";
    return kUsage;
  }
  try {
    const distkit::expr::Value v = distkit::expr::eval(*ast, o);
    if (const auto* xs = std::get_if<std::vector<double>>(&v)) {
      if (!fn.empty()) throw distkit::DomainError("--fn needs an expression that yields a distribution");
      print_numbers({}, *xs, fmt, c.precision);
      return kOk;
    }
    const auto& d = std::get<distkit::Distribution>(v);
    if (fn.empty()) {
      print_distribution(d, fmt);
      return kOk;
    }
    if (fn == "r") {
      distkit::Rng rng(o.rng_seed);
      print_numbers({}, distkit::sample(d, count, rng), fmt, c.precision);
      return kOk;
    }
    if (at.empty()) throw CLI::ValidationError("--at", "required with --fn " + fn);
    std::vector<double> values;
    if (fn == "p") values = distkit::cdf(d, at);
    if (fn == "d") values = distkit::pdf(d, at);
    if (fn == "q") values = distkit::quantile(d, at);
    print_numbers(at, values, fmt, c.precision);
    return kOk;
  } catch (const CLI::Error&) {
    throw;
  } catch (const std::exception& e) {
    std::cerr << "distkit: " << e.what() << "\n";
    return kEval;
  }
}

int cmd_bench(const std::string& suite, unsigned jobs, const std::string& out, bool heavy) {
  distkit::bench::Config cfg;
  cfg.jobs = jobs;
  cfg.heavy = heavy;
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = distkit::bench::suite_names();
  } else {
    suites = {suite};
  }
  std::vector<distkit::bench::Row> rows;
  try {
    for (const auto& s : suites) {
      auto r = distkit::bench::run_suite(s, cfg);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  } catch (const std::exception& e) {
    std::cerr << "distkit: " << e.what() << "\n";
    return kEval;
  }
  const std::string csv = distkit::bench::to_csv(rows);
  if (out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "distkit: cannot write " << out << "\n";
      return kEval;
    }
    f << csv;
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  std::cerr << rows.size() - failed << " passed, " << failed << " failed\n";
  return failed == 0 ? kOk : kBenchFail;
}

int cmd_plotdata(const std::string& src, const Common& c, std::size_t points, const std::string& out) {
  const distkit::Options o = c.options();
  distkit::expr::NodePtr ast;
  try {
    ast = distkit::expr::parse(src);
  } catch (const distkit::ParseError& e) {
    std::cerr << "distkit: " << e.what() << "\n";
    return kUsage;
  }
  std::ostringstream csv;
  try {
    const distkit::expr::Value v = distkit::expr::eval(*ast, o);
    const auto* d = std::get_if<distkit::Distribution>(&v);
    if (d == nullptr) throw distkit::DomainError("plotdata needs an expression that yields a distribution");
    auto [lo, hi] = distkit::truncation_bounds(*d, o.trunc_quantile);
    if (!(hi > lo)) {
      lo -= 0.5;
      hi += 0.5;
    }
    csv << "x,density,cdf,quantile_u,quantile_x\n";
    for (std::size_t i = 0; i < points; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(points - 1);
      const double x = i + 1 == points ? hi : lo + (hi - lo) * t;
      const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(points);
      csv << format(x, c.precision) << "," << format(distkit::pdf(*d, x), c.precision) << ","
          << format(distkit::cdf(*d, x), c.precision) << "," << format(u, c.precision) << ","
          << format(distkit::quantile(*d, u), c.precision) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "distkit: " << e.what() << "\n";
    return kEval;
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "distkit: cannot write " << out << "\n";
      return kEval;
    }
    f << csv.str();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arithmetic of distributions by FFT convolution"};
  app.require_subcommand(1);

  Common eval_opts;
  std::string eval_src;
  std::string fn;
  std::string at;
  std::size_t count = 1;
  std::string fmt = "json";
  auto* eval = app.add_subcommand("eval", "Evaluate an expression");
  eval->add_option("expr", eval_src, "Expression, e.g. \"Norm(1,2)+Pois(1)\"")->required();
  eval->add_option("--fn", fn, "Apply p (cdf), d (density), q (quantile) or r (sample)")
      ->check(CLI::IsMember({"p", "d", "q", "r"}));
  eval->add_option("--at", at, "Comma-separated points for --fn p|d|q");
  eval->add_option("--count", count, "Number of draws for --fn r");
  eval->add_option("--format", fmt, "Output format")->check(CLI::IsMember({"json", "csv"}));
  eval_opts.add_to(eval);

  std::string suite;
  unsigned jobs = 1;
  std::string bench_out;
  bool heavy = false;
  auto* bench = app.add_subcommand("bench", "Run a reproduction benchmark suite");
  bench->add_option("suite", suite, "binom, pois, norm, exp, chisq, timing or all")
      ->required()
      ->check(CLI::IsMember({"binom", "pois", "norm", "exp", "chisq", "timing", "all"}));
  bench->add_option("--jobs", jobs, "Parallel cases")->check(CLI::Range(1u, 256u));
  bench->add_option("--out", bench_out, "Write the CSV report here instead of stdout");
  bench->add_flag("--heavy", heavy, "Include rows needing a 2^26-point transform");

  Common plot_opts;
  std::string plot_src;
  std::size_t points = 1001;
  std::string plot_out;
  auto* plot = app.add_subcommand("plotdata", "Write x, density, cdf and quantile columns as CSV");
  plot->add_option("expr", plot_src, "Expression")->required();
  plot->add_option("--points", points, "Rows of output")->check(CLI::Range(std::size_t{2}, std::size_t{10000000}));
  plot->add_option("--out", plot_out, "Output file (default stdout)");
  plot_opts.add_to(plot);

  try {
    app.parse(argc, argv);
    if (*eval) return cmd_eval(eval_src, eval_opts, fn, at, count, fmt);
    if (*bench) return cmd_bench(suite, jobs, bench_out, heavy);
    if (*plot) return cmd_plotdata(plot_src, plot_opts, points, plot_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  return kUsage;
}
