#pragma once

// JSON form of a Distribution. Numbers are written in shortest round-trip
// form, so every knot, probability and parameter reads back bit for bit.
// Integral values print without a fraction ("mean":-1).
//
//   {"kind":"Norm","mean":-1,"sd":2.23606797749979}
//   {"kind":"Lattice","origin":0,"width":1,"probs":[...],"truncated":false}
//   {"kind":"Discrete","support":[...],"probs":[...],"truncated":false}
//   {"kind":"AbsCont","grid":{...},"cdf":{"x":[...],"y":[...]},
//    "density":{"x":[...],"y":[...]},"warnings":[...]}
//   {"kind":"LebDec","ac_weight":w,"ac_part":{...},"disc_weight":v,"disc_part":{...}}
//
// Structural samplers and exact composition forms are not serialized; a
// distribution read back samples by inverse cdf from its tables.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "distkit/distribution.hpp"
#include "distkit/error.hpp"

namespace distkit {

using json = nlohmann::json;

namespace detail {

inline json number(double v) {
  if (std::isfinite(v) && v == std::trunc(v) && std::abs(v) < 9007199254740992.0 && !(v == 0.0 && std::signbit(v))) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

inline json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline double get_number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw DomainError(std::string("json: missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

inline double get_number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

inline std::vector<double> get_numbers(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw DomainError(std::string("json: missing array field '") + key + "'");
  }
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw DomainError(std::string("json: non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

inline void family_fields(const Family& f, json& j) {
  std::visit(overloaded{
                 [&](const Normal& d) {
                   j["mean"] = number(d.mean);
                   j["sd"] = number(d.sd);
                 },
                 [&](const Poisson& d) { j["lambda"] = number(d.lambda); },
                 [&](const Binomial& d) {
                   j["size"] = d.size;
                   j["prob"] = number(d.prob);
                 },
                 [&](const Exponential& d) { j["rate"] = number(d.rate); },
                 [&](const Gamma& d) {
                   j["shape"] = number(d.shape);
                   j["rate"] = number(d.rate);
                 },
                 [&](const Uniform& d) {
                   j["min"] = number(d.min);
                   j["max"] = number(d.max);
                 },
                 [&](const ChiSq& d) {
                   j["df"] = number(d.df);
                   j["ncp"] = number(d.ncp);
                 },
                 [&](const Dirac& d) { j["location"] = number(d.location); },
             },
             f);
}

inline Family family_from(const std::string& kind, const json& j) {
  if (kind == "Norm") return Normal{get_number_or(j, "mean", 0.0), get_number_or(j, "sd", 1.0)};
  if (kind == "Pois") return Poisson{get_number_or(j, "lambda", 1.0)};
  if (kind == "Binom") {
    const double n = get_number_or(j, "size", 1.0);
    if (n != std::trunc(n) || n < 0 || n > 2147483647.0) throw DomainError("json: Binom size must be an integer");
    return Binomial{static_cast<int>(n), get_number_or(j, "prob", 0.5)};
  }
  if (kind == "Exp") return Exponential{get_number_or(j, "rate", 1.0)};
  if (kind == "Gammad") return Gamma{get_number_or(j, "shape", 1.0), get_number_or(j, "rate", 1.0)};
  if (kind == "Unif") return Uniform{get_number_or(j, "min", 0.0), get_number_or(j, "max", 1.0)};
  if (kind == "Chisq") return ChiSq{get_number_or(j, "df", 1.0), get_number_or(j, "ncp", 0.0)};
  if (kind == "Dirac") return Dirac{get_number_or(j, "location", 0.0)};
  throw DomainError("json: unknown kind '" + kind + "'");
}

inline json lattice_json(const LatticeDistribution& d) {
  return {{"kind", "Lattice"},
          {"origin", number(d.origin())},
          {"width", number(d.width())},
          {"probs", numbers(d.probs())},
          {"truncated", d.truncated()}};
}

inline json discrete_json(const DiscreteDistribution& d) {
  return {{"kind", "Discrete"},
          {"support", numbers(d.support())},
          {"probs", numbers(d.probs())},
          {"truncated", d.truncated()}};
}

inline json abscont_json(const AbsContDistribution& d) {
  const auto g = d.grid();
  return {{"kind", "AbsCont"},
          {"grid", {{"lower", number(g.lower)}, {"upper", number(g.upper)}, {"count", g.count}, {"h", number(g.h)}}},
          {"cdf", {{"x", numbers(d.cdf_knots())}, {"y", numbers(d.cdf_values())}}},
          {"density", {{"x", numbers(d.density_knots())}, {"y", numbers(d.density_values())}}},
          {"warnings", d.warnings()}};
}

inline DiscreteDistribution discrete_from(const json& j) {
  return DiscreteDistribution(get_numbers(j, "support"), get_numbers(j, "probs"), j.value("truncated", false));
}

inline AbsContDistribution abscont_from(const json& j) {
  if (!j.contains("cdf") || !j.contains("density") || !j.contains("grid")) {
    throw DomainError("json: AbsCont requires grid, cdf and density");
  }
  std::vector<std::string> warnings;
  if (j.contains("warnings")) warnings = j.at("warnings").get<std::vector<std::string>>();
  return AbsContDistribution(get_numbers(j.at("cdf"), "x"), get_numbers(j.at("cdf"), "y"),
                             get_numbers(j.at("density"), "x"), get_numbers(j.at("density"), "y"),
                             get_number(j.at("grid"), "h"), nullptr, std::move(warnings));
}

}  // namespace detail

inline json to_json(const Distribution& d) {
  json j = std::visit(
      detail::overloaded{
          [](const ExactDistribution& e) {
            json o = {{"kind", e.name()}};
            if (auto f = e.canonical()) {
              detail::family_fields(*f, o);
            } else {
              detail::family_fields(e.family(), o);
              o["scale"] = detail::number(e.scale());
              o["shift"] = detail::number(e.shift());
            }
            return o;
          },
          [](const LatticeDistribution& l) { return detail::lattice_json(l); },
          [](const DiscreteDistribution& x) { return detail::discrete_json(x); },
          [](const AbsContDistribution& a) { return detail::abscont_json(a); },
          [](const LebDecDistribution& m) {
            return json{{"kind", "LebDec"},
                        {"ac_weight", detail::number(m.ac_weight())},
                        {"ac_part", detail::abscont_json(m.ac_part())},
                        {"disc_weight", detail::number(m.disc_weight())},
                        {"disc_part", detail::discrete_json(m.disc_part())}};
          },
      },
      d.repr());
  if (d.is<ExactDistribution>() && !d.exact_dispatch()) j["exact_dispatch"] = false;
  return j;
}

inline Distribution from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw DomainError("json: expected an object with a string 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "Lattice") {
    return LatticeDistribution(detail::get_number(j, "origin"), detail::get_number(j, "width"),
                               detail::get_numbers(j, "probs"), j.value("truncated", false));
  }
  if (kind == "Discrete") return detail::discrete_from(j);
  if (kind == "AbsCont") return detail::abscont_from(j);
  if (kind == "LebDec") {
    return LebDecDistribution(detail::get_number(j, "ac_weight"), detail::abscont_from(j.at("ac_part")),
                              detail::get_number(j, "disc_weight"), detail::discrete_from(j.at("disc_part")));
  }
  ExactDistribution e(detail::family_from(kind, j), detail::get_number_or(j, "scale", 1.0),
                      detail::get_number_or(j, "shift", 0.0));
  Distribution d(std::move(e));
  if (!j.value("exact_dispatch", true)) d = d.generic();
  return d;
}

inline std::string dump(const Distribution& d) { return to_json(d).dump(); }

inline Distribution parse_json(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw DomainError(std::string("json: ") + e.what());
  }
}

}  // namespace distkit
