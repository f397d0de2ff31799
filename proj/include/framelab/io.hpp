#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"

#include "framelab/coordinate_vector.hpp"
#include "framelab/interval_set.hpp"
#include "framelab/step_function.hpp"
#include "framelab/translate_frame.hpp"

// Structured-text (JSON) encodings used by the experiment configs and reports:
//
//   StepFunction     {"breakpoints": [t0, ..., tk], "values": [v0, ..., v(k-1)]}
//   CoordinateVector {"entries": [[n, c], ...]}
//   IntervalSet      [[l, r], ...]
//   RademacherSpec   {"coefficients": {"entries": ...}, "resolution": 1}
//   generator        {"rademacher": RademacherSpec} | {"step": StepFunction}

namespace framelab {

using json = nlohmann::json;

/// Malformed structured input; `where` is the dotted field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace io {

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
}

inline void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed,
                                const std::string& where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
  }
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  return j.get<double>();
}

inline Index integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where, "expected an integer");
  return j.get<Index>();
}

inline std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where.empty() ? key : where + "." + key, "missing field");
  return j.at(key);
}

inline std::string join(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

}  // namespace io

inline json to_json(const StepFunction& f) {
  return json{{"breakpoints", f.breakpoints()}, {"values", f.values()}};
}

inline StepFunction step_function_from_json(const json& j, const std::string& where = "") {
  io::reject_unknown_keys(j, {"breakpoints", "values"}, where);
  auto b = io::numbers(io::field(j, "breakpoints", where), io::join(where, "breakpoints"));
  auto v = io::numbers(io::field(j, "values", where), io::join(where, "values"));
  try {
    return StepFunction(std::move(b), std::move(v));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where, e.what());
  }
}

inline json to_json(const CoordinateVector& v) {
  json entries = json::array();
  for (const auto& [n, c] : v.entries()) entries.push_back(json::array({n, c}));
  return json{{"entries", entries}};
}

inline CoordinateVector coordinate_vector_from_json(const json& j, const std::string& where = "") {
  io::reject_unknown_keys(j, {"entries"}, where);
  const auto& entries = io::field(j, "entries", where);
  const auto at = io::join(where, "entries");
  if (!entries.is_array()) throw ConfigError(at, "expected an array of [n, c] pairs");
  CoordinateVector v;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto here = at + "[" + std::to_string(i) + "]";
    const auto& e = entries[i];
    if (!e.is_array() || e.size() != 2) throw ConfigError(here, "expected [n, c]");
    const Index n = io::integer(e[0], here + "[0]");
    if (v[n] != 0.0) throw ConfigError(here, "duplicate index " + std::to_string(n));
    v.set(n, io::number(e[1], here + "[1]"));
  }
  return v;
}

inline json to_json(const IntervalSet& s) {
  json out = json::array();
  for (const auto& iv : s.intervals()) out.push_back(json::array({iv.lo, iv.hi}));
  return out;
}

inline IntervalSet interval_set_from_json(const json& j, const std::string& where = "") {
  if (!j.is_array()) throw ConfigError(where, "expected an array of [l, r) pairs");
  std::vector<Interval> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto here = where + "[" + std::to_string(i) + "]";
    const auto& e = j[i];
    if (!e.is_array() || e.size() != 2) throw ConfigError(here, "expected [l, r]");
    const double lo = io::number(e[0], here + "[0]");
    const double hi = io::number(e[1], here + "[1]");
    if (!(lo < hi)) throw ConfigError(here, "need l < r");
    out.push_back({lo, hi});
  }
  return IntervalSet(std::move(out));
}

inline json to_json(const RademacherSpec& spec) {
  return json{{"coefficients", to_json(spec.coefficients)}, {"resolution", spec.resolution}};
}

inline RademacherSpec rademacher_spec_from_json(const json& j, const std::string& where = "") {
  io::reject_unknown_keys(j, {"coefficients", "resolution"}, where);
  RademacherSpec spec;
  spec.coefficients = coordinate_vector_from_json(io::field(j, "coefficients", where), io::join(where, "coefficients"));
  if (j.contains("resolution")) {
    spec.resolution = static_cast<int>(io::integer(j.at("resolution"), io::join(where, "resolution")));
  }
  return spec;
}

/// The step function named by a generator description (not yet validated).
inline StepFunction generator_function_from_json(const json& j, const std::string& where = "") {
  io::reject_unknown_keys(j, {"rademacher", "step"}, where);
  if (j.size() != 1) throw ConfigError(where, "expected exactly one of 'rademacher' or 'step'");
  if (j.contains("step")) return step_function_from_json(j.at("step"), io::join(where, "step"));
  const auto spec = rademacher_spec_from_json(j.at("rademacher"), io::join(where, "rademacher"));
  try {
    return rademacher_function(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(io::join(where, "rademacher"), e.what());
  }
}

inline json to_json(const GeneratorCertificate& c) {
  return json{{"l1_norm", c.l1_norm},
              {"periodized_sup", c.periodized_sup},
              {"ortho_residual", c.ortho_residual},
              {"suppression_constant", c.suppression_constant},
              {"lag_range", c.lag_range},
              {"lag_products", c.lag_products}};
}

inline json to_json(const ValidationReport& r) {
  json conditions = json::array();
  for (const auto& c : r.conditions) {
    conditions.push_back(json{{"condition", c.condition},
                              {"satisfied", c.satisfied},
                              {"residual", c.residual},
                              {"detail", c.detail}});
  }
  return json{{"accepted", r.accepted},
              {"tolerance", r.tolerance},
              {"certificate", to_json(r.certificate)},
              {"conditions", conditions}};
}

}  // namespace framelab
