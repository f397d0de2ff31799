#include "runner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include <framelab/framelab.hpp>
#include <framelab/version.hpp>

namespace framelab::cli {

namespace {

constexpr Index kMaxWindow = Index{1} << 14;
constexpr Index kMaxMatrixWindow = 64;
constexpr int kMaxM = 8;
constexpr int kMaxN = 16;
constexpr double kMaxP = 16.0;
constexpr double kMinStep = 1.0 / (1 << 20);

/// Everything an experiment reads and writes.
struct Context {
  json params;
  std::uint64_t seed = 0;
  double tol = 0.0;
  bool timing = false;
  json result = json::object();
  std::optional<Table> table;
  std::vector<std::string> violations;
  bool rejected = false;

  void require(bool ok, const std::string& what) {
    if (!ok) violations.push_back(what);
  }
};

using Runner = std::function<void(Context&)>;

struct KindInfo {
  double default_tol;
  std::vector<std::string_view> params;
  Runner run;
};

// ---------------------------------------------------------------------------
// Parameter access

std::string at(const char* key) { return std::string("params.") + key; }

double number_param(const json& params, const char* key, double fallback, double lo, double hi) {
  if (!params.contains(key)) return fallback;
  const double v = io::number(params.at(key), at(key));
  if (!(v >= lo && v <= hi)) {
    throw ConfigError(at(key), "must lie in [" + format_number(lo) + ", " + format_number(hi) + "]");
  }
  return v;
}

double exponent_param(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  const double p = io::number(params.at(key), at(key));
  if (!(p > 1.0 && p <= kMaxP)) throw ConfigError(at(key), "exponent must lie in (1, 16]");
  return p;
}

Index integer_param(const json& params, const char* key, Index fallback, Index lo, Index hi) {
  if (!params.contains(key)) return fallback;
  const Index v = io::integer(params.at(key), at(key));
  if (v < lo || v > hi) {
    throw ConfigError(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

std::vector<double> exponent_list(const json& params, const char* key, std::vector<double> fallback) {
  if (!params.contains(key)) return fallback;
  auto out = io::numbers(params.at(key), at(key));
  if (out.empty()) throw ConfigError(at(key), "must not be empty");
  for (double p : out) {
    if (!(p > 1.0 && p <= kMaxP)) throw ConfigError(at(key), "exponents must lie in (1, 16]");
  }
  return out;
}

std::vector<int> int_list(const json& params, const char* key, std::vector<int> fallback, int lo, int hi) {
  if (!params.contains(key)) return fallback;
  const auto& j = params.at(key);
  if (!j.is_array() || j.empty()) throw ConfigError(at(key), "expected a non-empty array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto where = at(key) + "[" + std::to_string(i) + "]";
    const Index v = io::integer(j[i], where);
    if (v < lo || v > hi) {
      throw ConfigError(where, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

const json kDefaultGenerator = json::parse(R"({"rademacher": {"coefficients": {"entries": [[0, 0.6], [1, 0.8]]}}})");

StepFunction generator_function(const json& params) {
  return generator_function_from_json(params.contains("generator") ? params.at("generator") : kDefaultGenerator,
                                      "params.generator");
}

/// Validated generator, or nullopt after recording the rejection in ctx.
std::optional<Generator> generator_param(Context& ctx) {
  auto out = validate_generator(generator_function(ctx.params), std::nullopt, kGeneratorTolerance);
  if (!out.generator) {
    ctx.rejected = true;
    ctx.result["validation"] = to_json(out.report);
  }
  return std::move(out.generator);
}

std::optional<double> rademacher_closed_form(const json& params) {
  const auto& gen = params.contains("generator") ? params.at("generator") : kDefaultGenerator;
  if (!gen.contains("rademacher")) return std::nullopt;
  const auto spec = rademacher_spec_from_json(gen.at("rademacher"), "params.generator.rademacher");
  double s = 0.0;
  for (const auto& [n, c] : spec.coefficients.entries()) s += std::fabs(c);
  return s * s;
}

StepFunction step_param(const json& params, const char* key, const StepFunction& fallback) {
  return params.contains(key) ? step_function_from_json(params.at(key), at(key)) : fallback;
}

WaveletSystem wavelet_param(const json& params, double p) {
  const auto mother = step_param(params, "mother", StepFunction::haar());
  const auto dual = step_param(params, "dual", StepFunction::haar());
  try {
    return WaveletSystem(mother, dual, p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params.mother", e.what());
  }
}

CoordinateVector gaussian_window(std::mt19937_64& rng, Index window) { return gaussian_vector(rng, window); }

std::string cell(double v) { return format_number(v); }
std::string cell(Index v) { return std::to_string(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

// ---------------------------------------------------------------------------
// Experiments

void run_validate_generator(Context& ctx) {
  const auto f = generator_function(ctx.params);
  std::optional<Index> lag;
  if (ctx.params.contains("lag_range")) lag = integer_param(ctx.params, "lag_range", 0, 0, kMaxWindow);
  const auto out = validate_generator(f, lag, ctx.tol);
  ctx.result["validation"] = to_json(out.report);
  ctx.result["generator"] = to_json(f);
  if (const auto closed = rademacher_closed_form(ctx.params)) ctx.result["closed_form_suppression"] = *closed;
  ctx.rejected = !out.report.accepted;
  Table t{{"lag", "inner_product"}, {}};
  const auto& cert = out.report.certificate;
  for (std::size_t i = 0; i < cert.lag_products.size(); ++i) {
    t.rows.push_back({cell(static_cast<Index>(i) - cert.lag_range), cell(cert.lag_products[i])});
  }
  ctx.table = std::move(t);
}

void run_reconstruct(Context& ctx) {
  const auto g = generator_param(ctx);
  if (!g) return;
  const auto ps = exponent_list(ctx.params, "p_list", {1.5, 2.0, 3.0});
  const Index window = integer_param(ctx.params, "window", 16, 0, kMaxWindow);
  const Index trials = integer_param(ctx.params, "trials", 100, 1, 100000);
  std::mt19937_64 rng(ctx.seed);
  Table t{{"p", "trial", "relative_error"}, {}};
  json per_p = json::array();
  for (double p : ps) {
    double worst = 0.0;
    for (Index k = 0; k < trials; ++k) {
      const auto x = gaussian_window(rng, window);
      const double err = norm(synthesis(*g, x) - x, p) / norm(x, p);
      worst = std::max(worst, err);
      t.rows.push_back({cell(p), cell(k), cell(err)});
    }
    per_p.push_back({{"p", p}, {"max_relative_error", worst}});
    ctx.require(worst <= ctx.tol, "full-line synthesis error " + format_number(worst) + " exceeds tol at p = " +
                                      format_number(p));
  }
  ctx.result["trials"] = trials;
  ctx.result["window"] = window;
  ctx.result["errors"] = per_p;
  ctx.result["suppression_constant"] = g->suppression_constant();

  if (ctx.params.contains("x")) {
    const auto x = coordinate_vector_from_json(ctx.params.at("x"), "params.x");
    const auto e = ctx.params.contains("set") ? interval_set_from_json(ctx.params.at("set"), "params.set")
                                              : IntervalSet::real_line();
    const auto y = synthesis_over_set(*g, x, e);
    ctx.result["x"] = to_json(x);
    ctx.result["set"] = to_json(e);
    ctx.result["x_E"] = to_json(y);
    for (double p : ps) {
      ctx.require(norm(y, p) <= g->suppression_constant() * norm(x, p) + 1e-8,
                  "suppression bound violated at p = " + format_number(p));
    }
  }
  ctx.table = std::move(t);
}

void run_biorthogonality(Context& ctx) {
  const auto g = generator_param(ctx);
  if (!g) return;
  const Index window = integer_param(ctx.params, "window", 16, 0, kMaxMatrixWindow);
  const auto gram = biorthogonality_matrix(*g, window);
  const auto size = static_cast<std::size_t>(2 * window + 1);
  Table t{{"n", "m", "inner_product"}, {}};
  double worst = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      const double v = gram[i * size + j];
      worst = std::max(worst, std::fabs(v - (i == j ? 1.0 : 0.0)));
      t.rows.push_back({cell(static_cast<Index>(i) - window), cell(static_cast<Index>(j) - window), cell(v)});
    }
  }
  ctx.result["window"] = window;
  ctx.result["matrix_size"] = size;
  ctx.result["max_deviation"] = worst;
  ctx.require(worst <= ctx.tol, "biorthogonality deviation " + format_number(worst) + " exceeds tol");
  ctx.table = std::move(t);
}

void run_suppression_scan(Context& ctx) {
  const auto g = generator_param(ctx);
  if (!g) return;
  const double p = exponent_param(ctx.params, "p", 2.0);
  const Index trials = integer_param(ctx.params, "trials", 500, 0, 1000000);
  const Index window = integer_param(ctx.params, "window", 8, 0, kMaxWindow);
  const auto est = estimate_constants(*g, static_cast<int>(trials), window, p, ctx.seed);
  const double cs = g->suppression_constant();
  ctx.result["p"] = p;
  ctx.result["trials"] = trials;
  ctx.result["window"] = window;
  ctx.result["pairs"] = est.pairs;
  ctx.result["l1_norm"] = g->l1_norm();
  ctx.result["periodized_sup"] = g->periodized_sup();
  ctx.result["suppression_constant"] = cs;
  ctx.result["suppression_lower_bound"] = est.suppression;
  ctx.result["unconditional_lower_bound"] = est.unconditional;
  ctx.result["suppression_interval"] = json::array({est.suppression, cs});
  ctx.require(est.suppression <= cs + 1e-8, "suppression ratio exceeds the suppression constant");
  ctx.require(est.suppression <= est.unconditional, "suppression estimate exceeds unconditional estimate");
  ctx.require(est.unconditional <= 2.0 * est.suppression + 1e-8,
              "unconditional estimate exceeds twice the suppression estimate");
  if (const auto closed = rademacher_closed_form(ctx.params)) {
    ctx.result["closed_form_suppression"] = *closed;
    ctx.require(std::fabs(*closed - cs) <= ctx.tol, "suppression constant differs from the coefficient formula");
  }
}

void run_young_fuzz(Context& ctx) {
  const auto ps = exponent_list(ctx.params, "p_list", {1.5, 2.0, 3.0});
  const Index draws = integer_param(ctx.params, "draws", 200, 1, 100000);
  const Index window = integer_param(ctx.params, "window", 6, 0, 1024);
  const Index max_coeffs = integer_param(ctx.params, "max_coefficients", 6, 1, 16);
  std::optional<StepFunction> fixed;
  if (ctx.params.contains("generator")) fixed = generator_function(ctx.params);

  std::mt19937_64 rng(ctx.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<Index> count(1, max_coeffs);
  Table t{{"draw", "p", "lhs", "rhs"}, {}};
  double worst_ratio = 0.0;
  for (Index k = 0; k < draws; ++k) {
    StepFunction f;
    if (fixed) {
      f = *fixed;
    } else {
      // Arbitrary step functions: the inequality does not need orthonormality.
      const Index cells = count(rng);
      std::vector<double> b, v;
      for (Index i = 0; i <= cells; ++i) b.push_back(std::ldexp(static_cast<double>(i), -2));
      for (Index i = 0; i < cells; ++i) v.push_back(normal(rng));
      f = StepFunction(std::move(b), std::move(v));
    }
    CoordinateVector a;
    for (Index n = -window; n <= window; ++n) a.set(n, normal(rng));
    const double p = ps[static_cast<std::size_t>(k) % ps.size()];
    const auto r = young_check(f, a, p);
    worst_ratio = std::max(worst_ratio, r.rhs > 0.0 ? r.lhs / r.rhs : 0.0);
    t.rows.push_back({cell(k), cell(p), cell(r.lhs), cell(r.rhs)});
    ctx.require(r.lhs <= r.rhs * (1.0 + 1e-12), "draw " + std::to_string(k) + ": lhs exceeds rhs");
  }
  ctx.result["draws"] = draws;
  ctx.result["max_lhs_over_rhs"] = worst_ratio;
  const auto eq = young_check(StepFunction::indicator(0.0, 1.0), CoordinateVector::unit(0), 2.0);
  ctx.result["indicator_equality"] = {{"lhs", eq.lhs}, {"rhs", eq.rhs}};
  ctx.require(std::fabs(eq.lhs - eq.rhs) <= 1e-12, "single-indicator equality case failed");
  ctx.table = std::move(t);
}

void run_wavelet_reconstruct(Context& ctx) {
  const double p = exponent_param(ctx.params, "p", 2.0);
  const auto ws = wavelet_param(ctx.params, p);
  const auto x = step_param(ctx.params, "x", StepFunction::indicator(0.0, 0.3));
  const auto Ms = int_list(ctx.params, "M_list", {1, 2, 3}, 1, kMaxM);
  const auto Ns = int_list(ctx.params, "N_list", {1, 2, 4}, 1, kMaxN);
  const auto rows = convergence_study(ws, x, Ms, Ns);
  Table t{{"M", "N", "p", "error", "oracle_bound", "runtime_ms"}, {}};
  json out = json::array();
  for (const auto& r : rows) {
    t.rows.push_back({cell(r.M), cell(r.N), cell(r.p), cell(r.error), cell(r.oracle_bound),
                      ctx.timing ? cell(r.runtime_ms) : std::string("NA")});
    json row{{"M", r.M}, {"N", r.N}, {"error", r.error}, {"achieved_epsilon", r.oracle_bound}};
    if (ctx.timing) row["runtime_ms"] = r.runtime_ms;
    out.push_back(row);
    ctx.require(r.error <= r.oracle_bound + ctx.tol, "box error exceeds the conjugate tail bound at M = " +
                                                         std::to_string(r.M) + ", N = " + std::to_string(r.N));
  }
  ctx.result["p"] = p;
  ctx.result["x"] = to_json(x);
  ctx.result["rows"] = out;
  if (ctx.params.contains("hypotheses")) {
    const auto& h = ctx.params.at("hypotheses");
    io::reject_unknown_keys(h, {"g", "samples_per_unit"}, "params.hypotheses");
    const auto g = step_param(h, "g", StepFunction::haar());
    const auto spu = static_cast<int>(integer_param(h, "samples_per_unit", 4, 1, 64));
    json list = json::array();
    for (int M : Ms) {
      for (int N : Ns) {
        const auto lh = limit_hypotheses(ws, x, g, M, N, spu);
        list.push_back({{"M", M},
                        {"N", N},
                        {"reconstruction_error", lh.reconstruction_error},
                        {"analysis_gap", lh.analysis_gap},
                        {"synthesis_gap", lh.synthesis_gap}});
      }
    }
    ctx.result["limit_hypotheses"] = list;
  }
  ctx.table = std::move(t);
}

void run_wavelet_identity(Context& ctx) {
  const auto ps = exponent_list(ctx.params, "p_list", {1.5, 2.0, 3.0});
  const auto x = step_param(ctx.params, "x", StepFunction::indicator(0.0, 0.3));
  const auto Ms = int_list(ctx.params, "M_list", {1, 2, 3}, 1, kMaxM);
  const auto Ns = int_list(ctx.params, "N_list", {1, 2, 4}, 1, kMaxN);
  Table t{{"p", "M", "N", "distance"}, {}};
  double worst = 0.0;
  for (double p : ps) {
    const auto ws = wavelet_param(ctx.params, p);
    for (int M : Ms) {
      for (int N : Ns) {
        const double d = lp_distance(box_reconstruct(ws, x, M, N), conjugated_reconstruction(ws, x, M, N), p);
        worst = std::max(worst, d);
        t.rows.push_back({cell(p), cell(M), cell(N), cell(d)});
      }
    }
  }
  ctx.result["x"] = to_json(x);
  ctx.result["max_distance"] = worst;
  ctx.require(worst <= ctx.tol, "conjugation identity off by " + format_number(worst));
  ctx.table = std::move(t);
}

void run_counterexample(Context& ctx) {
  const Index K = integer_param(ctx.params, "K", 50, 1, kMaxWindow);
  const Index limit = integer_param(ctx.params, "full_check_limit", 50, 1, kMaxWindow);
  const auto rep = triple_counterexample(K, limit, ctx.seed);
  ctx.result["K"] = K;
  ctx.result["full_checked"] = rep.full_checked;
  ctx.result["full_reconstruction_exact"] = rep.full_reconstruction_exact;
  ctx.result["restricted_all_ones"] = rep.restricted_all_ones;
  ctx.result["restricted_sup_norm"] = rep.restricted_sup_norm;
  ctx.result["dual_cases"] = rep.dual_cases;
  ctx.result["dual_series_exact"] = rep.dual_series_exact;
  ctx.result["failures"] = rep.failures;
  for (const auto& f : rep.failures) ctx.violations.push_back(f);
  Table t{{"j", "candidate_coordinate"}, {}};
  for (const auto& [j, c] : rep.restricted_candidate) t.rows.push_back({cell(j), std::to_string(c)});
  ctx.table = std::move(t);
}

void run_diagnostics(Context& ctx) {
  const std::string space_name =
      ctx.params.contains("space") ? ctx.params.at("space").get<std::string>() : std::string("l1");
  const double p = exponent_param(ctx.params, "p", 2.0);
  SpaceTag space;
  if (space_name == "lp") {
    space = SpaceTag::lp(p);
  } else if (space_name == "c0") {
    space = SpaceTag::c0();
  } else if (space_name == "l1") {
    space = SpaceTag::l1();
  } else {
    throw ConfigError("params.space", "expected \"lp\", \"c0\" or \"l1\"");
  }
  const Index K = integer_param(ctx.params, "K", 64, 1, kMaxWindow);
  const Index block = integer_param(ctx.params, "block", 8, 1, K);
  CoordinateVector f;
  const json fj = ctx.params.contains("functional") ? ctx.params.at("functional") : json("all-ones");
  if (fj == "all-ones") {
    for (Index n = 1; n <= K; ++n) f.set(n, 1.0);
  } else if (fj == "harmonic") {
    for (Index n = 1; n <= K; ++n) f.set(n, 1.0 / static_cast<double>(n));
  } else if (fj.is_object()) {
    f = coordinate_vector_from_json(fj, "params.functional");
  } else {
    throw ConfigError("params.functional", "expected \"all-ones\", \"harmonic\" or a vector");
  }

  const auto frame = unit_vector_frame(space, 1, K);
  std::vector<IndexSet> chain;
  for (Index j = block; j <= K; j += block) {
    IndexSet e;
    for (Index n = 0; n < j; ++n) e.push_back(static_cast<std::size_t>(n));
    chain.push_back(std::move(e));
  }
  const auto probe = boundedly_complete_probe(frame, f, chain, ctx.tol);
  Table t{{"set_end", "tail_dual_norm", "increment"}, {}};
  json tails = json::array();
  double previous = INFINITY;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const double tail = tail_dual_norm(frame, f, chain[k]);
    tails.push_back(tail);
    t.rows.push_back({cell(static_cast<Index>(chain[k].size())), cell(tail), cell(probe.increments[k])});
    ctx.require(tail <= previous, "tail dual norm increased along the chain");
    previous = tail;
  }
  ctx.result["space"] = space.name();
  if (space.kind == SpaceKind::lp) ctx.result["p"] = p;
  ctx.result["K"] = K;
  ctx.result["block"] = block;
  ctx.result["tail_dual_norms"] = tails;
  ctx.result["increments"] = probe.increments;
  ctx.result["tail_vanishes"] = !tails.empty() && tails.back().get<double>() <= ctx.tol;
  ctx.result["increments_decay"] = probe.decays;
  ctx.result["note"] = "finite-window evidence on coordinates 1..K";
  ctx.table = std::move(t);
}

void run_sampling_sweep(Context& ctx) {
  const auto g = generator_param(ctx);
  if (!g) return;
  const Index window = integer_param(ctx.params, "window", 8, 0, 1024);
  const double p = exponent_param(ctx.params, "p", 2.0);
  const double offset = number_param(ctx.params, "offset", 0.0, -1e6, 1e6);
  std::vector<double> hs;
  if (ctx.params.contains("h_list")) {
    hs = io::numbers(ctx.params.at("h_list"), "params.h_list");
    for (double h : hs) {
      if (!(h >= kMinStep && h <= 1024.0)) throw ConfigError("params.h_list", "steps must lie in [2^-20, 1024]");
    }
  } else {
    // Dyadic refinement down to one level below the finest breakpoint spacing.
    const auto& bp = g->function().breakpoints();
    double finest = 1.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) finest = std::min(finest, bp[i + 1] - bp[i]);
    for (double h = 1.0; h >= finest / 2.0 && h >= kMinStep; h /= 2.0) hs.push_back(h);
  }
  const auto rows = sampling_sweep(*g, hs, window, p, offset);
  Table t{{"h", "num_samples", "max_error", "exact_flag"}, {}};
  json out = json::array();
  for (const auto& r : rows) {
    t.rows.push_back({cell(r.h), cell(r.num_samples), cell(r.max_error), cell(r.exact)});
    out.push_back({{"h", r.h}, {"num_samples", r.num_samples}, {"max_error", r.max_error}, {"exact", r.exact}});
  }
  bool nonincreasing = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!rows[i - 1].exact && rows[i].max_error > rows[i - 1].max_error) nonincreasing = false;
    if (rows[i - 1].exact && !rows[i].exact) nonincreasing = false;
  }
  ctx.result["window"] = window;
  ctx.result["p"] = p;
  ctx.result["offset"] = offset;
  ctx.result["rows"] = out;
  ctx.result["error_nonincreasing"] = nonincreasing;
  ctx.table = std::move(t);
}

const std::map<std::string, KindInfo>& registry() {
  static const std::map<std::string, KindInfo> kinds{
      {"validate-generator", {kGeneratorTolerance, {"generator", "lag_range"}, run_validate_generator}},
      {"reconstruct", {1e-10, {"generator", "p_list", "window", "trials", "x", "set"}, run_reconstruct}},
      {"biorthogonality", {1e-10, {"generator", "window"}, run_biorthogonality}},
      {"suppression-scan", {1e-10, {"generator", "p", "trials", "window"}, run_suppression_scan}},
      {"young-fuzz", {1e-12, {"generator", "p_list", "draws", "window", "max_coefficients"}, run_young_fuzz}},
      {"wavelet-reconstruct",
       {1e-9, {"p", "x", "M_list", "N_list", "mother", "dual", "hypotheses"}, run_wavelet_reconstruct}},
      {"wavelet-identity", {1e-9, {"p_list", "x", "M_list", "N_list", "mother", "dual"}, run_wavelet_identity}},
      {"counterexample", {0.0, {"K", "full_check_limit"}, run_counterexample}},
      {"diagnostics", {1e-10, {"space", "p", "K", "block", "functional"}, run_diagnostics}},
      {"sampling-sweep", {kExactSamplingTolerance, {"generator", "window", "p", "offset", "h_list"}, run_sampling_sweep}},
  };
  return kinds;
}

void reject_unknown(const json& j, const std::vector<std::string_view>& allowed, const std::string& where) {
  io::require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{
      "validate-generator", "reconstruct",    "biorthogonality", "suppression-scan", "young-fuzz",
      "wavelet-reconstruct", "wavelet-identity", "counterexample",  "diagnostics",      "sampling-sweep"};
  return kinds;
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string render_csv(const Table& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xf];
  }
  return out;
}

json parse_config_text(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) throw ConfigError("", "empty config");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t pos = e.byte == 0 ? 0 : std::min<std::size_t>(e.byte - 1, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    if (const auto colon = msg.find("error: "); colon != std::string::npos) msg = msg.substr(colon + 7);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col), msg);
  }
}

RunResult run_experiment(json config, const RunOptions& options) {
  RunResult out;
  try {
    reject_unknown(config, {"kind", "seed", "tol", "out", "params"}, "");
    const auto kind_field = io::field(config, "kind", "");
    if (!kind_field.is_string()) throw ConfigError("kind", "expected a string");
    const auto kind = kind_field.get<std::string>();
    const auto it = registry().find(kind);
    if (it == registry().end()) throw ConfigError("kind", "unknown experiment kind \"" + kind + "\"");
    const auto& info = it->second;

    Context ctx;
    ctx.timing = options.timing;
    ctx.params = config.contains("params") ? config.at("params") : json::object();
    reject_unknown(ctx.params, info.params, "params");
    if (config.contains("seed")) {
      const auto& s = config.at("seed");
      if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<Index>() >= 0)) {
        throw ConfigError("seed", "expected a non-negative integer");
      }
      ctx.seed = s.get<std::uint64_t>();
    }
    if (options.seed) ctx.seed = *options.seed;
    ctx.tol = config.contains("tol") ? io::number(config.at("tol"), "tol") : info.default_tol;
    if (options.tol) ctx.tol = *options.tol;
    if (!(ctx.tol >= 0.0) || !std::isfinite(ctx.tol)) throw ConfigError("tol", "must be a finite non-negative number");

    // The digest covers what determines the numbers, not where they are written.
    json effective{{"kind", kind}, {"seed", ctx.seed}, {"tol", ctx.tol}, {"params", ctx.params}};
    const auto digest = sha256_hex(effective.dump());

    info.run(ctx);

    std::string status = "ok";
    out.exit_code = kExitOk;
    if (ctx.rejected) {
      status = "rejected";
      out.exit_code = kExitRejected;
    } else if (!ctx.violations.empty()) {
      status = "invariant_breach";
      out.exit_code = kExitInvariant;
    }
    out.report = json{{"framelab_version", kVersion},
                      {"kind", kind},
                      {"seed", ctx.seed},
                      {"tol", ctx.tol},
                      {"config_sha256", digest},
                      {"config", effective},
                      {"status", status},
                      {"violations", ctx.violations},
                      {"result", ctx.result}};
    if (ctx.table) {
      const auto csv = render_csv(*ctx.table);
      out.report["table"] = {{"columns", ctx.table->header}, {"rows", ctx.table->rows.size()}, {"sha256", sha256_hex(csv)}};
      out.table = std::move(ctx.table);
    }
    if (status == "ok") {
      out.message = kind + ": ok (seed " + std::to_string(ctx.seed) + ")";
    } else if (status == "rejected") {
      std::string failed;
      for (const auto& c : ctx.result["validation"]["conditions"]) {
        if (!c["satisfied"].get<bool>()) failed += " " + c["condition"].get<std::string>();
      }
      out.message = kind + ": generator rejected:" + failed;
    } else {
      out.message = kind + ": invariant violated: " + ctx.violations.front();
    }
  } catch (const ConfigError& e) {
    out = RunResult{};
    out.exit_code = kExitParseError;
    out.message = std::string("config error: ") + e.what();
  } catch (const json::exception& e) {
    out = RunResult{};
    out.exit_code = kExitParseError;
    out.message = std::string("config error: ") + e.what();
  } catch (const std::invalid_argument& e) {
    out = RunResult{};
    out.exit_code = kExitParseError;
    out.message = std::string("invalid parameters: ") + e.what();
  }
  return out;
}

std::vector<std::string> write_reports(const RunResult& result, const std::string& out) {
  namespace fs = std::filesystem;
  fs::path base(out);
  if (base.extension() == ".json") base.replace_extension();
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  std::vector<std::string> written;
  json report = result.report;
  if (result.table) {
    fs::path csv_path = base;
    csv_path += ".csv";
    std::ofstream csv(csv_path, std::ios::binary);
    csv << render_csv(*result.table);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    report["table"]["file"] = csv_path.filename().string();
    written.push_back(csv_path.string());
  }
  fs::path json_path = base;
  json_path += ".json";
  std::ofstream js(json_path, std::ios::binary);
  js << report.dump(2) << '\n';
  if (!js) throw std::runtime_error("cannot write " + json_path.string());
  written.push_back(json_path.string());
  return written;
}

int run_and_emit(json config, const RunOptions& options) {
  std::optional<std::string> out = options.out;
  if (!out && config.is_object() && config.contains("out")) {
    if (!config.at("out").is_string()) {
      std::cerr << "config error: out: expected a string\n";
      return kExitParseError;
    }
    out = config.at("out").get<std::string>();
  }
  const auto result = run_experiment(std::move(config), options);
  if (result.exit_code == kExitParseError) {
    std::cerr << result.message << '\n';
    return result.exit_code;
  }
  if (out) {
    try {
      const auto files = write_reports(result, *out);
      if (!options.quiet) {
        std::cout << result.message << '\n';
        for (const auto& f : files) std::cout << "  wrote " << f << '\n';
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitParseError;
    }
  } else if (!options.quiet) {
    std::cout << result.report.dump(2) << '\n';
  }
  if (result.exit_code != kExitOk) std::cerr << result.message << '\n';
  return result.exit_code;
}

int run_config_file(const std::string& path, const RunOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "config error: cannot read " << path << '\n';
    return kExitParseError;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  json config;
  try {
    config = parse_config_text(buf.str());
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << path << ": " << e.what() << '\n';
    return kExitParseError;
  }
  return run_and_emit(std::move(config), options);
}

}  // namespace framelab::cli
