#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "framelab/coordinate_vector.hpp"
#include "framelab/interval_set.hpp"
#include "framelab/step_function.hpp"

// Continuous Schauder frames of ℓ_p(ℤ) generated by integer translates of a
// single step function f:  x_t = f_t = (f(t − n))_{n ∈ ℤ}.  The frame is valid
// when f is integrable, its integer translates are orthonormal in L₂, and the
// periodization Σ_n |f(t − n)| is bounded.

namespace framelab {

inline constexpr double kGeneratorTolerance = 1e-10;

struct GeneratorCertificate {
  double l1_norm = 0.0;
  double periodized_sup = 0.0;
  double ortho_residual = 0.0;
  /// C_s = ‖f‖₁ · sup_t Σ_n |f(t − n)|
  double suppression_constant = 0.0;
  Index lag_range = 0;
  /// ⟨f, f(· − m)⟩ for m = −lag_range … lag_range.
  std::vector<double> lag_products;
};

struct ConditionResult {
  std::string condition;
  bool satisfied = false;
  double residual = 0.0;
  std::string detail;
};

class Generator;

struct ValidationReport {
  GeneratorCertificate certificate;
  std::vector<ConditionResult> conditions;
  double tolerance = kGeneratorTolerance;
  bool accepted = false;
};

struct ValidationOutcome;

ValidationOutcome validate_generator(const StepFunction& f, std::optional<Index> lag_range = std::nullopt,
                                     double tol = kGeneratorTolerance);

/// A step function that passed validation, together with its certificate.
/// Only `validate_generator` creates these.
class Generator {
 public:
  const StepFunction& function() const { return f_; }
  const GeneratorCertificate& certificate() const { return cert_; }
  double l1_norm() const { return cert_.l1_norm; }
  double periodized_sup() const { return cert_.periodized_sup; }
  double suppression_constant() const { return cert_.suppression_constant; }

 private:
  Generator(StepFunction f, GeneratorCertificate cert) : f_(std::move(f)), cert_(std::move(cert)) {}
  friend ValidationOutcome validate_generator(const StepFunction&, std::optional<Index>, double);

  StepFunction f_;
  GeneratorCertificate cert_;
};

struct ValidationOutcome {
  ValidationReport report;
  std::optional<Generator> generator;
};

inline ValidationOutcome validate_generator(const StepFunction& f, std::optional<Index> lag_range,
                                            double tol) {
  ValidationReport report;
  report.tolerance = tol;
  auto& cert = report.certificate;

  cert.l1_norm = lp_norm(f, 1.0);
  cert.periodized_sup = periodized_l1_sup(f);
  cert.suppression_constant = cert.l1_norm * cert.periodized_sup;
  // Translates by |m| >= support width cannot overlap.
  cert.lag_range = lag_range.value_or(static_cast<Index>(std::ceil(f.support_width())));
  if (cert.lag_range < 0) throw std::invalid_argument("validate_generator: negative lag range");

  double residual = 0.0;
  std::string worst;
  for (Index m = -cert.lag_range; m <= cert.lag_range; ++m) {
    const double ip = inner(f, translate(f, static_cast<double>(m)));
    cert.lag_products.push_back(ip);
    const double dev = std::fabs(ip - (m == 0 ? 1.0 : 0.0));
    if (dev > residual) {
      residual = dev;
      worst = "lag " + std::to_string(m) + ": <f, f(.-m)> = " + std::to_string(ip);
    }
  }
  cert.ortho_residual = residual;

  const bool integrable = std::isfinite(cert.l1_norm) && cert.l1_norm > 0.0;
  report.conditions.push_back(
      {"integrable", integrable, integrable ? 0.0 : 1.0,
       integrable ? "" : "f is zero, so it cannot have unit L2 norm"});
  const bool ortho = residual <= tol;
  report.conditions.push_back({"orthonormal_translates", ortho, residual, ortho ? "" : worst});
  const bool bounded = std::isfinite(cert.periodized_sup);
  report.conditions.push_back({"bounded_periodization", bounded, bounded ? 0.0 : 1.0, ""});

  report.accepted = integrable && ortho && bounded;
  ValidationOutcome out{std::move(report), std::nullopt};
  if (out.report.accepted) out.generator = Generator(f, out.report.certificate);
  return out;
}

/// Validates and returns the generator, or throws std::invalid_argument
/// carrying the failed conditions.
inline Generator require_generator(const StepFunction& f, std::optional<Index> lag_range = std::nullopt,
                                   double tol = kGeneratorTolerance) {
  auto out = validate_generator(f, lag_range, tol);
  if (!out.generator) {
    std::string msg = "generator rejected:";
    for (const auto& c : out.report.conditions) {
      if (!c.satisfied) msg += " " + c.condition + " (residual " + std::to_string(c.residual) + ")";
    }
    throw std::invalid_argument(msg);
  }
  return std::move(*out.generator);
}

// ---------------------------------------------------------------------------
// Rademacher generators

struct RademacherSpec {
  CoordinateVector coefficients;
  /// Dyadic depth of the coarsest Rademacher function in use.
  int resolution = 1;
};

inline constexpr int kMaxDyadicDepth = 24;

/// ±1 on 2^depth consecutive cells of [0, 1), starting with +1.
inline StepFunction rademacher(int depth) {
  if (depth < 0 || depth > kMaxDyadicDepth) throw std::invalid_argument("rademacher: depth out of range");
  const std::size_t cells = std::size_t{1} << depth;
  const double width = std::ldexp(1.0, -depth);
  std::vector<double> t(cells + 1);
  std::vector<double> v(cells);
  for (std::size_t i = 0; i <= cells; ++i) t[i] = static_cast<double>(i) * width;
  for (std::size_t i = 0; i < cells; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
  return StepFunction(std::move(t), std::move(v));
}

/// Depth of the finest Rademacher function the coefficients use: the coefficient of
/// rank k (in increasing index order) gets depth resolution + k.
inline int dyadic_depth(const RademacherSpec& spec) {
  return spec.resolution + static_cast<int>(spec.coefficients.nonzeros()) - 1;
}

/// f = Σ_n a_n · r_{rank(n)}(· − n).
inline StepFunction rademacher_function(const RademacherSpec& spec) {
  const auto& a = spec.coefficients;
  if (a.is_zero()) throw std::invalid_argument("rademacher generator: no nonzero coefficients");
  if (spec.resolution < 1) throw std::invalid_argument("rademacher generator: resolution must be >= 1");
  if (dyadic_depth(spec) > kMaxDyadicDepth) {
    throw std::invalid_argument("rademacher generator: too many coefficients for the dyadic depth limit");
  }
  const double l2 = norm(a, 2.0);
  if (std::fabs(l2 - 1.0) > 1e-12) {
    throw std::invalid_argument("rademacher generator: coefficient l2 norm is " + std::to_string(l2) +
                                ", expected 1");
  }
  std::vector<StepFunction> pieces;
  std::vector<double> weights;
  int rank = 0;
  for (const auto& [n, c] : a.entries()) {
    pieces.push_back(translate(rademacher(spec.resolution + rank), static_cast<double>(n)));
    weights.push_back(c);
    ++rank;
  }
  return linear_combination(pieces, weights);
}

inline Generator build_rademacher_generator(const RademacherSpec& spec) {
  auto out = validate_generator(rademacher_function(spec));
  if (!out.generator) {
    throw std::logic_error("rademacher generator failed validation (residual " +
                           std::to_string(out.report.certificate.ortho_residual) + ")");
  }
  return std::move(*out.generator);
}

// ---------------------------------------------------------------------------
// Frame maps

/// Indices n with f(t − n) possibly nonzero: t − n ∈ [lo, hi).
inline std::pair<Index, Index> active_translates(const StepFunction& f, double t) {
  const auto s = f.support();
  return {static_cast<Index>(std::floor(t - s.hi)), static_cast<Index>(std::ceil(t - s.lo))};
}

/// x_t = f_t = (f(t − n)) for |n| <= window.
inline CoordinateVector frame_vector(const Generator& g, double t, Index window) {
  CoordinateVector v;
  const auto& f = g.function();
  if (f.is_zero()) return v;
  auto [lo, hi] = active_translates(f, t);
  for (Index n = std::max(lo, -window); n <= std::min(hi, window); ++n) {
    v.set(n, f(t - static_cast<double>(n)));
  }
  return v;
}

/// c(t) = f_t(x) = Σ_n x_n f(t − n).
inline StepFunction analysis_function(const StepFunction& f, const CoordinateVector& x) {
  std::vector<StepFunction> terms;
  std::vector<double> coeffs;
  terms.reserve(x.nonzeros());
  coeffs.reserve(x.nonzeros());
  for (const auto& [n, c] : x.entries()) {
    terms.push_back(translate(f, static_cast<double>(n)));
    coeffs.push_back(c);
  }
  return linear_combination(terms, coeffs);
}

inline StepFunction analysis_function(const Generator& g, const CoordinateVector& x) {
  return analysis_function(g.function(), x);
}

namespace detail {

inline CoordinateVector synthesize(const Generator& g, const StepFunction& c, const IntervalSet* e,
                                   Index lo, Index hi) {
  CoordinateVector out;
  const auto& f = g.function();
  if (c.is_zero()) return out;
  const auto cs = c.support();
  const auto fs = f.support();
  lo = std::max(lo, static_cast<Index>(std::floor(cs.lo - fs.hi)));
  hi = std::min(hi, static_cast<Index>(std::ceil(cs.hi - fs.lo)));
  for (Index m = lo; m <= hi; ++m) {
    out.set(m, integrate_product(c, translate(f, static_cast<double>(m)), e));
  }
  return out;
}

}  // namespace detail

/// x_E = ∫_E f_t(x) x_t dt, coordinates |m| <= window.
///
/// Coordinate m pairs the Pettis integral with e*_m:  ∫_E c(t) f(t − m) dt.
inline CoordinateVector synthesis_over_set(const Generator& g, const CoordinateVector& x,
                                           const IntervalSet& e, Index window) {
  return detail::synthesize(g, analysis_function(g, x), &e, -window, window);
}

/// Full-line synthesis, every structurally nonzero coordinate.
inline CoordinateVector synthesis(const Generator& g, const CoordinateVector& x) {
  return detail::synthesize(g, analysis_function(g, x), nullptr, std::numeric_limits<Index>::min() / 2,
                            std::numeric_limits<Index>::max() / 2);
}

/// Same as synthesis_over_set but with every structurally nonzero coordinate.
inline CoordinateVector synthesis_over_set(const Generator& g, const CoordinateVector& x,
                                           const IntervalSet& e) {
  return detail::synthesize(g, analysis_function(g, x), &e, std::numeric_limits<Index>::min() / 2,
                            std::numeric_limits<Index>::max() / 2);
}

/// Gram matrix G[n][m] = ∫ f(t − n) f(t − m) dt for n, m in [−window, window],
/// row-major. This is the synthesis of e_n read at coordinate m.
inline std::vector<double> biorthogonality_matrix(const Generator& g, Index window) {
  const std::size_t dim = static_cast<std::size_t>(2 * window + 1);
  std::vector<double> gram(dim * dim, 0.0);
  for (Index n = -window; n <= window; ++n) {
    const auto row = synthesis_over_set(g, CoordinateVector::unit(n), IntervalSet::real_line(), window);
    for (const auto& [m, v] : row.entries()) {
      gram[static_cast<std::size_t>(n + window) * dim + static_cast<std::size_t>(m + window)] = v;
    }
  }
  return gram;
}

struct YoungCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// ∫ |Σ_n a_n f(t − n)|^p dt  versus  ‖f‖₁ ‖a‖_p^p (sup_t Σ_n |f(t − n)|)^{p/p′}.
inline YoungCheck young_check(const StepFunction& f, const CoordinateVector& a, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("young_check: need p > 1");
  YoungCheck out;
  out.lhs = lp_norm_pow(analysis_function(f, a), p);
  // p / p′ = p − 1
  out.rhs = lp_norm(f, 1.0) * norm_pow(a, p) * std::pow(periodized_l1_sup(f), p - 1.0);
  return out;
}

}  // namespace framelab
