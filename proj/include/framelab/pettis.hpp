#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "framelab/coordinate_vector.hpp"
#include "framelab/interval_set.hpp"
#include "framelab/step_function.hpp"
#include "framelab/translate_frame.hpp"

namespace framelab {

enum class SetOp { unite, intersect, difference, complement_within };

/// Dispatch over the IntervalSet operations; `window` is only read by
/// complement_within (window \ a, b ignored).
inline IntervalSet set_algebra(const IntervalSet& a, const IntervalSet& b, SetOp op,
                               Interval window = {}) {
  switch (op) {
    case SetOp::unite: return a.unite(b);
    case SetOp::intersect: return a.intersect(b);
    case SetOp::difference: return a.difference(b);
    case SetOp::complement_within: return a.complement_within(window);
  }
  return {};
}

/// Cells of f where the predicate holds on the value, as a set.
template <class Pred>
IntervalSet level_set(const StepFunction& f, Pred pred) {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    if (pred(f.values()[i])) out.push_back({f.cell_lo(i), f.cell_hi(i)});
  }
  return IntervalSet(std::move(out));
}

struct SetSupremum {
  double value = 0.0;
  IntervalSet witness;
  /// ∫(cd)^+ and ∫(cd)^−
  double positive_mass = 0.0;
  double negative_mass = 0.0;
};

/// sup over measurable E of |∫_E c·d|.
///
/// The supremum is max(∫(cd)^+, ∫(cd)^−), attained on the set where cd is
/// positive (resp. negative).
inline SetSupremum exact_set_supremum(const StepFunction& c, const StepFunction& d) {
  const StepFunction h = multiply(c, d);
  SetSupremum out;
  out.positive_mass = integrate(positive_part(h));
  out.negative_mass = integrate(negative_part(h));
  if (out.positive_mass >= out.negative_mass) {
    out.value = out.positive_mass;
    out.witness = level_set(h, [](double v) { return v > 0.0; });
  } else {
    out.value = out.negative_mass;
    out.witness = level_set(h, [](double v) { return v < 0.0; });
  }
  return out;
}

/// Standard-normal entries on indices −window … window.
template <class Rng>
CoordinateVector gaussian_vector(Rng& rng, Index window) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CoordinateVector v;
  for (Index n = -window; n <= window; ++n) v.set(n, normal(rng));
  return v;
}

struct ConstantEstimate {
  /// max |∫_E c d| / (‖x‖_p ‖x*‖_q) over the probed pairs: a lower bound for B_s.
  double suppression = 0.0;
  /// max ∫|c d| / (‖x‖_p ‖x*‖_q): a lower bound for B_u.
  double unconditional = 0.0;
  std::size_t pairs = 0;
};

namespace detail {

inline void probe_pair(const Generator& g, const CoordinateVector& x, const CoordinateVector& xs, double p,
                       double q, ConstantEstimate& est) {
  const double scale = norm(x, p) * norm(xs, q);
  if (scale < 1e-9) return;
  const auto c = analysis_function(g, x);
  const auto d = analysis_function(g, xs);
  const auto sup = exact_set_supremum(c, d);
  est.suppression = std::max(est.suppression, sup.value / scale);
  est.unconditional = std::max(est.unconditional, (sup.positive_mass + sup.negative_mass) / scale);
  ++est.pairs;
}

}  // namespace detail

/// Certified lower bounds for the suppression and unconditionality constants
/// of the translate frame of g on ℓ_p.
///
/// Probes the coordinate pairs (e_n, e_m) for |n|, |m| <= 1 first, then
/// `trials` seeded Gaussian pairs supported on [−window, window].
inline ConstantEstimate estimate_constants(const Generator& g, int trials, Index window, double p,
                                           std::uint64_t seed = 0) {
  const double q = conjugate_exponent(p);
  ConstantEstimate est;
  for (Index n = -1; n <= 1; ++n) {
    for (Index m = -1; m <= 1; ++m) {
      detail::probe_pair(g, CoordinateVector::unit(n), CoordinateVector::unit(m), p, q, est);
    }
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < trials; ++k) {
    const auto x = gaussian_vector(rng, window);
    const auto xs = gaussian_vector(rng, window);
    detail::probe_pair(g, x, xs, p, q, est);
  }
  return est;
}

inline double suppression_constant_lower_bound(const Generator& g, int trials, Index window, double p,
                                               std::uint64_t seed = 0) {
  return estimate_constants(g, trials, window, p, seed).suppression;
}

}  // namespace framelab
