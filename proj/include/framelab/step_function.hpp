#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "framelab/interval_set.hpp"

namespace framelab {

/// Compactly supported, real, piecewise-constant function on the line.
///
/// Cell i is the half-open interval [t_i, t_{i+1}) carrying values[i]; the
/// function is zero left of t_0 and from t_k on. The zero function has no
/// cells. Construction canonicalizes: adjacent cells with identical values are
/// merged and zero-valued cells at either end are trimmed, so two equal
/// functions built along different routes usually share a representation
/// (but equality of functions never relies on that).
class StepFunction {
 public:
  /// Breakpoints closer than this are treated as one when grids are merged.
  static constexpr double kMergeTolerance = 1e-12;

  StepFunction() = default;

  StepFunction(std::vector<double> breakpoints, std::vector<double> values)
      : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (breaks_.empty() && values_.empty()) return;
    if (breaks_.size() != values_.size() + 1) {
      throw std::invalid_argument("StepFunction: need exactly one more breakpoint than values");
    }
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
      if (!std::isfinite(breaks_[i])) throw std::invalid_argument("StepFunction: non-finite breakpoint");
      if (i > 0 && !(breaks_[i - 1] < breaks_[i])) {
        throw std::invalid_argument("StepFunction: breakpoints must be strictly increasing");
      }
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("StepFunction: non-finite value");
    }
    canonicalize();
  }

  /// value · 1_[lo, hi)
  static StepFunction indicator(double lo, double hi, double value = 1.0) {
    if (!(lo < hi)) return {};
    return StepFunction({lo, hi}, {value});
  }

  /// +1 on [0, 1/2), -1 on [1/2, 1).
  static StepFunction haar() { return StepFunction({0.0, 0.5, 1.0}, {1.0, -1.0}); }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t cell_count() const { return values_.size(); }
  bool is_zero() const { return values_.empty(); }

  double cell_lo(std::size_t i) const { return breaks_[i]; }
  double cell_hi(std::size_t i) const { return breaks_[i + 1]; }
  double cell_length(std::size_t i) const { return breaks_[i + 1] - breaks_[i]; }

  /// [lo, hi) of the support hull; {0, 0} for the zero function.
  Interval support() const {
    if (is_zero()) return {};
    return {breaks_.front(), breaks_.back()};
  }
  double support_width() const { return support().length(); }

  double operator()(double t) const {
    if (is_zero() || t < breaks_.front() || t >= breaks_.back()) return 0.0;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    return values_[static_cast<std::size_t>(std::distance(breaks_.begin(), it)) - 1];
  }

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  void canonicalize() {
    std::vector<double> b;
    std::vector<double> v;
    b.reserve(breaks_.size());
    v.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!v.empty() && v.back() == values_[i]) {
        b.back() = breaks_[i + 1];
        continue;
      }
      if (b.empty()) b.push_back(breaks_[i]);
      v.push_back(values_[i]);
      b.push_back(breaks_[i + 1]);
    }
    std::size_t first = 0;
    while (first < v.size() && v[first] == 0.0) ++first;
    std::size_t last = v.size();
    while (last > first && v[last - 1] == 0.0) --last;
    if (first == last) {
      breaks_.clear();
      values_.clear();
      return;
    }
    breaks_.assign(b.begin() + static_cast<std::ptrdiff_t>(first),
                   b.begin() + static_cast<std::ptrdiff_t>(last) + 1);
    values_.assign(v.begin() + static_cast<std::ptrdiff_t>(first),
                   v.begin() + static_cast<std::ptrdiff_t>(last));
  }

  std::vector<double> breaks_;
  std::vector<double> values_;
};

namespace detail {

/// Sorted union of breakpoints, with points closer than kMergeTolerance fused.
inline std::vector<double> merged_grid(std::span<const StepFunction* const> fs) {
  std::vector<double> all;
  for (const auto* f : fs) all.insert(all.end(), f->breakpoints().begin(), f->breakpoints().end());
  std::sort(all.begin(), all.end());
  std::vector<double> grid;
  grid.reserve(all.size());
  for (double t : all) {
    if (grid.empty() || t - grid.back() > StepFunction::kMergeTolerance) grid.push_back(t);
  }
  return grid;
}

inline std::vector<double> midpoints(const std::vector<double>& grid) {
  std::vector<double> mids;
  if (grid.size() < 2) return mids;
  mids.reserve(grid.size() - 1);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) mids.push_back(0.5 * (grid[k] + grid[k + 1]));
  return mids;
}

/// Adds coeff · f to the per-cell accumulator over `grid`, touching only the
/// grid cells whose midpoints lie in the support of f.
inline void accumulate(const StepFunction& f, double coeff, const std::vector<double>& mids,
                       std::vector<double>& acc) {
  const auto& b = f.breakpoints();
  const auto& v = f.values();
  auto lo = mids.begin();
  for (std::size_t i = 0; i < v.size(); ++i) {
    lo = std::lower_bound(lo, mids.end(), b[i]);
    auto hi = std::lower_bound(lo, mids.end(), b[i + 1]);
    const double c = coeff * v[i];
    for (auto it = lo; it != hi; ++it) acc[static_cast<std::size_t>(it - mids.begin())] += c;
    lo = hi;
  }
}

inline std::vector<double> sample(const StepFunction& f, const std::vector<double>& mids) {
  std::vector<double> out(mids.size(), 0.0);
  accumulate(f, 1.0, mids, out);
  return out;
}

}  // namespace detail

inline double evaluate(const StepFunction& f, double t) { return f(t); }

/// Σ coeffs[j] · terms[j], built on one merged grid.
inline StepFunction linear_combination(std::span<const StepFunction> terms,
                                       std::span<const double> coeffs) {
  if (terms.size() != coeffs.size()) {
    throw std::invalid_argument("linear_combination: terms and coefficients differ in length");
  }
  std::vector<const StepFunction*> active;
  std::vector<double> active_coeffs;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    if (coeffs[j] != 0.0 && !terms[j].is_zero()) {
      active.push_back(&terms[j]);
      active_coeffs.push_back(coeffs[j]);
    }
  }
  if (active.empty()) return {};
  auto grid = detail::merged_grid(active);
  if (grid.size() < 2) return {};
  const auto mids = detail::midpoints(grid);
  std::vector<double> acc(mids.size(), 0.0);
  for (std::size_t j = 0; j < active.size(); ++j) {
    detail::accumulate(*active[j], active_coeffs[j], mids, acc);
  }
  return StepFunction(std::move(grid), std::move(acc));
}

inline StepFunction add(const StepFunction& f, const StepFunction& g) {
  const StepFunction terms[] = {f, g};
  const double coeffs[] = {1.0, 1.0};
  return linear_combination(terms, coeffs);
}

inline StepFunction subtract(const StepFunction& f, const StepFunction& g) {
  const StepFunction terms[] = {f, g};
  const double coeffs[] = {1.0, -1.0};
  return linear_combination(terms, coeffs);
}

inline StepFunction scale(const StepFunction& f, double c) {
  if (c == 0.0 || f.is_zero()) return {};
  std::vector<double> v = f.values();
  for (auto& x : v) x *= c;
  return StepFunction(f.breakpoints(), std::move(v));
}

inline StepFunction multiply(const StepFunction& f, const StepFunction& g) {
  if (f.is_zero() || g.is_zero()) return {};
  const StepFunction* both[] = {&f, &g};
  auto grid = detail::merged_grid(both);
  if (grid.size() < 2) return {};
  const auto mids = detail::midpoints(grid);
  auto fv = detail::sample(f, mids);
  const auto gv = detail::sample(g, mids);
  for (std::size_t k = 0; k < fv.size(); ++k) fv[k] *= gv[k];
  return StepFunction(std::move(grid), std::move(fv));
}

enum class CombineMode { add, multiply };

inline StepFunction combine(const StepFunction& f, const StepFunction& g, CombineMode mode) {
  return mode == CombineMode::add ? add(f, g) : multiply(f, g);
}

/// Pointwise map of the cell values; `op(0)` must be 0.
template <class Op>
StepFunction map_values(const StepFunction& f, Op op) {
  if (f.is_zero()) return {};
  std::vector<double> v = f.values();
  for (auto& x : v) x = op(x);
  return StepFunction(f.breakpoints(), std::move(v));
}

inline StepFunction abs(const StepFunction& f) {
  return map_values(f, [](double x) { return std::fabs(x); });
}

inline StepFunction positive_part(const StepFunction& f) {
  return map_values(f, [](double x) { return x > 0.0 ? x : 0.0; });
}

inline StepFunction negative_part(const StepFunction& f) {
  return map_values(f, [](double x) { return x < 0.0 ? -x : 0.0; });
}

/// T_b f (t) = f(t - b).
inline StepFunction translate(const StepFunction& f, double b) {
  if (f.is_zero() || b == 0.0) return f;
  std::vector<double> t = f.breakpoints();
  for (auto& x : t) x += b;
  return StepFunction(std::move(t), f.values());
}

/// D_a f (t) = 2^{a/p} f(2^a t), the L_p-isometric dilation.
inline StepFunction dilate(const StepFunction& f, double a, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("dilate: exponent must be >= 1");
  if (f.is_zero() || a == 0.0) return f;
  const double shrink = std::exp2(-a);
  const double gain = std::exp2(a / p);
  std::vector<double> t = f.breakpoints();
  for (auto& x : t) x *= shrink;
  std::vector<double> v = f.values();
  for (auto& x : v) x *= gain;
  return StepFunction(std::move(t), std::move(v));
}

/// ∫_E f.
inline double integrate(const StepFunction& f, const IntervalSet& e) {
  double total = 0.0;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    total += f.values()[i] * e.overlap(f.cell_lo(i), f.cell_hi(i));
  }
  return total;
}

/// ∫ f over the whole line.
inline double integrate(const StepFunction& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < f.cell_count(); ++i) total += f.values()[i] * f.cell_length(i);
  return total;
}

/// ∫ |f|^p, without the final root.
inline double lp_norm_pow(const StepFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    total += std::pow(std::fabs(f.values()[i]), p) * f.cell_length(i);
  }
  return total;
}

inline double lp_norm(const StepFunction& f, double p) {
  const double s = lp_norm_pow(f, p);
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

inline double sup_norm(const StepFunction& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::fabs(v));
  return m;
}

/// ∫_E f·g, walking both cell lists over the common support only. Pass
/// nullptr for E to integrate over the whole line.
inline double integrate_product(const StepFunction& f, const StepFunction& g,
                                const IntervalSet* e = nullptr) {
  if (f.is_zero() || g.is_zero()) return 0.0;
  const auto& fb = f.breakpoints();
  const auto& gb = g.breakpoints();
  const double lo = std::max(fb.front(), gb.front());
  const double hi = std::min(fb.back(), gb.back());
  if (!(lo < hi)) return 0.0;
  auto cell_of = [lo](const std::vector<double>& b) {
    return static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), lo) - b.begin()) - 1;
  };
  std::size_t i = cell_of(fb);
  std::size_t j = cell_of(gb);
  double cursor = lo;
  double total = 0.0;
  while (cursor < hi) {
    const double next = std::min(fb[i + 1], gb[j + 1]);
    const double v = f.values()[i] * g.values()[j];
    if (v != 0.0) total += v * (e ? e->overlap(cursor, next) : next - cursor);
    cursor = next;
    if (fb[i + 1] == next) ++i;
    if (gb[j + 1] == next) ++j;
  }
  return total;
}

inline double inner(const StepFunction& f, const StepFunction& g) { return integrate_product(f, g); }

/// ‖f − g‖_p
inline double lp_distance(const StepFunction& f, const StepFunction& g, double p) {
  return lp_norm(subtract(f, g), p);
}

/// The 1-periodic function u ↦ Σ_n |f(u − n)| restricted to [0, 1).
inline StepFunction periodized_abs(const StepFunction& f) {
  std::vector<StepFunction> pieces;
  std::vector<double> weights;
  double everywhere = 0.0;
  for (std::size_t i = 0; i < f.cell_count(); ++i) {
    const double w = std::fabs(f.values()[i]);
    if (w == 0.0) continue;
    double lo = f.cell_lo(i);
    const double hi = f.cell_hi(i);
    const double full = std::floor(hi - lo);
    everywhere += w * full;
    lo += full;
    if (!(lo < hi)) continue;
    const double start = lo - std::floor(lo);
    const double end = start + (hi - lo);
    if (end <= 1.0) {
      pieces.push_back(StepFunction::indicator(start, end));
      weights.push_back(w);
    } else {
      pieces.push_back(StepFunction::indicator(start, 1.0));
      weights.push_back(w);
      pieces.push_back(StepFunction::indicator(0.0, end - 1.0));
      weights.push_back(w);
    }
  }
  if (everywhere > 0.0) {
    pieces.push_back(StepFunction::indicator(0.0, 1.0));
    weights.push_back(everywhere);
  }
  return linear_combination(pieces, weights);
}

/// sup_t Σ_n |f(t − n)|, exact up to rounding in the folded cell sums.
inline double periodized_l1_sup(const StepFunction& f) { return sup_norm(periodized_abs(f)); }

}  // namespace framelab
