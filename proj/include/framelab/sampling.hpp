#pragma once

#include <climits>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "framelab/coordinate_vector.hpp"
#include "framelab/diagnostics.hpp"
#include "framelab/interval_set.hpp"
#include "framelab/translate_frame.hpp"

namespace framelab {

/// Lattice t_j = offset + j·h restricted to a parameter window, each sample
/// carrying Riemann weight h.
struct SamplingPlan {
  double h = 1.0;
  double offset = 0.0;
  IntervalSet window;

  std::vector<double> samples() const {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("SamplingPlan: step must be positive");
    std::vector<double> out;
    for (const auto& iv : window.intervals()) {
      if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
        throw std::invalid_argument("SamplingPlan: window must be bounded");
      }
      auto j = static_cast<long long>(std::ceil((iv.lo - offset) / h));
      while (offset + static_cast<double>(j) * h < iv.lo) ++j;
      while (j > LLONG_MIN && offset + static_cast<double>(j - 1) * h >= iv.lo) --j;
      for (double t = offset + static_cast<double>(j) * h; t < iv.hi; t = offset + static_cast<double>(++j) * h) {
        out.push_back(t);
      }
    }
    return out;
  }
};

/// Parameter window covering every integrand t ↦ f(t − n) f(t − m) for
/// |n|, |m| <= window.
inline SamplingPlan covering_plan(const Generator& g, double h, Index window, double offset = 0.0) {
  const auto s = g.function().support();
  const double k = static_cast<double>(window);
  return {h, offset, IntervalSet::single(-k + s.lo, k + s.hi)};
}

/// (x_{t_j}, h · f_{t_j}) over the plan's samples, coordinates |n| <= window.
inline DiscreteFrame sample_frame(const Generator& g, const SamplingPlan& plan, Index window, double p = 2.0) {
  DiscreteFrame frame{{}, SpaceTag::lp(p), -window, window};
  for (double t : plan.samples()) {
    auto x = frame_vector(g, t, window);
    if (x.is_zero()) continue;
    auto f = plan.h * x;
    frame.pairs.push_back({std::move(x), std::move(f)});
  }
  return frame;
}

struct SweepRow {
  double h = 0.0;
  std::size_t num_samples = 0;
  double max_error = 0.0;
  bool exact = false;
};

inline constexpr double kExactSamplingTolerance = 1e-10;

inline std::vector<SweepRow> sampling_sweep(const Generator& g, const std::vector<double>& h_list, Index window,
                                            double p = 2.0, double offset = 0.0) {
  std::vector<SweepRow> rows;
  rows.reserve(h_list.size());
  for (double h : h_list) {
    const auto plan = covering_plan(g, h, window, offset);
    SweepRow row;
    row.h = h;
    row.num_samples = plan.samples().size();
    row.max_error = reconstruction_residual(sample_frame(g, plan, window, p));
    row.exact = row.max_error < kExactSamplingTolerance;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace framelab
