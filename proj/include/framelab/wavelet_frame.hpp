#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "framelab/coordinate_vector.hpp"
#include "framelab/step_function.hpp"

// Continuous wavelet frames of L_p(ℝ) built from a step-function wavelet ψ
// and its biorthogonal dual ψ*.
//
//   ψ_{a,b}  = D_a T_b ψ   with the L_p dilation   D_a f(t) = 2^{a/p}  f(2^a t)
//   ψ*_{a,b} = D_a T_b ψ*  with the L_p′ dilation  D_a g(t) = 2^{a/p′} g(2^a t)
//
// The grid-snapped family ψ^N_{a,b} is constant on 1/N × 1/N parameter cells,
// so integrals over boxes in the (a, b) plane are finite sums.

namespace framelab {

enum class Side { primal, dual };

class WaveletSystem {
 public:
  static constexpr Index kBiorthogonalityRange = 4;

  WaveletSystem(StepFunction mother, StepFunction dual_mother, double p)
      : mother_(std::move(mother)), dual_(std::move(dual_mother)), p_(p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("WaveletSystem: need 1 < p < inf");
    p_conj_ = conjugate_exponent(p);
    const double unit = lp_norm(mother_, p_);
    if (std::fabs(unit - 1.0) > 1e-12) {
      throw std::invalid_argument("WaveletSystem: mother wavelet has L_p norm " + std::to_string(unit));
    }
    const double residual = biorthogonality_residual(kBiorthogonalityRange);
    if (residual > 1e-10) {
      throw std::invalid_argument("WaveletSystem: dual is not biorthogonal (residual " +
                                  std::to_string(residual) + ")");
    }
  }

  /// Haar ψ = 1_[0,½) − 1_[½,1), self-dual.
  static WaveletSystem haar(double p) { return {StepFunction::haar(), StepFunction::haar(), p}; }

  const StepFunction& mother() const { return mother_; }
  const StepFunction& dual_mother() const { return dual_; }
  double p() const { return p_; }
  double p_conj() const { return p_conj_; }
  double exponent(Side side) const { return side == Side::primal ? p_ : p_conj_; }

  /// ψ_{a,b} or ψ*_{a,b}.
  StepFunction member(double a, double b, Side side) const {
    const auto& base = side == Side::primal ? mother_ : dual_;
    return dilate(translate(base, b), a, exponent(side));
  }

  /// max |⟨ψ_{n,k}, ψ*_{n′,k′}⟩ − δ_{nn′}δ_{kk′}| over indices in [−range, range].
  double biorthogonality_residual(Index range) const {
    double worst = 0.0;
    for (Index n = -range; n <= range; ++n) {
      for (Index k = -range; k <= range; ++k) {
        const auto prim = member(static_cast<double>(n), static_cast<double>(k), Side::primal);
        for (Index n2 = -range; n2 <= range; ++n2) {
          for (Index k2 = -range; k2 <= range; ++k2) {
            const auto du = member(static_cast<double>(n2), static_cast<double>(k2), Side::dual);
            const double expect = (n == n2 && k == k2) ? 1.0 : 0.0;
            worst = std::max(worst, std::fabs(inner(prim, du) - expect));
          }
        }
      }
    }
    return worst;
  }

 private:
  StepFunction mother_;
  StepFunction dual_;
  double p_ = 2.0;
  double p_conj_ = 2.0;
};

inline StepFunction member(const WaveletSystem& ws, double a, double b, Side side) {
  return ws.member(a, b, side);
}

struct GridIndex {
  Index l = 0;
  Index m = 0;
  int r = 0;
  int s = 0;
  int N = 1;

  friend bool operator==(const GridIndex&, const GridIndex&) = default;
};

struct SnappedPoint {
  GridIndex index;
  double a = 0.0;
  double b = 0.0;
};

/// Parameters (a, b) of ψ^N at grid index (l, r, m, s):  a = l + r/N,
/// b = m + s·2^l/N.
inline SnappedPoint snapped_parameters(const GridIndex& g) {
  SnappedPoint out{g, 0.0, 0.0};
  out.a = static_cast<double>(g.l) + static_cast<double>(g.r) / g.N;
  out.b = static_cast<double>(g.m) + std::ldexp(static_cast<double>(g.s), static_cast<int>(g.l)) / g.N;
  return out;
}

namespace detail {

/// (whole, frac) with whole + frac/N <= x < whole + (frac+1)/N, 0 <= frac < N.
inline std::pair<Index, int> grid_floor(double x, int N) {
  auto k = static_cast<Index>(std::floor(x * N));
  // x·N rounds; correct against the representable grid points k/N.
  while (static_cast<double>(k + 1) / N <= x) ++k;
  while (static_cast<double>(k) / N > x) --k;
  Index whole = k >= 0 ? k / N : -((-k + N - 1) / N);
  return {whole, static_cast<int>(k - whole * N)};
}

}  // namespace detail

inline SnappedPoint snap_to_grid(double a, double b, int N) {
  if (N < 1) throw std::invalid_argument("snap_to_grid: N must be >= 1");
  const auto [l, r] = detail::grid_floor(a, N);
  const auto [m, s] = detail::grid_floor(b, N);
  return snapped_parameters(GridIndex{l, m, r, s, N});
}

/// ψ^N_{a,b} (primal) or ψ^{N*}_{a,b} (dual).
inline StepFunction snapped_member(const WaveletSystem& ws, double a, double b, int N, Side side) {
  const auto pt = snap_to_grid(a, b, N);
  return ws.member(pt.a, pt.b, side);
}

/// P_M x = Σ_{l,m = −M}^{M−1} ⟨ψ*_{l,m}, x⟩ ψ_{l,m}.
inline StepFunction discrete_partial_reconstruct(const WaveletSystem& ws, const StepFunction& x, int M) {
  if (M < 1) throw std::invalid_argument("discrete_partial_reconstruct: M must be >= 1");
  std::vector<StepFunction> terms;
  std::vector<double> coeffs;
  for (Index l = -M; l < M; ++l) {
    for (Index m = -M; m < M; ++m) {
      const double a = static_cast<double>(l);
      const double b = static_cast<double>(m);
      const double c = inner(ws.member(a, b, Side::dual), x);
      if (c == 0.0) continue;
      terms.push_back(ws.member(a, b, Side::primal));
      coeffs.push_back(c);
    }
  }
  return linear_combination(terms, coeffs);
}

/// ∫_{[−M,M]²} ψ^{N*}_{a,b}(x) ψ^N_{a,b} da db restricted to the grid cells
/// accepted by `keep`. Each cell has area N^{−2} and a constant integrand.
inline StepFunction box_reconstruct_subset(const WaveletSystem& ws, const StepFunction& x, int M, int N,
                                           const std::function<bool(const GridIndex&)>& keep) {
  if (M < 1 || N < 1) throw std::invalid_argument("box_reconstruct: M and N must be >= 1");
  const double weight = 1.0 / (static_cast<double>(N) * N);
  std::vector<StepFunction> terms;
  std::vector<double> coeffs;
  for (int r = 0; r < N; ++r) {
    for (int s = 0; s < N; ++s) {
      for (Index l = -M; l < M; ++l) {
        for (Index m = -M; m < M; ++m) {
          const GridIndex g{l, m, r, s, N};
          if (keep && !keep(g)) continue;
          const auto pt = snapped_parameters(g);
          const double c = inner(ws.member(pt.a, pt.b, Side::dual), x);
          if (c == 0.0) continue;
          terms.push_back(ws.member(pt.a, pt.b, Side::primal));
          coeffs.push_back(weight * c);
        }
      }
    }
  }
  return linear_combination(terms, coeffs);
}

inline StepFunction box_reconstruct(const WaveletSystem& ws, const StepFunction& x, int M, int N) {
  return box_reconstruct_subset(ws, x, M, N, {});
}

/// y_{r,s} = T_{−s/N} D_{−r/N} x.
inline StepFunction conjugate_input(const StepFunction& x, int r, int s, int N, double p) {
  return translate(dilate(x, -static_cast<double>(r) / N, p), -static_cast<double>(s) / N);
}

/// N^{−2} Σ_{r,s} D_{r/N} T_{s/N} P_M y_{r,s}: the box integral rewritten as an
/// average of conjugated discrete partial reconstructions.
inline StepFunction conjugated_reconstruction(const WaveletSystem& ws, const StepFunction& x, int M, int N) {
  if (M < 1 || N < 1) throw std::invalid_argument("conjugated_reconstruction: M and N must be >= 1");
  std::vector<StepFunction> terms;
  for (int r = 0; r < N; ++r) {
    for (int s = 0; s < N; ++s) {
      const auto y = conjugate_input(x, r, s, N, ws.p());
      const auto py = discrete_partial_reconstruct(ws, y, M);
      terms.push_back(dilate(translate(py, static_cast<double>(s) / N), static_cast<double>(r) / N, ws.p()));
    }
  }
  const std::vector<double> weights(terms.size(), 1.0 / (static_cast<double>(N) * N));
  return linear_combination(terms, weights);
}

/// max_{r,s} ‖y_{r,s} − P_M y_{r,s}‖_p, which bounds the box error.
inline double conjugate_tail_bound(const WaveletSystem& ws, const StepFunction& x, int M, int N) {
  double worst = 0.0;
  for (int r = 0; r < N; ++r) {
    for (int s = 0; s < N; ++s) {
      const auto y = conjugate_input(x, r, s, N, ws.p());
      worst = std::max(worst, lp_distance(y, discrete_partial_reconstruct(ws, y, M), ws.p()));
    }
  }
  return worst;
}

struct ConvergenceRow {
  int M = 0;
  int N = 0;
  double p = 0.0;
  double error = 0.0;
  double oracle_bound = 0.0;
  double runtime_ms = 0.0;
};

inline std::vector<ConvergenceRow> convergence_study(const WaveletSystem& ws, const StepFunction& x,
                                                     const std::vector<int>& M_list,
                                                     const std::vector<int>& N_list) {
  std::vector<ConvergenceRow> rows;
  for (int M : M_list) {
    for (int N : N_list) {
      const auto start = std::chrono::steady_clock::now();
      ConvergenceRow row;
      row.M = M;
      row.N = N;
      row.p = ws.p();
      row.error = lp_distance(x, box_reconstruct(ws, x, M, N), ws.p());
      row.oracle_bound = conjugate_tail_bound(ws, x, M, N);
      row.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      rows.push_back(row);
    }
  }
  return rows;
}

/// Finite evidence for the three hypotheses of the limit lemma, for the
/// snapped family ψ^N against ψ over the box [−M, M]².
struct LimitHypotheses {
  int M = 0;
  int N = 0;
  /// (a) ‖x − ∫_{box} ψ^{N*}_{a,b}(x) ψ^N_{a,b}‖_p, exact.
  double reconstruction_error = 0.0;
  /// (b) ∫_{box} |⟨ψ*_{a,b} − ψ^{N*}_{a,b}, x⟩| da db, midpoint rule.
  double analysis_gap = 0.0;
  /// (c) ∫_{box} |⟨g, ψ^N_{a,b} − ψ_{a,b}⟩| da db, midpoint rule.
  double synthesis_gap = 0.0;
};

inline LimitHypotheses limit_hypotheses(const WaveletSystem& ws, const StepFunction& x, const StepFunction& g,
                                        int M, int N, int samples_per_unit) {
  if (samples_per_unit < 1) throw std::invalid_argument("limit_hypotheses: need samples_per_unit >= 1");
  LimitHypotheses out;
  out.M = M;
  out.N = N;
  out.reconstruction_error = lp_distance(x, box_reconstruct(ws, x, M, N), ws.p());
  const double h = 1.0 / samples_per_unit;
  const int count = 2 * M * samples_per_unit;
  for (int i = 0; i < count; ++i) {
    const double a = -M + (i + 0.5) * h;
    for (int j = 0; j < count; ++j) {
      const double b = -M + (j + 0.5) * h;
      const auto pt = snap_to_grid(a, b, N);
      out.analysis_gap += std::fabs(inner(ws.member(a, b, Side::dual), x) -
                                    inner(ws.member(pt.a, pt.b, Side::dual), x));
      out.synthesis_gap += std::fabs(inner(g, ws.member(pt.a, pt.b, Side::primal)) -
                                     inner(g, ws.member(a, b, Side::primal)));
    }
  }
  out.analysis_gap *= h * h;
  out.synthesis_gap *= h * h;
  return out;
}

}  // namespace framelab
