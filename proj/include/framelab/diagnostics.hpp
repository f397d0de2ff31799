#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "framelab/coordinate_vector.hpp"

// Probes for shrinking and boundedly complete behaviour of discrete frames
// (counting measure on the index set), the tail / partial-sum operators
//   P_E x = Σ_{j ∈ E} f_j(x) x_j,   T_E x = Σ_{j ∉ E} f_j(x) x_j,
// and an exact-integer run of the three-pairs-per-coordinate frame of c₀
// that reconstructs on the full index set but not on 3ℕ.
//
// Everything here is evidence on a finite truncation window; nothing claims
// the infinite limit.

namespace framelab {

enum class SpaceKind { lp, c0, l1 };

struct SpaceTag {
  SpaceKind kind = SpaceKind::lp;
  double p = 2.0;

  static SpaceTag lp(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("SpaceTag::lp: need 1 < p < inf");
    return {SpaceKind::lp, p};
  }
  static SpaceTag c0() { return {SpaceKind::c0, 0.0}; }
  static SpaceTag l1() { return {SpaceKind::l1, 1.0}; }

  double norm(const CoordinateVector& v) const {
    switch (kind) {
      case SpaceKind::lp: return framelab::norm(v, p);
      case SpaceKind::c0: return sup_norm(v);
      case SpaceKind::l1: return framelab::norm(v, 1.0);
    }
    return 0.0;
  }

  /// Norm of a finitely supported functional in the dual space.
  double dual_norm(const CoordinateVector& f) const {
    switch (kind) {
      case SpaceKind::lp: return framelab::norm(f, conjugate_exponent(p));
      case SpaceKind::c0: return framelab::norm(f, 1.0);
      case SpaceKind::l1: return sup_norm(f);
    }
    return 0.0;
  }

  std::string name() const {
    switch (kind) {
      case SpaceKind::lp: return "lp";
      case SpaceKind::c0: return "c0";
      case SpaceKind::l1: return "l1";
    }
    return "";
  }
};

struct FramePair {
  CoordinateVector x;
  CoordinateVector f;
};

/// Finite family (x_j, f_j) acting on coordinates window_lo … window_hi.
struct DiscreteFrame {
  std::vector<FramePair> pairs;
  SpaceTag space;
  Index window_lo = 0;
  Index window_hi = 0;

  std::size_t size() const { return pairs.size(); }
};

/// Positions into DiscreteFrame::pairs, sorted and unique.
using IndexSet = std::vector<std::size_t>;

inline IndexSet normalized(IndexSet e) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

inline IndexSet all_indices(const DiscreteFrame& frame) {
  IndexSet e(frame.size());
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = j;
  return e;
}

inline IndexSet complement(const DiscreteFrame& frame, const IndexSet& e) {
  IndexSet out;
  std::size_t k = 0;
  for (std::size_t j = 0; j < frame.size(); ++j) {
    while (k < e.size() && e[k] < j) ++k;
    if (k < e.size() && e[k] == j) continue;
    out.push_back(j);
  }
  return out;
}

/// (e_n, e*_n) for lo <= n <= hi.
inline DiscreteFrame unit_vector_frame(SpaceTag space, Index lo, Index hi) {
  DiscreteFrame frame{{}, space, lo, hi};
  for (Index n = lo; n <= hi; ++n) frame.pairs.push_back({CoordinateVector::unit(n), CoordinateVector::unit(n)});
  return frame;
}

/// P_E x
inline CoordinateVector partial_sum(const DiscreteFrame& frame, const CoordinateVector& x, const IndexSet& e) {
  CoordinateVector out;
  for (std::size_t j : e) {
    const auto& pr = frame.pairs.at(j);
    const double c = pair(x, pr.f);
    if (c != 0.0) out = axpy(c, pr.x, std::move(out));
  }
  return out;
}

inline CoordinateVector reconstruct(const DiscreteFrame& frame, const CoordinateVector& x) {
  return partial_sum(frame, x, all_indices(frame));
}

/// max over unit vectors e_n in the window of ‖Σ_j f_j(e_n) x_j − e_n‖.
inline double reconstruction_residual(const DiscreteFrame& frame) {
  double worst = 0.0;
  for (Index n = frame.window_lo; n <= frame.window_hi; ++n) {
    const auto e = CoordinateVector::unit(n);
    worst = std::max(worst, frame.space.norm(reconstruct(frame, e) - e));
  }
  return worst;
}

/// T*_E f = Σ_{j ∉ E} f(x_j) f_j.
inline CoordinateVector tail_functional(const DiscreteFrame& frame, const CoordinateVector& f, const IndexSet& e) {
  CoordinateVector out;
  for (std::size_t j : complement(frame, e)) {
    const auto& pr = frame.pairs[j];
    const double c = pair(pr.x, f);
    if (c != 0.0) out = axpy(c, pr.f, std::move(out));
  }
  return out;
}

/// ‖T*_E f‖ as a functional on the window, exact: the tail co-operator of a
/// finite family is itself a finitely supported functional.
inline double tail_dual_norm(const DiscreteFrame& frame, const CoordinateVector& f, const IndexSet& e) {
  return frame.space.dual_norm(restricted(tail_functional(frame, f, e), frame.window_lo, frame.window_hi));
}

/// max ‖P_E x‖ / ‖x‖ over the window's unit vectors and `trials` seeded
/// Gaussian vectors.
inline double projection_norm_estimate(const DiscreteFrame& frame, const IndexSet& e, int trials,
                                       std::uint64_t seed = 0) {
  double best = 0.0;
  for (Index n = frame.window_lo; n <= frame.window_hi; ++n) {
    best = std::max(best, frame.space.norm(partial_sum(frame, CoordinateVector::unit(n), e)));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < trials; ++k) {
    CoordinateVector x;
    for (Index n = frame.window_lo; n <= frame.window_hi; ++n) x.set(n, normal(rng));
    const double nx = frame.space.norm(x);
    if (nx < 1e-9) continue;
    best = std::max(best, frame.space.norm(partial_sum(frame, x, e)) / nx);
  }
  return best;
}

struct TailReport {
  IndexSet set;
  double tail_dual_norm = 0.0;
  double projection_norm = 0.0;
};

inline TailReport tail_report(const DiscreteFrame& frame, const CoordinateVector& f, const IndexSet& e,
                              int trials = 64, std::uint64_t seed = 0) {
  return {e, tail_dual_norm(frame, f, e), projection_norm_estimate(frame, e, trials, seed)};
}

/// Seeded random subsets E and Gaussian x; the largest ‖P_E x‖ / ‖x‖ seen.
inline double measured_suppression_constant(const DiscreteFrame& frame, int trials, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  double best = 0.0;
  for (int k = 0; k < trials; ++k) {
    IndexSet e;
    for (std::size_t j = 0; j < frame.size(); ++j) {
      if (coin(rng)) e.push_back(j);
    }
    CoordinateVector x;
    for (Index n = frame.window_lo; n <= frame.window_hi; ++n) x.set(n, normal(rng));
    const double nx = frame.space.norm(x);
    if (nx < 1e-9) continue;
    best = std::max(best, frame.space.norm(partial_sum(frame, x, e)) / nx);
  }
  return best;
}

struct CauchyReport {
  /// ‖P_{F_k}(x**) − P_{F_{k−1}}(x**)‖ for consecutive nested sets (the first
  /// entry compares against the empty set).
  std::vector<double> increments;
  /// Last increment at or below the tolerance.
  bool decays = false;
};

/// P_E(x**) = Σ_{j ∈ E} x**(f_j) x_j along an increasing chain of sets.
inline CauchyReport boundedly_complete_probe(const DiscreteFrame& frame, const CoordinateVector& xss,
                                             const std::vector<IndexSet>& nesting, double tol = 1e-10) {
  CauchyReport out;
  CoordinateVector previous;
  IndexSet prev_set;
  for (const auto& raw : nesting) {
    const auto e = normalized(raw);
    if (!std::includes(e.begin(), e.end(), prev_set.begin(), prev_set.end())) {
      throw std::invalid_argument("boundedly_complete_probe: nesting must be increasing");
    }
    auto current = partial_sum(frame, xss, e);
    out.increments.push_back(frame.space.norm(current - previous));
    previous = std::move(current);
    prev_set = e;
  }
  out.decays = !out.increments.empty() && out.increments.back() <= tol;
  return out;
}

/// Keeps coordinates in `coords`: (P x_j, P* f_j). Pairs where either side
/// vanishes contribute nothing and are dropped.
inline DiscreteFrame project_frame(const DiscreteFrame& frame, const std::set<Index>& coords) {
  auto project = [&](const CoordinateVector& v) {
    CoordinateVector out;
    for (const auto& [n, c] : v.entries()) {
      if (coords.contains(n)) out.set(n, c);
    }
    return out;
  };
  DiscreteFrame out{{}, frame.space, frame.window_lo, frame.window_hi};
  if (!coords.empty()) {
    out.window_lo = std::max(frame.window_lo, *coords.begin());
    out.window_hi = std::min(frame.window_hi, *coords.rbegin());
  }
  for (const auto& pr : frame.pairs) {
    auto x = project(pr.x);
    auto f = project(pr.f);
    if (x.is_zero() || f.is_zero()) continue;
    out.pairs.push_back({std::move(x), std::move(f)});
  }
  return out;
}

/// Max reconstruction error over unit vectors e_n, n ∈ coords, for a frame
/// projected onto coords.
inline double projected_reconstruction_residual(const DiscreteFrame& frame, const std::set<Index>& coords) {
  double worst = 0.0;
  for (Index n : coords) {
    const auto e = CoordinateVector::unit(n);
    worst = std::max(worst, frame.space.norm(reconstruct(frame, e) - e));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Three pairs per coordinate in c₀ × ℓ₁, 1-based frame index n:
//   n = 3j − 2 : (e_j,  e*_j)
//   n = 3j − 1 : (e_j, −e*_1)
//   n = 3j     : (e_j,  e*_1)

using IntVector = std::map<Index, std::int64_t>;

struct IntPair {
  Index x_coord = 0;  // x_n = e_{x_coord}
  Index f_coord = 0;  // f_n = sign · e*_{f_coord}
  int sign = 1;
};

inline IntPair triple_pair(Index n) {
  const Index j = (n + 2) / 3;
  switch (n % 3) {
    case 1: return {j, j, 1};
    case 2: return {j, 1, -1};
    default: return {j, 1, 1};
  }
}

inline std::int64_t int_pair(const IntVector& v, Index coord) {
  auto it = v.find(coord);
  return it == v.end() ? 0 : it->second;
}

inline void int_add(IntVector& v, Index coord, std::int64_t c) {
  if (c == 0) return;
  if ((v[coord] += c) == 0) v.erase(coord);
}

/// x_E = Σ_{n ∈ E, n <= 3K} f_n(x) x_n in exact integers.
template <class InSet>
IntVector triple_partial_sum(Index K, const IntVector& x, InSet in_set) {
  IntVector out;
  for (Index n = 1; n <= 3 * K; ++n) {
    if (!in_set(n)) continue;
    const auto pr = triple_pair(n);
    int_add(out, pr.x_coord, pr.sign * int_pair(x, pr.f_coord));
  }
  return out;
}

/// f_E = Σ_{n ∈ E} f(x_n) f_n.
template <class InSet>
IntVector triple_dual_partial_sum(Index K, const IntVector& f, InSet in_set) {
  IntVector out;
  for (Index n = 1; n <= 3 * K; ++n) {
    if (!in_set(n)) continue;
    const auto pr = triple_pair(n);
    int_add(out, pr.f_coord, pr.sign * int_pair(f, pr.x_coord));
  }
  return out;
}

/// The closed-form series for f_E, grouped by residue class of n mod 3.
template <class InSet>
IntVector triple_dual_series(Index K, const IntVector& f, InSet in_set) {
  IntVector out;
  for (Index j = 1; j <= K; ++j) {
    const std::int64_t fj = int_pair(f, j);
    if (fj == 0) continue;
    if (in_set(3 * j - 2)) int_add(out, j, fj);
    if (in_set(3 * j)) int_add(out, 1, fj);
    if (in_set(3 * j - 1)) int_add(out, 1, -fj);
  }
  return out;
}

/// The same family as a floating-point DiscreteFrame on c₀, window 1 … K.
inline DiscreteFrame triple_frame(Index K) {
  DiscreteFrame frame{{}, SpaceTag::c0(), 1, K};
  for (Index n = 1; n <= 3 * K; ++n) {
    const auto pr = triple_pair(n);
    CoordinateVector f;
    f.set(pr.f_coord, static_cast<double>(pr.sign));
    frame.pairs.push_back({CoordinateVector::unit(pr.x_coord), std::move(f)});
  }
  return frame;
}

struct CounterexampleReport {
  Index K = 0;
  /// (i) e_j reconstructed exactly over all 3K indices, j = 1 … full_checked.
  Index full_checked = 0;
  bool full_reconstruction_exact = false;
  /// (ii) candidate x_{3ℕ} for x = e_1 has coordinate exactly 1 at every j <= K.
  IntVector restricted_candidate;
  bool restricted_all_ones = false;
  std::int64_t restricted_sup_norm = 0;
  /// (iii) f_E from its definition equals the closed-form series, and
  /// f_E(e_j) = Σ_{n ∈ E} f_n(e_j) f(x_n), for every probed (f, E).
  std::size_t dual_cases = 0;
  bool dual_series_exact = false;
  std::vector<std::string> failures;

  bool ok() const { return full_reconstruction_exact && restricted_all_ones && dual_series_exact; }
};

inline CounterexampleReport triple_counterexample(Index K, Index full_check_limit = 50, std::uint64_t seed = 0) {
  if (K <= 0) throw std::invalid_argument("counterexample: K must be positive");
  CounterexampleReport rep;
  rep.K = K;
  auto everything = [](Index) { return true; };

  // (i)
  rep.full_checked = std::min(K, full_check_limit);
  rep.full_reconstruction_exact = true;
  for (Index j = 1; j <= rep.full_checked; ++j) {
    const IntVector e{{j, 1}};
    if (triple_partial_sum(K, e, everything) != e) {
      rep.full_reconstruction_exact = false;
      rep.failures.push_back("full reconstruction of e_" + std::to_string(j));
    }
  }

  // (ii)
  auto multiples_of_3 = [](Index n) { return n % 3 == 0; };
  rep.restricted_candidate = triple_partial_sum(K, IntVector{{1, 1}}, multiples_of_3);
  rep.restricted_all_ones = static_cast<Index>(rep.restricted_candidate.size()) == K;
  for (const auto& [j, c] : rep.restricted_candidate) {
    rep.restricted_sup_norm = std::max(rep.restricted_sup_norm, c < 0 ? -c : c);
    if (c != 1 || j < 1 || j > K) rep.restricted_all_ones = false;
  }
  if (!rep.restricted_all_ones) rep.failures.push_back("restricted candidate is not all ones");

  // (iii)
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> small(-5, 5);
  std::uniform_int_distribution<Index> coord(1, K);
  std::vector<IntVector> functionals{{{1, 1}}, {{std::min<Index>(2, K), 1}}};
  for (int k = 0; k < 4; ++k) {
    IntVector f;
    for (int t = 0; t < 6; ++t) int_add(f, coord(rng), small(rng));
    functionals.push_back(std::move(f));
  }
  std::bernoulli_distribution coin(0.5);
  std::set<Index> random_set;
  for (Index n = 1; n <= 3 * K; ++n) {
    if (coin(rng)) random_set.insert(n);
  }
  const std::vector<std::pair<std::string, std::function<bool(Index)>>> sets{
      {"all", everything},
      {"3N", multiples_of_3},
      {"3N-1", [](Index n) { return n % 3 == 2; }},
      {"3N-2", [](Index n) { return n % 3 == 1; }},
      {"random", [&random_set](Index n) { return random_set.contains(n); }},
  };
  rep.dual_series_exact = true;
  for (const auto& f : functionals) {
    for (const auto& [name, in_set] : sets) {
      ++rep.dual_cases;
      const auto by_definition = triple_dual_partial_sum(K, f, in_set);
      const auto by_series = triple_dual_series(K, f, in_set);
      bool ok = by_definition == by_series;
      // f_E(e_j) against Σ_{n ∈ E} f_n(e_j) f(x_n) for small j.
      for (Index j = 1; ok && j <= std::min<Index>(K, 8); ++j) {
        std::int64_t direct = 0;
        for (Index n = 1; n <= 3 * K; ++n) {
          if (!in_set(n)) continue;
          const auto pr = triple_pair(n);
          if (pr.f_coord == j) direct += pr.sign * int_pair(f, pr.x_coord);
        }
        ok = int_pair(by_series, j) == direct;
      }
      if (!ok) {
        rep.dual_series_exact = false;
        rep.failures.push_back("dual series mismatch on E = " + name);
      }
    }
  }
  return rep;
}

}  // namespace framelab
