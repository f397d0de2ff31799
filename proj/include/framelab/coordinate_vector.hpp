#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace framelab {

using Index = std::int64_t;

/// Finitely supported real sequence indexed by ℤ.
///
/// Models truncated elements of ℓ_p(ℤ) and of its dual ℓ_q(ℤ). Zero entries
/// are never stored, so `support()` is the true support.
class CoordinateVector {
 public:
  CoordinateVector() = default;

  CoordinateVector(std::initializer_list<std::pair<const Index, double>> entries) {
    for (const auto& [n, c] : entries) set(n, c);
  }

  static CoordinateVector unit(Index n) {
    CoordinateVector v;
    v.set(n, 1.0);
    return v;
  }

  double operator[](Index n) const {
    auto it = entries_.find(n);
    return it == entries_.end() ? 0.0 : it->second;
  }

  void set(Index n, double c) {
    if (c == 0.0) {
      entries_.erase(n);
    } else {
      entries_[n] = c;
    }
  }

  void add_to(Index n, double c) { set(n, (*this)[n] + c); }

  const std::map<Index, double>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  std::size_t nonzeros() const { return entries_.size(); }

  Index min_index() const { return entries_.begin()->first; }
  Index max_index() const { return entries_.rbegin()->first; }

  friend bool operator==(const CoordinateVector&, const CoordinateVector&) = default;

 private:
  std::map<Index, double> entries_;
};

/// Conjugate exponent p′ with 1/p + 1/p′ = 1.
inline double conjugate_exponent(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("conjugate_exponent: need p > 1");
  return p / (p - 1.0);
}

inline double norm_pow(const CoordinateVector& v, double p) {
  double s = 0.0;
  for (const auto& [n, c] : v.entries()) s += std::pow(std::fabs(c), p);
  return s;
}

/// (Σ |c_n|^p)^{1/p}; p = 1 is accepted for the ℓ₁ norm.
inline double norm(const CoordinateVector& v, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm: need p >= 1");
  const double s = norm_pow(v, p);
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  return std::pow(s, 1.0 / p);
}

inline double sup_norm(const CoordinateVector& v) {
  double m = 0.0;
  for (const auto& [n, c] : v.entries()) m = std::max(m, std::fabs(c));
  return m;
}

/// Duality bracket Σ_n x_n f_n.
inline double pair(const CoordinateVector& x, const CoordinateVector& f) {
  const auto& small = x.nonzeros() <= f.nonzeros() ? x : f;
  const auto& large = x.nonzeros() <= f.nonzeros() ? f : x;
  double s = 0.0;
  for (const auto& [n, c] : small.entries()) s += c * large[n];
  return s;
}

inline CoordinateVector axpy(double alpha, const CoordinateVector& x, CoordinateVector y) {
  if (alpha == 0.0) return y;
  for (const auto& [n, c] : x.entries()) y.add_to(n, alpha * c);
  return y;
}

inline CoordinateVector operator+(const CoordinateVector& a, const CoordinateVector& b) {
  return axpy(1.0, b, a);
}

inline CoordinateVector operator-(const CoordinateVector& a, const CoordinateVector& b) {
  return axpy(-1.0, b, a);
}

inline CoordinateVector operator*(double s, const CoordinateVector& v) {
  CoordinateVector out;
  if (s == 0.0) return out;
  for (const auto& [n, c] : v.entries()) out.set(n, s * c);
  return out;
}

/// (S_k x)_n = x_{n-k}
inline CoordinateVector shifted(const CoordinateVector& v, Index k) {
  CoordinateVector out;
  for (const auto& [n, c] : v.entries()) out.set(n + k, c);
  return out;
}

/// Entries with lo <= n <= hi.
inline CoordinateVector restricted(const CoordinateVector& v, Index lo, Index hi) {
  CoordinateVector out;
  for (auto it = v.entries().lower_bound(lo); it != v.entries().end() && it->first <= hi; ++it) {
    out.set(it->first, it->second);
  }
  return out;
}

}  // namespace framelab
