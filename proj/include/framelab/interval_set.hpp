#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace framelab {

/// Half-open interval [lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi > lo ? hi - lo : 0.0; }
  bool contains(double t) const { return lo <= t && t < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of disjoint half-open intervals, kept sorted and merged.
///
/// Every measurable set used by the frame constructions is of this form, so
/// set-indexed integrals reduce to cell-by-cell overlap lengths.
class IntervalSet {
 public:
  IntervalSet() = default;

  explicit IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    normalize();
  }

  IntervalSet(std::initializer_list<Interval> intervals)
      : IntervalSet(std::vector<Interval>(intervals)) {}

  static IntervalSet single(double lo, double hi) { return IntervalSet({Interval{lo, hi}}); }

  /// The whole real line, represented by infinite endpoints.
  static IntervalSet real_line() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return single(-inf, inf);
  }

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  double measure() const {
    double total = 0.0;
    for (const auto& iv : intervals_) total += iv.length();
    return total;
  }

  bool contains(double t) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](double v, const Interval& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return false;
    return std::prev(it)->contains(t);
  }

  /// Length of [lo, hi) ∩ this set.
  double overlap(double lo, double hi) const {
    double total = 0.0;
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), lo,
                               [](double v, const Interval& iv) { return v < iv.hi; });
    for (; it != intervals_.end() && it->lo < hi; ++it) {
      const double a = std::max(lo, it->lo);
      const double b = std::min(hi, it->hi);
      if (b > a) total += b - a;
    }
    return total;
  }

  IntervalSet unite(const IntervalSet& other) const {
    std::vector<Interval> all = intervals_;
    all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
    return IntervalSet(std::move(all));
  }

  IntervalSet intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < intervals_.size() && j < other.intervals_.size()) {
      const auto& a = intervals_[i];
      const auto& b = other.intervals_[j];
      const double lo = std::max(a.lo, b.lo);
      const double hi = std::min(a.hi, b.hi);
      if (lo < hi) out.push_back({lo, hi});
      if (a.hi < b.hi) ++i; else ++j;
    }
    return IntervalSet(std::move(out));
  }

  IntervalSet difference(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t j = 0;
    for (const auto& a : intervals_) {
      double cursor = a.lo;
      while (j < other.intervals_.size() && other.intervals_[j].hi <= cursor) ++j;
      std::size_t k = j;
      while (k < other.intervals_.size() && other.intervals_[k].lo < a.hi) {
        const auto& b = other.intervals_[k];
        if (b.lo > cursor) out.push_back({cursor, b.lo});
        cursor = std::max(cursor, b.hi);
        if (cursor >= a.hi) break;
        ++k;
      }
      if (cursor < a.hi) out.push_back({cursor, a.hi});
    }
    return IntervalSet(std::move(out));
  }

  /// window \ this.
  IntervalSet complement_within(const Interval& window) const {
    return IntervalSet({window}).difference(*this);
  }

  IntervalSet shifted(double offset) const {
    std::vector<Interval> out = intervals_;
    for (auto& iv : out) {
      iv.lo += offset;
      iv.hi += offset;
    }
    return IntervalSet(std::move(out));
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize() {
    std::erase_if(intervals_, [](const Interval& iv) { return !(iv.lo < iv.hi); });
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    merged.reserve(intervals_.size());
    for (const auto& iv : intervals_) {
      if (!merged.empty() && iv.lo <= merged.back().hi) {
        merged.back().hi = std::max(merged.back().hi, iv.hi);
      } else {
        merged.push_back(iv);
      }
    }
    intervals_ = std::move(merged);
  }

  std::vector<Interval> intervals_;
};

}  // namespace framelab
