#pragma once

#include <map>
#include <vector>

namespace offload {

/// Set of disjoint half-open intervals [lo, hi) over object positions (MB).
/// Touching or overlapping intervals are merged on insertion.
class RangeSet {
 public:
  struct Range {
    double lo;
    double hi;
  };

  void insert(double lo, double hi);

  /// Total measure of the set.
  double measure() const;

  /// Measure of [lo, hi) not yet covered.
  double missing_in(double lo, double hi) const;

  bool covers(double lo, double hi) const { return missing_in(lo, hi) <= kEpsilon; }

  /// End of the contiguous covered run starting at 0 (0 when 0 is missing).
  double prefix() const;

  /// Covers up to `amount` of the lowest missing positions inside [lo, hi).
  /// Returns the amount actually added.
  double fill_lowest(double lo, double hi, double amount);

  std::vector<Range> ranges() const;
  std::size_t interval_count() const { return ranges_.size(); }

  /// Tolerance used when merging and when testing coverage.
  static constexpr double kEpsilon = 1e-9;

 private:
  std::map<double, double> ranges_;  // lo -> hi
};

}  // namespace offload
