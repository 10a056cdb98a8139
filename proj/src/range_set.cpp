#include "offload/range_set.hpp"

#include <algorithm>
#include <iterator>

namespace offload {

void RangeSet::insert(double lo, double hi) {
  if (!(hi - lo > 0.0)) return;
  auto it = ranges_.upper_bound(lo);
  if (it != ranges_.begin()) {
    auto prev = std::prev(it);
    if (prev->second + kEpsilon >= lo) it = prev;
  }
  while (it != ranges_.end() && it->first <= hi + kEpsilon) {
    lo = std::min(lo, it->first);
    hi = std::max(hi, it->second);
    it = ranges_.erase(it);
  }
  ranges_.emplace(lo, hi);
}

double RangeSet::measure() const {
  double total = 0.0;
  for (const auto& [lo, hi] : ranges_) total += hi - lo;
  return total;
}

double RangeSet::missing_in(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  double covered = 0.0;
  for (const auto& [a, b] : ranges_) {
    if (a >= hi) break;
    covered += std::max(0.0, std::min(b, hi) - std::max(a, lo));
  }
  return std::max(0.0, (hi - lo) - covered);
}

double RangeSet::prefix() const {
  if (ranges_.empty() || ranges_.begin()->first > kEpsilon) return 0.0;
  return ranges_.begin()->second;
}

double RangeSet::fill_lowest(double lo, double hi, double amount) {
  if (!(amount > 0.0) || !(hi > lo)) return 0.0;
  std::vector<Range> gaps;
  double cursor = lo;
  for (const auto& [a, b] : ranges_) {
    if (b <= cursor) continue;
    if (a >= hi) break;
    if (a > cursor) gaps.push_back({cursor, a});
    cursor = std::max(cursor, b);
    if (cursor >= hi) break;
  }
  if (cursor < hi) gaps.push_back({cursor, hi});

  double added = 0.0;
  for (const auto& g : gaps) {
    const double take = std::min(g.hi - g.lo, amount - added);
    if (take <= 0.0) break;
    insert(g.lo, g.lo + take);
    added += take;
  }
  return added;
}

std::vector<RangeSet::Range> RangeSet::ranges() const {
  std::vector<Range> out;
  out.reserve(ranges_.size());
  for (const auto& [lo, hi] : ranges_) out.push_back({lo, hi});
  return out;
}

}  // namespace offload
