#include "offload/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace offload {

std::string_view to_string(TrafficClass c) {
  return c == TrafficClass::DelayTolerant ? "delay-tolerant" : "delay-sensitive";
}

TransferTask::TransferTask(double size, double threshold, TrafficClass cls)
    : size_mb(size), delay_threshold(threshold), traffic_class(cls) {
  if (!(size_mb > 0.0)) throw std::invalid_argument("task size must be > 0");
  if (!(delay_threshold > 0.0)) throw std::invalid_argument("delay threshold must be > 0");
}

void EnergyModel::validate() const {
  if (mobile_transfer_j_per_mb < 0 || mobile_idle_w < 0 || wifi_transfer_j_per_mb < 0 || wifi_idle_w < 0 ||
      wifi_preactivation_s < 0) {
    throw std::invalid_argument("energy model values must be >= 0");
  }
}

std::vector<SnrBand> default_snr_table() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {
      {-50, inf, 19.90, 15.87},  {-60, -50, 18.30, 11.86}, {-70, -60, 17.76, 10.13},
      {-80, -70, 17.23, 9.46},   {-90, -80, 16.74, 8.37},  {-inf, -90, 16.16, 6.81},
  };
}

void validate_snr_table(std::span<const SnrBand> table) {
  if (table.empty()) throw std::invalid_argument("SNR table is empty");
  std::vector<SnrBand> bands(table.begin(), table.end());
  std::sort(bands.begin(), bands.end(),
            [](const SnrBand& a, const SnrBand& b) { return a.lower_db < b.lower_db; });
  if (!std::isinf(bands.front().lower_db) || bands.front().lower_db > 0) {
    throw std::invalid_argument("SNR table must be open-ended below");
  }
  if (!std::isinf(bands.back().upper_db) || bands.back().upper_db < 0) {
    throw std::invalid_argument("SNR table must be open-ended above");
  }
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (!(bands[i].wifi_rate > 0) || !(bands[i].adsl_rate > 0)) {
      throw std::invalid_argument("SNR band rates must be > 0");
    }
    if (!(bands[i].lower_db < bands[i].upper_db)) {
      throw std::invalid_argument("SNR band bounds out of order");
    }
    if (i > 0 && bands[i].lower_db != bands[i - 1].upper_db) {
      throw std::invalid_argument("SNR bands must meet without gap or overlap");
    }
  }
}

LinkRates snr_to_throughput(double snr_db, std::span<const SnrBand> table) {
  for (const auto& band : table) {
    if (snr_db > band.lower_db && snr_db <= band.upper_db) {
      return {band.wifi_rate, band.adsl_rate};
    }
  }
  // Only reachable for -inf, which belongs to the lowest band.
  const auto lowest = std::min_element(
      table.begin(), table.end(),
      [](const SnrBand& a, const SnrBand& b) { return a.lower_db < b.lower_db; });
  return {lowest->wifi_rate, lowest->adsl_rate};
}

}  // namespace offload
