#pragma once

#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace offload {

enum class TrafficClass { DelayTolerant, DelaySensitive };

std::string_view to_string(TrafficClass c);

struct TransferTask {
  double size_mb = 60.0;
  double delay_threshold = 269.0;  // s; ignored for DelaySensitive
  TrafficClass traffic_class = TrafficClass::DelayTolerant;

  TransferTask() = default;
  TransferTask(double size, double threshold, TrafficClass cls);

  /// Deadline seen by planners: infinite for delay-sensitive traffic.
  double effective_threshold() const {
    return traffic_class == TrafficClass::DelaySensitive
               ? std::numeric_limits<double>::infinity()
               : delay_threshold;
  }
};

/// Per-technology transfer and idle costs.
struct EnergyModel {
  double mobile_transfer_j_per_mb = 100.0;
  double mobile_idle_w = 0.0;
  double wifi_transfer_j_per_mb = 5.0;
  double wifi_idle_w = 0.77;
  double wifi_preactivation_s = 20.0;

  void validate() const;
};

/// One row of the SNR to throughput mapping. Bounds are in dB; an infinite
/// bound marks an open-ended band.
struct SnrBand {
  double lower_db = -std::numeric_limits<double>::infinity();
  double upper_db = std::numeric_limits<double>::infinity();
  double wifi_rate = 0.0;  // Mbit/s
  double adsl_rate = 0.0;  // Mbit/s
};

struct LinkRates {
  double wifi_rate = 0.0;
  double adsl_rate = 0.0;
};

/// Measured WiFi/ADSL throughput bands, highest SNR first.
std::vector<SnrBand> default_snr_table();

/// Checks that the bands tile the real line without overlap and carry
/// positive rates. Throws std::invalid_argument otherwise.
void validate_snr_table(std::span<const SnrBand> table);

/// Rates of the band containing snr_db. A value equal to a shared boundary
/// belongs to the band that names it as its upper bound.
LinkRates snr_to_throughput(double snr_db, std::span<const SnrBand> table);

}  // namespace offload
