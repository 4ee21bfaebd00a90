#pragma once

// Link-budget models: dual-slope WiFi pathloss with an MCS rate lookup, and a
// line-of-sight LTE pathloss with a derated Shannon capacity.

#include <cmath>
#include <stdexcept>

#include "relayplan/scenario.hpp"

namespace relayplan {

struct LinkBudget {
  double pathloss_db = 0.0;
  double rss_dbm = 0.0;
  double snr_db = 0.0;  // only meaningful for LTE links
  double capacity_mbps = 0.0;
};

// Free-space pathloss 20 log10(d) + 20 log10(f) - 147.5 (d in metres, f in Hz).
inline double free_space_pathloss_db(double d_m, double f_hz) {
  if (!(d_m > 0.0)) throw std::domain_error("pathloss distance must be > 0");
  if (!(f_hz > 0.0)) throw std::domain_error("carrier frequency must be > 0");
  return 20.0 * std::log10(d_m) + 20.0 * std::log10(f_hz) - 147.5;
}

// Dual-slope indoor/outdoor WiFi model: free space up to the breakpoint,
// exponent 3.5 beyond it, plus a fixed shadow-fading margin past the knee.
inline double wifi_pathloss_db(double d_m, const RadioConfig& cfg) {
  const double d_bp = cfg.breakpoint_distance_m;
  if (d_m <= d_bp) return free_space_pathloss_db(d_m, cfg.wifi_carrier_hz);
  return free_space_pathloss_db(d_bp, cfg.wifi_carrier_hz) +
         35.0 * std::log10(d_m / d_bp) + cfg.shadow_fading_db;
}

inline double wifi_rss_dbm(double d_m, const RadioConfig& cfg) {
  return cfg.wifi_tx_power_dbm - wifi_pathloss_db(d_m, cfg);
}

// Highest rate-table row usable at the given RSS, times the stream count.
// Returns 0 when the signal is below sensitivity or below every table row.
inline double wifi_rate_for_rss_mbps(double rss_dbm, const RadioConfig& cfg) {
  if (rss_dbm < cfg.wifi_sensitivity_dbm) return 0.0;
  double rate = 0.0;
  for (const auto& row : cfg.mcs_table)
    if (rss_dbm >= row.min_rss_dbm) rate = row.per_stream_rate_mbps;
  return rate * cfg.streams;
}

inline LinkBudget wifi_link_budget(double d_m, const RadioConfig& cfg) {
  LinkBudget b;
  b.pathloss_db = wifi_pathloss_db(d_m, cfg);
  b.rss_dbm = cfg.wifi_tx_power_dbm - b.pathloss_db;
  b.capacity_mbps = wifi_rate_for_rss_mbps(b.rss_dbm, cfg);
  return b;
}

inline double wifi_link_capacity_mbps(double d_m, const RadioConfig& cfg) {
  return wifi_link_budget(d_m, cfg).capacity_mbps;
}

// LTE line-of-sight pathloss, distance in km: 103.8 + 20.9 log10(d).
inline double lte_pathloss_los_db(double d_km) {
  if (!(d_km > 0.0)) throw std::domain_error("pathloss distance must be > 0");
  return 103.8 + 20.9 * std::log10(d_km);
}

// Thermal noise floor over the channel bandwidth plus receiver noise figure.
inline double lte_noise_floor_dbm(const RadioConfig& cfg) {
  return -174.0 + 10.0 * std::log10(cfg.channel_bandwidth_hz) + cfg.lte_noise_figure_db;
}

// Derated Shannon capacity: beta * W * log2(1 + gamma * SNR).
inline double lte_capacity_for_snr_mbps(double snr_db, const RadioConfig& cfg) {
  const double snr_linear = std::pow(10.0, snr_db / 10.0);
  const double bps = cfg.beta * cfg.channel_bandwidth_hz * std::log2(1.0 + cfg.gamma * snr_linear);
  return bps / 1e6;
}

inline LinkBudget lte_link_budget(double d_m, const LteBaseStation& bs, const RadioConfig& cfg) {
  LinkBudget b;
  b.pathloss_db = lte_pathloss_los_db(d_m / 1000.0);
  b.rss_dbm = bs.tx_power_dbm - b.pathloss_db;
  b.snr_db = b.rss_dbm - lte_noise_floor_dbm(cfg);
  b.capacity_mbps = lte_capacity_for_snr_mbps(b.snr_db, cfg);
  return b;
}

inline double lte_link_capacity_mbps(double d_m, const LteBaseStation& bs,
                                     const RadioConfig& cfg) {
  return lte_link_budget(d_m, bs, cfg).capacity_mbps;
}

}  // namespace relayplan
