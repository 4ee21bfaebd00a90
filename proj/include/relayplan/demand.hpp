#pragma once

// TV demand modelling. Each household watches an integer number of live
// channels per period, drawn from a categorical distribution; demand in Mbps
// is the channel count times the per-channel rate.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "relayplan/rng.hpp"

namespace relayplan {

// How the per-period channel-count distributions are specified.
//  - Uniform: one distribution shared by every home and period.
//  - PerHour: one distribution per period, shared by every home.
//  - PerHome: a full [home][period] table.
enum class DemandShape { Uniform, PerHour, PerHome };

struct DemandModel {
  int horizon = 24;                // periods per planning day
  double channel_rate_mbps = 5.0;  // rate of one live channel
  DemandShape shape = DemandShape::PerHour;

  std::vector<double> uniform_pmf;                             // [psi]
  std::vector<std::vector<double>> per_hour_pmf;               // [t][psi]
  std::vector<std::vector<std::vector<double>>> per_home_pmf;  // [home][t][psi]

  const std::vector<double>& pmf(int home, int t) const {
    switch (shape) {
      case DemandShape::Uniform: return uniform_pmf;
      case DemandShape::PerHour: return per_hour_pmf.at(t);
      case DemandShape::PerHome: default: return per_home_pmf.at(home).at(t);
    }
  }

  int psi_max() const {
    switch (shape) {
      case DemandShape::Uniform: return static_cast<int>(uniform_pmf.size()) - 1;
      case DemandShape::PerHour: return static_cast<int>(per_hour_pmf.at(0).size()) - 1;
      case DemandShape::PerHome: default:
        return static_cast<int>(per_home_pmf.at(0).at(0).size()) - 1;
    }
  }

  // Evening-peaked viewing pattern: almost idle overnight, moderate daytime
  // activity, peak in the 17:00-22:00 band. Channel count is Binomial(psi_max,
  // activity(t)), which keeps every distribution normalised by construction.
  static DemandModel default_diurnal(int horizon = 24, double channel_rate_mbps = 5.0,
                                     int psi_max = 4) {
    static constexpr double kActivity[24] = {
        0.10, 0.08, 0.06, 0.05, 0.05, 0.08, 0.15, 0.22, 0.25, 0.25, 0.28, 0.30,
        0.32, 0.30, 0.28, 0.30, 0.38, 0.50, 0.62, 0.70, 0.68, 0.58, 0.40, 0.22};
    DemandModel m;
    m.horizon = horizon;
    m.channel_rate_mbps = channel_rate_mbps;
    m.shape = DemandShape::PerHour;
    m.per_hour_pmf.resize(horizon);
    for (int t = 0; t < horizon; ++t) {
      const double a = kActivity[((t % 24) + 24) % 24];
      auto& pmf = m.per_hour_pmf[t];
      pmf.resize(psi_max + 1);
      // binomial pmf, computed with running binomial coefficient
      double coeff = 1.0;
      for (int k = 0; k <= psi_max; ++k) {
        pmf[k] = coeff * std::pow(a, k) * std::pow(1.0 - a, psi_max - k);
        coeff = coeff * (psi_max - k) / (k + 1.0);
      }
    }
    return m;
  }
};

// Sampled demand realisation: delta[home][t] in Mbps. A household is active
// in a period exactly when its demand there is positive.
struct DemandProfile {
  std::vector<std::vector<double>> delta;

  int homes() const { return static_cast<int>(delta.size()); }
  int periods() const { return delta.empty() ? 0 : static_cast<int>(delta[0].size()); }
  bool active(int home, int t) const { return delta.at(home).at(t) > 0.0; }
};

inline void validate_demand_model(const DemandModel& m, int n_homes) {
  auto check_pmf = [](const std::vector<double>& pmf, const std::string& where) {
    if (pmf.empty()) throw std::invalid_argument("empty demand distribution at " + where);
    double sum = 0.0;
    for (double p : pmf) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw std::invalid_argument("negative or non-finite probability at " + where);
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("demand distribution does not sum to 1 at " + where);
  };
  if (m.horizon < 1) throw std::invalid_argument("demand horizon must be >= 1");
  if (!(m.channel_rate_mbps > 0.0)) throw std::invalid_argument("channel rate must be > 0");
  switch (m.shape) {
    case DemandShape::Uniform:
      check_pmf(m.uniform_pmf, "uniform");
      break;
    case DemandShape::PerHour: {
      if (static_cast<int>(m.per_hour_pmf.size()) != m.horizon)
        throw std::invalid_argument("per-hour demand table does not match horizon");
      const std::size_t width = m.per_hour_pmf.front().size();
      for (int t = 0; t < m.horizon; ++t) {
        if (m.per_hour_pmf[t].size() != width)
          throw std::invalid_argument("ragged per-hour demand table");
        check_pmf(m.per_hour_pmf[t], "hour " + std::to_string(t));
      }
      break;
    }
    case DemandShape::PerHome: {
      if (static_cast<int>(m.per_home_pmf.size()) != n_homes)
        throw std::invalid_argument("per-home demand table does not match household count");
      if (n_homes == 0) throw std::invalid_argument("per-home demand table is empty");
      const std::size_t width = m.per_home_pmf.front().front().size();
      for (int h = 0; h < n_homes; ++h) {
        if (static_cast<int>(m.per_home_pmf[h].size()) != m.horizon)
          throw std::invalid_argument("per-home demand table does not match horizon");
        for (int t = 0; t < m.horizon; ++t) {
          if (m.per_home_pmf[h][t].size() != width)
            throw std::invalid_argument("ragged per-home demand table");
          check_pmf(m.per_home_pmf[h][t],
                    "home " + std::to_string(h) + " hour " + std::to_string(t));
        }
      }
      break;
    }
  }
}

// Draw one demand realisation. Cells are sampled in (home, period) order from
// a single mt19937_64 stream, so equal seeds give bitwise-equal profiles.
inline DemandProfile sample_profile(const DemandModel& m, int n_homes, std::uint64_t seed) {
  validate_demand_model(m, n_homes);
  std::mt19937_64 gen(seed);
  DemandProfile p;
  p.delta.assign(n_homes, std::vector<double>(m.horizon, 0.0));
  for (int h = 0; h < n_homes; ++h)
    for (int t = 0; t < m.horizon; ++t) {
      const int channels = sample_categorical(m.pmf(h, t), uniform01(gen));
      p.delta[h][t] = channels * m.channel_rate_mbps;
    }
  return p;
}

// Per-household peak over the horizon.
inline std::vector<double> peak_demands(const DemandProfile& p) {
  if (p.periods() == 0) throw std::invalid_argument("demand profile has no periods");
  std::vector<double> peak(p.homes(), 0.0);
  for (int h = 0; h < p.homes(); ++h)
    for (int t = 0; t < p.periods(); ++t) peak[h] = std::max(peak[h], p.delta[h][t]);
  return peak;
}

inline double total_demand(const DemandProfile& p, int t) {
  if (t < 0 || t >= p.periods()) throw std::out_of_range("demand period out of range");
  double sum = 0.0;
  for (int h = 0; h < p.homes(); ++h) sum += p.delta[h][t];
  return sum;
}

// Reduce a profile to its single-period peak realisation.
inline DemandProfile peak_profile(const DemandProfile& p) {
  DemandProfile out;
  out.delta.reserve(p.homes());
  for (double d : peak_demands(p)) out.delta.push_back({d});
  return out;
}

// Deterministic worst case: every home pulls its channel budget in a single
// period. Useful as a seed-free provisioning column.
inline DemandProfile worst_case_profile(const DemandModel& m, int n_homes) {
  DemandProfile p;
  p.delta.assign(n_homes, {m.psi_max() * m.channel_rate_mbps});
  return p;
}

}  // namespace relayplan
