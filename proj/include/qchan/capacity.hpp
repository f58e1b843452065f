#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qchan {

enum class ChannelMode { single, unentangled, entangled, bosonic_ref };

inline std::string_view to_string(ChannelMode mode) {
  switch (mode) {
    case ChannelMode::single: return "single";
    case ChannelMode::unentangled: return "unentangled";
    case ChannelMode::entangled: return "entangled";
    case ChannelMode::bosonic_ref: return "bosonic_ref";
  }
  throw std::invalid_argument("to_string: unknown ChannelMode");
}

/// One point of the power/capacity tradeoff: `rate` bits per unit time at
/// power `power` through m channels operated in the given mode.
struct CapacityPoint {
  ChannelMode mode = ChannelMode::single;
  int m = 1;
  double power = 0.0;
  double hbar = 1.0;
  double rate = 0.0;
};

namespace detail {

inline void check_power(double power, double hbar, const char* what) {
  if (!(power > 0.0)) throw std::invalid_argument(std::string(what) + ": power must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument(std::string(what) + ": hbar must be > 0");
}

}  // namespace detail

/// Reliable single-channel rate (2/sqrt(pi)) sqrt(P/hbar).
inline double capacity_single(double power, double hbar) {
  detail::check_power(power, hbar, "capacity_single");
  return (2.0 / std::sqrt(std::numbers::pi)) * std::sqrt(power / hbar);
}

/// Coefficient sqrt(2/(pi (1 - 2^-m))); reduces to 2/sqrt(pi) at m = 1 and
/// falls monotonically to sqrt(2/pi).
inline double beta(int m) {
  if (m < 1) throw std::invalid_argument("beta: m must be >= 1");
  return std::sqrt(2.0 / (std::numbers::pi * (1.0 - std::ldexp(1.0, -m))));
}

/// m coupled channels entangled in transit: m * beta(m) * sqrt(P/hbar).
inline double capacity_entangled(double power, int m, double hbar) {
  detail::check_power(power, hbar, "capacity_entangled");
  return m * beta(m) * std::sqrt(power / hbar);
}

/// m independent channels splitting the power evenly: sqrt(m) times the
/// single-channel rate.
inline double capacity_unentangled(double power, int m, double hbar) {
  detail::check_power(power, hbar, "capacity_unentangled");
  if (m < 1) throw std::invalid_argument("capacity_unentangled: m must be >= 1");
  return std::sqrt(static_cast<double>(m)) * capacity_single(power, hbar);
}

/// Broadband bosonic reference curve (sqrt(pi/3)/ln 2) sqrt(P/hbar); plotted
/// alongside the qubit-channel laws, never simulated.
inline double capacity_bosonic_ref(double power, double hbar) {
  detail::check_power(power, hbar, "capacity_bosonic_ref");
  return (std::sqrt(std::numbers::pi / 3.0) / std::numbers::ln2) * std::sqrt(power / hbar);
}

/// Minimum power that sustains a given reliable single-channel rate,
/// inverting capacity_single: P = pi hbar rate^2 / 4.
inline double single_channel_power_for_rate(double rate, double hbar) {
  if (!(rate > 0.0)) throw std::invalid_argument("single_channel_power_for_rate: rate must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("single_channel_power_for_rate: hbar must be > 0");
  return std::numbers::pi * hbar * rate * rate / 4.0;
}

/// Capacity points for every (power, m, mode) combination: the three qubit
/// laws plus the bosonic reference at m = 1, ordered by (mode, m, power).
inline std::vector<CapacityPoint> figure1_sweep(std::span<const double> power_grid,
                                                std::span<const int> m_values, double hbar) {
  if (power_grid.empty() || m_values.empty()) {
    throw std::invalid_argument("figure1_sweep: empty grid");
  }
  std::vector<double> powers(power_grid.begin(), power_grid.end());
  std::sort(powers.begin(), powers.end());
  std::vector<int> ms(m_values.begin(), m_values.end());
  std::sort(ms.begin(), ms.end());
  for (double p : powers) detail::check_power(p, hbar, "figure1_sweep");
  for (int m : ms) {
    if (m < 1) throw std::invalid_argument("figure1_sweep: m must be >= 1");
  }

  std::vector<CapacityPoint> points;
  points.reserve(powers.size() * (2 * ms.size() + 2));
  for (double p : powers) {
    points.push_back({ChannelMode::single, 1, p, hbar, capacity_single(p, hbar)});
  }
  for (int m : ms) {
    for (double p : powers) {
      points.push_back({ChannelMode::unentangled, m, p, hbar, capacity_unentangled(p, m, hbar)});
    }
  }
  for (int m : ms) {
    for (double p : powers) {
      points.push_back({ChannelMode::entangled, m, p, hbar, capacity_entangled(p, m, hbar)});
    }
  }
  for (double p : powers) {
    points.push_back({ChannelMode::bosonic_ref, 1, p, hbar, capacity_bosonic_ref(p, hbar)});
  }
  return points;
}

}  // namespace qchan
