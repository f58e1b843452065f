#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchan/common.hpp"
#include "qchan/energetics.hpp"
#include "qchan/operators.hpp"
#include "qchan/statevec.hpp"

namespace qchan {

/// Physical parameters of one transfer channel: m message qubits per side, a
/// transfer window delta_t, the action constant, and an optional power
/// budget recorded for reporting.
struct ChannelConfig {
  int m = 1;
  double delta_t = 1.0;
  double hbar = 1.0;
  std::optional<double> power_budget;
};

namespace detail {

inline void check_config(const ChannelConfig& cfg) {
  if (cfg.m < 1) throw std::invalid_argument("ChannelConfig: m must be >= 1");
  if (!(cfg.delta_t > 0.0)) throw std::invalid_argument("ChannelConfig: delta_t must be > 0");
  if (!(cfg.hbar > 0.0)) throw std::invalid_argument("ChannelConfig: hbar must be > 0");
  if (cfg.power_budget && !(*cfg.power_budget > 0.0)) {
    throw std::invalid_argument("ChannelConfig: power budget must be > 0");
  }
}

inline void check_bits(const std::vector<int>& bits, int m) {
  if (static_cast<int>(bits.size()) != m) {
    throw std::invalid_argument("bits length must equal m");
  }
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
  }
}

inline std::vector<int> joint_bits(const std::vector<int>& a_bits,
                                   const std::vector<int>& b_bits) {
  std::vector<int> bits(a_bits);
  bits.insert(bits.end(), b_bits.begin(), b_bits.end());
  return bits;
}

// 53-bit uniform in [0, 1); portable across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

struct TransferReport {
  double latency = 0.0;
  double mean_energy = 0.0;
  double power = 0.0;
  double midpoint_residual = 0.0;
  double final_fidelity = 0.0;
  int bits_delivered = 0;
};

struct ChainReport {
  int sites = 0;
  int hop_count = 0;
  double latency = 0.0;
  double per_hop_energy = 0.0;
  double average_power = 0.0;
  double pipelined_rate = 0.0;
  double final_fidelity = 0.0;
};

struct SpinWaveCurve {
  double coupling = 0.0;
  std::vector<double> times;
  std::vector<double> fidelities;
  double peak_time = 0.0;
  double peak_fidelity = 0.0;
  double max_norm_error = 0.0;
  double max_excitation_drift = 0.0;
};

struct DecoherenceReport {
  std::int64_t trials = 0;
  std::int64_t corrupted_count = 0;
  double mean_attempts = 0.0;
  std::vector<std::int64_t> attempt_histogram;  // index k = trials finishing on attempt k+1
  std::uint64_t seed = 0;
};

/// State halfway through the block swap of |b>_A |0...0>_B:
/// (e^{-i pi/4}/sqrt(2)) (|b,0...0> + i |0...0,b>).
inline PureState halfway_state(const std::vector<int>& bits) {
  if (bits.empty()) throw std::invalid_argument("halfway_state: empty bit sequence");
  const int m = static_cast<int>(bits.size());
  const std::vector<int> zeros(static_cast<std::size_t>(m), 0);
  std::size_t front_index = 0;  // |b, 0...0>
  std::size_t back_index = 0;   // |0...0, b>
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("halfway_state: bits must be 0 or 1");
    front_index = (front_index << 1) | static_cast<std::size_t>(b);
    back_index = (back_index << 1) | static_cast<std::size_t>(b);
  }
  front_index <<= m;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dimension_of(2 * m)));
  const std::complex<double> prefactor = std::polar(1.0 / std::sqrt(2.0), -std::numbers::pi / 4);
  amps(static_cast<Eigen::Index>(front_index)) += prefactor;
  amps(static_cast<Eigen::Index>(back_index)) += prefactor * std::complex<double>(0.0, 1.0);
  return PureState(std::move(amps));
}

/// Transfers the m-bit message b through the coupled channel: prepares
/// |b>_A |0>_B, evolves under the 2m-qubit swap Hamiltonian for delta_t, and
/// accounts energy, the halfway-state residual, and the delivery fidelity.
/// The mean energy is sampled across the window and checked constant.
inline TransferReport run_entangled_transfer(const std::vector<int>& bits,
                                             const ChannelConfig& cfg, int time_samples = 101) {
  detail::check_config(cfg);
  detail::check_bits(bits, cfg.m);
  if (time_samples < 3 || time_samples % 2 == 0) {
    throw std::invalid_argument(
        "run_entangled_transfer: time_samples must be odd and >= 3 so the grid contains the "
        "midpoint");
  }
  const int m = cfg.m;
  const std::vector<int> zeros(static_cast<std::size_t>(m), 0);
  const SwapHamiltonian hamiltonian(BlockSwap(RegisterLayout::contiguous(m)), cfg.delta_t,
                                    cfg.hbar);
  const PureState initial = basis_state(detail::joint_bits(bits, zeros));
  const PureState target = basis_state(detail::joint_bits(zeros, bits));

  const double mean_energy = expectation_energy(initial, hamiltonian);
  for (int k = 0; k < time_samples; ++k) {
    const double t = cfg.delta_t * (static_cast<double>(k) / (time_samples - 1));
    const double sampled =
        expectation_energy(evolve_swap_hamiltonian(initial, hamiltonian, t), hamiltonian);
    if (std::abs(sampled - mean_energy) > 1e-10 * std::max(1.0, std::abs(mean_energy))) {
      throw std::runtime_error("run_entangled_transfer: energy drifted across the window");
    }
  }

  const PureState midpoint = evolve_swap_hamiltonian(initial, hamiltonian, cfg.delta_t / 2.0);
  const double midpoint_residual =
      (midpoint.amplitudes() - halfway_state(bits).amplitudes()).cwiseAbs().maxCoeff();
  const PureState final_state = evolve_swap_hamiltonian(initial, hamiltonian, cfg.delta_t);
  const double final_fidelity = std::norm(inner(target, final_state));

  TransferReport report;
  report.latency = cfg.delta_t;
  report.mean_energy = mean_energy;
  report.power = mean_energy / cfg.delta_t;
  report.midpoint_residual = midpoint_residual;
  report.final_fidelity = final_fidelity;
  report.bits_delivered = m;
  return report;
}

/// Transfers b through m independent pair swaps (Hamiltonian sum of per-pair
/// swap generators; the terms commute, so the evolution factorizes). The
/// mean energy is the closed-form sum pi*hbar*(1 - overlap_i)/(2 delta_t)
/// with overlap_i = 1 for b_i = 0 and 0 otherwise; the midpoint residual is
/// taken against the product of per-pair halfway states.
inline TransferReport run_unentangled_transfer(const std::vector<int>& bits,
                                               const ChannelConfig& cfg) {
  detail::check_config(cfg);
  detail::check_bits(bits, cfg.m);
  const int m = cfg.m;
  const std::vector<int> zeros(static_cast<std::size_t>(m), 0);
  const PureState initial = basis_state(detail::joint_bits(bits, zeros));
  const PureState target = basis_state(detail::joint_bits(zeros, bits));

  std::vector<SwapHamiltonian> pair_hamiltonians;
  pair_hamiltonians.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    pair_hamiltonians.emplace_back(BlockSwap(RegisterLayout({i}, {m + i})), cfg.delta_t,
                                   cfg.hbar);
  }
  auto evolve_all = [&](const PureState& psi, double t) {
    PureState state = psi;
    for (const SwapHamiltonian& h : pair_hamiltonians) {
      state = evolve_swap_hamiltonian(state, h, t);
    }
    return state;
  };

  double mean_energy = 0.0;
  for (int b : bits) {
    mean_energy += swap_energy_closed_form(b == 0 ? 1.0 : 0.0, cfg.delta_t, cfg.hbar);
  }

  // Product of per-pair halfway amplitudes: factor 1 for b_i = 0, otherwise
  // e^{-i pi/4}/sqrt(2) on (a_i, b_i) = (b_i, 0) and i times that on (0, b_i).
  const std::size_t dim = dimension_of(2 * m);
  Eigen::VectorXcd expected_mid = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  const std::complex<double> stay = std::polar(1.0 / std::sqrt(2.0), -std::numbers::pi / 4);
  const std::complex<double> hopped = stay * std::complex<double>(0.0, 1.0);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::complex<double> factor = 1.0;
    for (int i = 0; i < m && factor != std::complex<double>(0.0, 0.0); ++i) {
      const int ai = bit_at(idx, i, 2 * m);
      const int bi = bit_at(idx, m + i, 2 * m);
      if (bits[static_cast<std::size_t>(i)] == 0) {
        if (ai != 0 || bi != 0) factor = 0.0;
      } else if (ai == 1 && bi == 0) {
        factor *= stay;
      } else if (ai == 0 && bi == 1) {
        factor *= hopped;
      } else {
        factor = 0.0;
      }
    }
    expected_mid(static_cast<Eigen::Index>(idx)) = factor;
  }
  const PureState midpoint = evolve_all(initial, cfg.delta_t / 2.0);
  const double midpoint_residual =
      (midpoint.amplitudes() - expected_mid).cwiseAbs().maxCoeff();

  const PureState final_state = evolve_all(initial, cfg.delta_t);
  const double final_fidelity = std::norm(inner(target, final_state));

  TransferReport report;
  report.latency = cfg.delta_t;
  report.mean_energy = mean_energy;
  report.power = mean_energy / cfg.delta_t;
  report.midpoint_residual = midpoint_residual;
  report.final_fidelity = final_fidelity;
  report.bits_delivered = m;
  return report;
}

/// Relays one bit down the chain A1 B1 A2 B2 ... An Bn by 2n-1 sequential
/// full swaps, each completed in a window delta_t/2. Energy while a hop is
/// active is pi*hbar*(1 - overlap)/delta_t, twice the full-window figure;
/// the quoted average power applies the power = energy/window convention to
/// the hop window. A new bit can be admitted every delta_t, so the pipelined
/// rate stays 1/delta_t.
inline ChainReport run_chain_relay(int bit, int sites, const ChannelConfig& cfg) {
  detail::check_config(cfg);
  if (bit != 0 && bit != 1) throw std::invalid_argument("run_chain_relay: bit must be 0 or 1");
  if (sites < 1) throw std::invalid_argument("run_chain_relay: sites must be >= 1");
  const int qubits = 2 * sites;
  if (qubits > kMaxDenseQubits) {
    throw std::invalid_argument("run_chain_relay: chain exceeds the 14-qubit simulator limit");
  }
  std::vector<int> bits(static_cast<std::size_t>(qubits), 0);
  bits[0] = bit;
  PureState state = basis_state(bits);
  const int hop_count = 2 * sites - 1;
  const double hop_window = cfg.delta_t / 2.0;
  for (int hop = 0; hop < hop_count; ++hop) {
    const SwapHamiltonian h(BlockSwap(RegisterLayout({hop}, {hop + 1})), hop_window, cfg.hbar);
    state = evolve_swap_hamiltonian(state, h, hop_window);
  }
  std::vector<int> target_bits(static_cast<std::size_t>(qubits), 0);
  target_bits[static_cast<std::size_t>(qubits - 1)] = bit;
  const double per_hop_energy =
      swap_energy_closed_form(bit == 0 ? 1.0 : 0.0, hop_window, cfg.hbar);

  ChainReport report;
  report.sites = sites;
  report.hop_count = hop_count;
  report.latency = hop_count * hop_window;
  report.per_hop_energy = per_hop_energy;
  report.average_power = per_hop_energy / hop_window;
  report.pipelined_rate = 1.0 / cfg.delta_t;
  report.final_fidelity = std::norm(inner(basis_state(target_bits), state));
  return report;
}

/// Power the pipelined relay consumes to sustain a given rate, averaged over
/// uniform message bits (a 1 is relayed half the time): pi hbar rate^2 / 2,
/// twice the single-channel minimum for the same rate. The fixed-power rate
/// deficit is therefore sqrt(2).
inline double chain_power_for_rate(double rate, double hbar) {
  if (!(rate > 0.0)) throw std::invalid_argument("chain_power_for_rate: rate must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("chain_power_for_rate: hbar must be > 0");
  return std::numbers::pi * hbar * rate * rate / 2.0;
}

/// Rate the pipelined relay sustains at a given power budget with uniform
/// message bits: sqrt(2 P / (pi hbar)).
inline double chain_rate_for_power(double power, double hbar) {
  if (!(power > 0.0)) throw std::invalid_argument("chain_rate_for_power: power must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("chain_rate_for_power: hbar must be > 0");
  return std::sqrt(2.0 * power / (std::numbers::pi * hbar));
}

/// Propagates one bit down an always-on chain of nearest-neighbor swap
/// couplings pi*hbar/(2 delta_t) and records the arrival fidelity
/// |<0...0,b|psi(t)>|^2 on a uniform time grid, together with norm and
/// excitation-number conservation diagnostics.
inline SpinWaveCurve run_spin_wave(int bit, int sites, const ChannelConfig& cfg, double t_max,
                                   int grid) {
  detail::check_config(cfg);
  if (bit != 0 && bit != 1) throw std::invalid_argument("run_spin_wave: bit must be 0 or 1");
  if (sites < 2 || sites > 10) {
    throw std::invalid_argument("run_spin_wave: sites must be in [2, 10]");
  }
  if (!(t_max > 0.0)) throw std::invalid_argument("run_spin_wave: t_max must be > 0");
  if (grid < 2) throw std::invalid_argument("run_spin_wave: grid must be >= 2");

  const double coupling = std::numbers::pi * cfg.hbar / (2.0 * cfg.delta_t);
  const SpectralDecomposition spectral(spin_chain_hamiltonian(sites, coupling));
  std::vector<int> bits(static_cast<std::size_t>(sites), 0);
  bits[0] = bit;
  const PureState initial = basis_state(bits);
  std::vector<int> target_bits(static_cast<std::size_t>(sites), 0);
  target_bits[static_cast<std::size_t>(sites - 1)] = bit;
  const PureState target = basis_state(target_bits);

  auto excitation_number = [&](const PureState& psi) {
    double count = 0.0;
    for (std::size_t idx = 0; idx < psi.dimension(); ++idx) {
      count += std::norm(psi.amplitude(idx)) * static_cast<double>(std::popcount(idx));
    }
    return count;
  };
  const double initial_excitation = excitation_number(initial);

  SpinWaveCurve curve;
  curve.coupling = coupling;
  curve.times.reserve(static_cast<std::size_t>(grid));
  curve.fidelities.reserve(static_cast<std::size_t>(grid));
  for (int k = 0; k < grid; ++k) {
    const double t = t_max * (static_cast<double>(k) / (grid - 1));
    const PureState psi = spectral.evolve(initial, t, cfg.hbar);
    const double fidelity = std::norm(inner(target, psi));
    curve.times.push_back(t);
    curve.fidelities.push_back(fidelity);
    curve.max_norm_error =
        std::max(curve.max_norm_error, std::abs(psi.amplitudes().norm() - 1.0));
    curve.max_excitation_drift = std::max(curve.max_excitation_drift,
                                          std::abs(excitation_number(psi) - initial_excitation));
    if (fidelity > curve.peak_fidelity) {
      curve.peak_fidelity = fidelity;
      curve.peak_time = t;
    }
  }
  return curve;
}

/// Repeat-until-success transmission with midpoint dephasing. Each attempt
/// evolves |b,0> halfway, collapses onto the branch pair
/// {|b,0...0>, |0...0,b>} with probability p (Born weights), completes the
/// window, and measures B's register. Outcome b is success, 0...0 means wait
/// and retry; anything else is counted as corrupted and ends the trial.
/// After a 0...0 outcome the post-measurement state is |b,0> up to a global
/// phase, so each attempt legitimately restarts from the prepared state.
inline DecoherenceReport run_decoherence_trials(const std::vector<int>& bits,
                                                const ChannelConfig& cfg,
                                                double dephase_probability, std::int64_t trials,
                                                std::uint64_t seed) {
  detail::check_config(cfg);
  detail::check_bits(bits, cfg.m);
  if (std::all_of(bits.begin(), bits.end(), [](int b) { return b == 0; })) {
    throw std::invalid_argument(
        "run_decoherence_trials: the all-zero message is excluded from the alphabet");
  }
  if (dephase_probability < 0.0 || dephase_probability > 1.0) {
    throw std::invalid_argument("run_decoherence_trials: dephase probability must be in [0, 1]");
  }
  if (trials < 1) throw std::invalid_argument("run_decoherence_trials: trials must be >= 1");

  const int m = cfg.m;
  const std::vector<int> zeros(static_cast<std::size_t>(m), 0);
  const SwapHamiltonian hamiltonian(BlockSwap(RegisterLayout::contiguous(m)), cfg.delta_t,
                                    cfg.hbar);
  const PureState start = basis_state(detail::joint_bits(bits, zeros));
  const PureState swapped = basis_state(detail::joint_bits(zeros, bits));
  std::size_t message_index = 0;
  for (int b : bits) message_index = (message_index << 1) | static_cast<std::size_t>(b);

  const std::size_t b_dim = dimension_of(m);
  auto measure_b_register = [&](const PureState& psi, double u) {
    // Marginal over A of the computational-basis distribution on B.
    std::vector<double> probs(b_dim, 0.0);
    for (std::size_t idx = 0; idx < psi.dimension(); ++idx) {
      probs[idx & (b_dim - 1)] += std::norm(psi.amplitude(idx));
    }
    double cumulative = 0.0;
    std::size_t most_probable = 0;
    for (std::size_t y = 0; y < b_dim; ++y) {
      cumulative += probs[y];
      if (u < cumulative) return y;
      if (probs[y] > probs[most_probable]) most_probable = y;
    }
    return most_probable;  // u fell into the rounding sliver past the last bucket
  };

  struct Partial {
    std::int64_t attempts_total = 0;
    std::int64_t corrupted = 0;
    std::vector<std::int64_t> histogram;
  };
  const auto partials = map_index_chunks<Partial>(
      trials, 1024, [&](std::int64_t begin, std::int64_t end) {
        Partial part;
        for (std::int64_t trial = begin; trial < end; ++trial) {
          std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
          std::int64_t attempts = 0;
          for (;;) {
            ++attempts;
            PureState psi = evolve_swap_hamiltonian(start, hamiltonian, cfg.delta_t / 2.0);
            if (detail::uniform01(rng) < dephase_probability) {
              const double weight_front = std::norm(inner(start, psi));
              const double weight_back = std::norm(inner(swapped, psi));
              const double u = detail::uniform01(rng) * (weight_front + weight_back);
              psi = (u < weight_front) ? start : swapped;
            }
            psi = evolve_swap_hamiltonian(psi, hamiltonian, cfg.delta_t / 2.0);
            const std::size_t outcome = measure_b_register(psi, detail::uniform01(rng));
            if (outcome == message_index) {
              break;
            }
            if (outcome != 0) {
              ++part.corrupted;
              break;
            }
          }
          part.attempts_total += attempts;
          if (part.histogram.size() < static_cast<std::size_t>(attempts)) {
            part.histogram.resize(static_cast<std::size_t>(attempts), 0);
          }
          ++part.histogram[static_cast<std::size_t>(attempts - 1)];
        }
        return part;
      });

  DecoherenceReport report;
  report.trials = trials;
  report.seed = seed;
  std::int64_t attempts_total = 0;
  for (const Partial& part : partials) {
    attempts_total += part.attempts_total;
    report.corrupted_count += part.corrupted;
    if (report.attempt_histogram.size() < part.histogram.size()) {
      report.attempt_histogram.resize(part.histogram.size(), 0);
    }
    for (std::size_t k = 0; k < part.histogram.size(); ++k) {
      report.attempt_histogram[k] += part.histogram[k];
    }
  }
  report.mean_attempts = static_cast<double>(attempts_total) / static_cast<double>(trials);
  return report;
}

}  // namespace qchan
