#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchan/common.hpp"
#include "qchan/operators.hpp"
#include "qchan/statevec.hpp"

namespace qchan {

inline constexpr double kOrthogonalityThreshold = 1e-8;
inline constexpr double kExpectationImagTolerance = 1e-8;

/// Energy bookkeeping for one active window, under the convention
/// power = mean energy above ground / window duration.
struct EnergyAccount {
  double mean_energy = 0.0;
  double ground_energy = 0.0;
  double duration = 0.0;
  double power = 0.0;

  static EnergyAccount over_window(double mean_energy, double ground_energy, double duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("EnergyAccount: duration must be > 0");
    if (mean_energy < ground_energy - 1e-9) {
      throw std::invalid_argument("EnergyAccount: mean energy below ground energy");
    }
    return {mean_energy, ground_energy, duration, mean_energy / duration};
  }
};

namespace detail {

inline double real_expectation(std::complex<double> value, const char* what) {
  if (std::abs(value.imag()) > kExpectationImagTolerance) {
    throw std::runtime_error(std::string(what) + ": expectation has a large imaginary part");
  }
  return value.real();
}

}  // namespace detail

/// <psi| S~ |psi>. Uses the permutation structure; no matrix involved.
inline double expectation_energy(const PureState& psi, const SwapHamiltonian& h) {
  const std::complex<double> swap_overlap = inner(psi, apply_block_swap(psi, h.swap()));
  const double scale = std::numbers::pi * h.hbar() / (2.0 * h.delta_t());
  return detail::real_expectation(scale * (1.0 - swap_overlap), "expectation_energy");
}

/// <psi| H |psi> for an explicit Hermitian matrix.
inline double expectation_energy(const PureState& psi, const DenseHamiltonian& h) {
  if (psi.amplitudes().size() != h.matrix().rows()) {
    throw std::invalid_argument("expectation_energy: dimension mismatch");
  }
  const std::complex<double> value =
      psi.amplitudes().dot(h.matrix() * psi.amplitudes());
  return detail::real_expectation(value, "expectation_energy");
}

/// Mean energy of the swap transfer: pi*hbar*(1 - |<0|psi>|^2)/(2*delta_t).
inline double swap_energy_closed_form(double overlap_sq, double delta_t, double hbar) {
  if (overlap_sq < 0.0 || overlap_sq > 1.0) {
    throw std::invalid_argument("swap_energy_closed_form: overlap_sq must lie in [0, 1]");
  }
  if (!(delta_t > 0.0)) throw std::invalid_argument("swap_energy_closed_form: delta_t must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("swap_energy_closed_form: hbar must be > 0");
  return std::numbers::pi * hbar * (1.0 - overlap_sq) / (2.0 * delta_t);
}

/// Haar average of |<0...0|psi>|^2 over m qubits, exactly 2^-m.
inline double average_overlap(int m) {
  if (m < 1) throw std::invalid_argument("average_overlap: m must be >= 1");
  return std::ldexp(1.0, -m);
}

struct OverlapEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::int64_t samples = 0;
};

/// Monte Carlo estimate of the Haar-average overlap. Sample i draws from its
/// own generator seeded with derive_seed(seed, i); chunks are accumulated in
/// fixed order, so the estimate does not depend on the worker count.
inline OverlapEstimate average_overlap_monte_carlo(int m, std::int64_t samples,
                                                   std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("average_overlap_monte_carlo: m must be >= 1");
  if (samples < 1) throw std::invalid_argument("average_overlap_monte_carlo: samples must be >= 1");
  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  const auto partials = map_index_chunks<Partial>(
      samples, 4096, [m, seed](std::int64_t begin, std::int64_t end) {
        Partial p;
        for (std::int64_t i = begin; i < end; ++i) {
          const PureState psi = haar_random(m, derive_seed(seed, static_cast<std::uint64_t>(i)));
          const double overlap_sq = std::norm(psi.amplitude(0));
          p.sum += overlap_sq;
          p.sum_sq += overlap_sq * overlap_sq;
        }
        return p;
      });
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const Partial& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double variance = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(variance / n), samples};
}

/// Time for |psi> to reach a state orthogonal to itself under H, or absent
/// if the squared overlap |<psi|psi(t)>|^2 never falls below 1e-8 on
/// [0, t_max]. The survival curve is scanned on a uniform grid; each local
/// minimum is refined by interval bisection to 1e-10 relative width, and the
/// first refined minimum that dips below the threshold is the detected
/// orthogonality point. (The threshold decides detection; the minimum
/// locates the event.)
inline std::optional<double> orthogonality_time(const PureState& psi, const DenseHamiltonian& h,
                                                double hbar, double t_max, int grid) {
  if (grid < 100) throw std::invalid_argument("orthogonality_time: grid must be >= 100");
  if (!(t_max > 0.0)) throw std::invalid_argument("orthogonality_time: t_max must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("orthogonality_time: hbar must be > 0");
  const SpectralDecomposition spectral(h);
  if (psi.amplitudes().size() != spectral.eigenvectors.rows()) {
    throw std::invalid_argument("orthogonality_time: dimension mismatch");
  }
  const Eigen::VectorXcd coeffs = spectral.eigenvectors.adjoint() * psi.amplitudes();
  const Eigen::VectorXd weights = coeffs.cwiseAbs2();

  auto survival = [&](double t) {
    std::complex<double> overlap = 0.0;
    for (Eigen::Index k = 0; k < weights.size(); ++k) {
      overlap += weights(k) * std::polar(1.0, -spectral.eigenvalues(k) * t / hbar);
    }
    return std::norm(overlap);
  };

  std::vector<double> values(static_cast<std::size_t>(grid));
  auto grid_time = [&](int k) { return t_max * (static_cast<double>(k) / (grid - 1)); };
  for (int k = 0; k < grid; ++k) values[static_cast<std::size_t>(k)] = survival(grid_time(k));

  auto refine = [&](double lo, double hi) {
    while (hi - lo > 1e-10 * hi) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (survival(m1) < survival(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    return 0.5 * (lo + hi);
  };

  for (int k = 1; k < grid; ++k) {
    const double fk = values[static_cast<std::size_t>(k)];
    const bool interior_min =
        k + 1 < grid && fk <= values[static_cast<std::size_t>(k - 1)] &&
        fk <= values[static_cast<std::size_t>(k + 1)];
    const bool trailing_min = k + 1 == grid && fk <= values[static_cast<std::size_t>(k - 1)];
    if (!interior_min && !trailing_min) continue;
    const double lo = grid_time(k - 1);
    const double hi = grid_time(std::min(k + 1, grid - 1));
    const double t_star = refine(lo, hi);
    if (survival(t_star) < kOrthogonalityThreshold) return t_star;
  }
  return std::nullopt;
}

/// Margolus-Levitin minimum orthogonality time pi*hbar/(2(E - E0)); infinity
/// when the energies coincide within 1e-12.
inline double ml_bound(double mean_energy, double ground_energy, double hbar) {
  if (!(hbar > 0.0)) throw std::invalid_argument("ml_bound: hbar must be > 0");
  const double gap = mean_energy - ground_energy;
  if (gap < -1e-12) throw std::invalid_argument("ml_bound: mean energy below ground energy");
  if (gap <= 1e-12) return std::numeric_limits<double>::infinity();
  return std::numbers::pi * hbar / (2.0 * gap);
}

}  // namespace qchan
