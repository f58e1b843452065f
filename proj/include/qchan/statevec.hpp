#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qchan/common.hpp"

namespace qchan {

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kMatrixTolerance = 1e-10;
inline constexpr double kEntropyEigenvalueFloor = 1e-12;

namespace detail {

inline int qubit_count_for_dimension(Eigen::Index dim, const char* what) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::size_t>(dim))) {
    throw std::invalid_argument(std::string(what) + ": dimension must be a power of two, >= 2");
  }
  return std::countr_zero(static_cast<std::size_t>(dim));
}

inline void check_subset(std::span<const int> subset, int qubit_count, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(qubit_count), false);
  for (int q : subset) {
    if (q < 0 || q >= qubit_count) {
      throw std::invalid_argument(std::string(what) + ": qubit index out of range");
    }
    if (seen[static_cast<std::size_t>(q)]) {
      throw std::invalid_argument(std::string(what) + ": duplicate qubit index");
    }
    seen[static_cast<std::size_t>(q)] = true;
  }
}

}  // namespace detail

/// Normalized pure state of an n-qubit register. Immutable after
/// construction; states failing the unit-norm check are rejected rather than
/// renormalized.
class PureState {
 public:
  explicit PureState(Eigen::VectorXcd amplitudes) : amplitudes_(std::move(amplitudes)) {
    qubit_count_ = detail::qubit_count_for_dimension(amplitudes_.size(), "PureState");
    const double norm_sq = amplitudes_.squaredNorm();
    if (std::abs(norm_sq - 1.0) > kNormTolerance) {
      throw std::invalid_argument("PureState: squared norm deviates from 1 beyond 1e-10");
    }
  }

  int qubit_count() const { return qubit_count_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  std::complex<double> amplitude(std::size_t index) const {
    return amplitudes_(static_cast<Eigen::Index>(index));
  }

 private:
  Eigen::VectorXcd amplitudes_;
  int qubit_count_;
};

/// Computational basis state |b0 b1 ... b_{n-1}>.
inline PureState basis_state(std::span<const int> bits) {
  if (bits.empty()) throw std::invalid_argument("basis_state: empty bit sequence");
  std::size_t index = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("basis_state: bits must be 0 or 1");
    index = (index << 1) | static_cast<std::size_t>(b);
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(
      static_cast<Eigen::Index>(dimension_of(static_cast<int>(bits.size()))));
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(std::move(amps));
}

inline PureState basis_state(const std::vector<int>& bits) {
  return basis_state(std::span<const int>(bits));
}

/// <a|b> = sum_i conj(a_i) b_i.
inline std::complex<double> inner(const PureState& a, const PureState& b) {
  if (a.qubit_count() != b.qubit_count()) {
    throw std::invalid_argument("inner: qubit counts differ");
  }
  return a.amplitudes().dot(b.amplitudes());
}

/// Kronecker product; a's qubits become the leading (most significant) part
/// of the joint register.
inline PureState tensor(const PureState& a, const PureState& b) {
  const Eigen::Index da = a.amplitudes().size();
  const Eigen::Index db = b.amplitudes().size();
  Eigen::VectorXcd out(da * db);
  for (Eigen::Index ia = 0; ia < da; ++ia) {
    out.segment(ia * db, db) = a.amplitudes()(ia) * b.amplitudes();
  }
  return PureState(std::move(out));
}

/// Density operator: Hermitian, unit trace, positive semidefinite (all
/// checked at construction to 1e-10).
class MixedState {
 public:
  explicit MixedState(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
      throw std::invalid_argument("MixedState: matrix must be square");
    }
    qubit_count_ = detail::qubit_count_for_dimension(matrix_.rows(), "MixedState");
    const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kMatrixTolerance) {
      throw std::invalid_argument("MixedState: matrix is not Hermitian within 1e-10");
    }
    if (std::abs(matrix_.trace().real() - 1.0) > kMatrixTolerance ||
        std::abs(matrix_.trace().imag()) > kMatrixTolerance) {
      throw std::invalid_argument("MixedState: trace deviates from 1 beyond 1e-10");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("MixedState: eigenvalue check failed to converge");
    }
    if (solver.eigenvalues().minCoeff() < -kMatrixTolerance) {
      throw std::invalid_argument("MixedState: negative eigenvalue beyond -1e-10");
    }
  }

  static MixedState from_pure(const PureState& psi) {
    return MixedState(psi.amplitudes() * psi.amplitudes().adjoint());
  }

  int qubit_count() const { return qubit_count_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXcd matrix_;
  int qubit_count_;
};

namespace detail {

// Sorted kept indices -> (kept bit positions, traced-out bit positions),
// both ordered most-significant first.
inline std::pair<std::vector<int>, std::vector<int>> split_positions(std::span<const int> keep,
                                                                     int qubit_count) {
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  std::vector<bool> is_kept(static_cast<std::size_t>(qubit_count), false);
  for (int q : kept) is_kept[static_cast<std::size_t>(q)] = true;
  std::vector<int> kept_pos, env_pos;
  for (int q = 0; q < qubit_count; ++q) {
    (is_kept[static_cast<std::size_t>(q)] ? kept_pos : env_pos)
        .push_back(bit_position(q, qubit_count));
  }
  return {kept_pos, env_pos};
}

}  // namespace detail

/// Reduced density operator of a pure state on the kept qubits (kept qubits
/// keep their original relative order).
inline MixedState reduced_density(const PureState& psi, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("reduced_density: empty keep set");
  detail::check_subset(keep, psi.qubit_count(), "reduced_density");
  const auto [kept_pos, env_pos] = detail::split_positions(keep, psi.qubit_count());
  const std::size_t dk = dimension_of(static_cast<int>(kept_pos.size()));
  const std::size_t de = std::size_t{1} << env_pos.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                static_cast<Eigen::Index>(dk));
  for (std::size_t e = 0; e < de; ++e) {
    const std::size_t env_part = scatter_bits(e, env_pos);
    for (std::size_t i = 0; i < dk; ++i) {
      const auto ai = psi.amplitude(scatter_bits(i, kept_pos) | env_part);
      if (ai == std::complex<double>(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < dk; ++j) {
        rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            ai * std::conj(psi.amplitude(scatter_bits(j, kept_pos) | env_part));
      }
    }
  }
  return MixedState(std::move(rho));
}

/// Partial trace over the complement of `keep`.
inline MixedState partial_trace(const MixedState& rho, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  detail::check_subset(keep, rho.qubit_count(), "partial_trace");
  const auto [kept_pos, env_pos] = detail::split_positions(keep, rho.qubit_count());
  const std::size_t dk = dimension_of(static_cast<int>(kept_pos.size()));
  const std::size_t de = std::size_t{1} << env_pos.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                static_cast<Eigen::Index>(dk));
  for (std::size_t i = 0; i < dk; ++i) {
    const std::size_t row_part = scatter_bits(i, kept_pos);
    for (std::size_t j = 0; j < dk; ++j) {
      const std::size_t col_part = scatter_bits(j, kept_pos);
      std::complex<double> sum = 0.0;
      for (std::size_t e = 0; e < de; ++e) {
        const std::size_t env_part = scatter_bits(e, env_pos);
        sum += rho.matrix()(static_cast<Eigen::Index>(row_part | env_part),
                            static_cast<Eigen::Index>(col_part | env_part));
      }
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sum;
    }
  }
  return MixedState(std::move(out));
}

/// Von Neumann entropy of the reduced state on `cut`, in bits. Eigenvalues
/// below 1e-12 contribute zero.
inline double entanglement_entropy(const PureState& psi, std::span<const int> cut) {
  if (cut.empty() || static_cast<int>(cut.size()) >= psi.qubit_count()) {
    throw std::invalid_argument("entanglement_entropy: cut must be a nonempty proper subset");
  }
  const MixedState reduced = reduced_density(psi, cut);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(reduced.matrix(),
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("entanglement_entropy: eigendecomposition failed");
  }
  double entropy = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = solver.eigenvalues()(k);
    if (lambda < kEntropyEigenvalueFloor) continue;
    entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

inline double entanglement_entropy(const PureState& psi, const std::vector<int>& cut) {
  return entanglement_entropy(psi, std::span<const int>(cut));
}

/// Haar-random pure state: i.i.d. standard complex Gaussian amplitudes,
/// normalized. Deterministic for a fixed seed.
inline PureState haar_random(int qubit_count, std::uint64_t seed) {
  if (qubit_count < 1) throw std::invalid_argument("haar_random: need at least one qubit");
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(dimension_of(qubit_count)));
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    const double re = gauss(engine);
    const double im = gauss(engine);
    amps(i) = std::complex<double>(re, im);
  }
  amps /= amps.norm();
  return PureState(std::move(amps));
}

}  // namespace qchan
