#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qchan/common.hpp"
#include "qchan/statevec.hpp"

namespace qchan {

inline constexpr int kMaxDenseQubits = 14;

/// Partition of a register into two equally sized groups of qubits to be
/// exchanged.
class RegisterLayout {
 public:
  RegisterLayout(std::vector<int> register_a, std::vector<int> register_b)
      : register_a_(std::move(register_a)), register_b_(std::move(register_b)) {
    if (register_a_.empty() || register_a_.size() != register_b_.size()) {
      throw std::invalid_argument("RegisterLayout: registers must be nonempty and equally sized");
    }
    std::vector<int> all(register_a_);
    all.insert(all.end(), register_b_.begin(), register_b_.end());
    int max_index = 0;
    for (int q : all) {
      if (q < 0) throw std::invalid_argument("RegisterLayout: negative qubit index");
      max_index = std::max(max_index, q);
    }
    std::vector<bool> seen(static_cast<std::size_t>(max_index) + 1, false);
    for (int q : all) {
      if (seen[static_cast<std::size_t>(q)]) {
        throw std::invalid_argument("RegisterLayout: registers must be disjoint");
      }
      seen[static_cast<std::size_t>(q)] = true;
    }
    min_qubit_count_ = max_index + 1;
  }

  /// A = first m qubits, B = next m qubits.
  static RegisterLayout contiguous(int m) {
    if (m < 1) throw std::invalid_argument("RegisterLayout: m must be >= 1");
    std::vector<int> a(static_cast<std::size_t>(m)), b(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      a[static_cast<std::size_t>(i)] = i;
      b[static_cast<std::size_t>(i)] = m + i;
    }
    return RegisterLayout(std::move(a), std::move(b));
  }

  int pair_count() const { return static_cast<int>(register_a_.size()); }
  const std::vector<int>& register_a() const { return register_a_; }
  const std::vector<int>& register_b() const { return register_b_; }
  int min_qubit_count() const { return min_qubit_count_; }

 private:
  std::vector<int> register_a_;
  std::vector<int> register_b_;
  int min_qubit_count_;
};

/// The unitary involution exchanging register A with register B, kept as a
/// structural descriptor; applications are index permutations and never
/// materialize a matrix.
class BlockSwap {
 public:
  explicit BlockSwap(RegisterLayout layout) : layout_(std::move(layout)) {}

  const RegisterLayout& layout() const { return layout_; }

  /// Index with the A-bits and B-bits exchanged.
  std::size_t permute_index(std::size_t index, int qubit_count) const {
    for (int k = 0; k < layout_.pair_count(); ++k) {
      const int pa = bit_position(layout_.register_a()[static_cast<std::size_t>(k)], qubit_count);
      const int pb = bit_position(layout_.register_b()[static_cast<std::size_t>(k)], qubit_count);
      const std::size_t differ = ((index >> pa) ^ (index >> pb)) & std::size_t{1};
      index ^= (differ << pa) | (differ << pb);
    }
    return index;
  }

 private:
  RegisterLayout layout_;
};

namespace detail {

inline void check_layout(const BlockSwap& s, const PureState& psi, const char* what) {
  if (s.layout().min_qubit_count() > psi.qubit_count()) {
    throw std::invalid_argument(std::string(what) + ": layout does not fit the state");
  }
}

// Bit-position pairs (a, b) for each exchanged qubit pair of an n-qubit state.
inline std::vector<std::pair<int, int>> position_pairs(const BlockSwap& s, int qubit_count) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(s.layout().pair_count()));
  for (int k = 0; k < s.layout().pair_count(); ++k) {
    pairs.emplace_back(
        bit_position(s.layout().register_a()[static_cast<std::size_t>(k)], qubit_count),
        bit_position(s.layout().register_b()[static_cast<std::size_t>(k)], qubit_count));
  }
  return pairs;
}

inline std::size_t permute_with_pairs(std::size_t index,
                                      const std::vector<std::pair<int, int>>& pairs) {
  for (const auto& [pa, pb] : pairs) {
    const std::size_t differ = ((index >> pa) ^ (index >> pb)) & std::size_t{1};
    index ^= (differ << pa) | (differ << pb);
  }
  return index;
}

}  // namespace detail

/// S|psi>: amplitude at each basis index moves to the index with the A-bits
/// and B-bits exchanged.
inline PureState apply_block_swap(const PureState& psi, const BlockSwap& s) {
  detail::check_layout(s, psi, "apply_block_swap");
  const auto pairs = detail::position_pairs(s, psi.qubit_count());
  Eigen::VectorXcd out(psi.amplitudes().size());
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    out(static_cast<Eigen::Index>(i)) =
        psi.amplitudes()(static_cast<Eigen::Index>(detail::permute_with_pairs(i, pairs)));
  }
  return PureState(std::move(out));
}

/// e^{-i theta S}|psi> = cos(theta)|psi> - i sin(theta) S|psi>, using the
/// involution S^2 = 1. Cost is one pass over the amplitudes.
inline PureState evolve_swap(const PureState& psi, const BlockSwap& s, double theta) {
  detail::check_layout(s, psi, "evolve_swap");
  const auto pairs = detail::position_pairs(s, psi.qubit_count());
  const std::complex<double> c(std::cos(theta), 0.0);
  const std::complex<double> ms(0.0, -std::sin(theta));
  Eigen::VectorXcd out(psi.amplitudes().size());
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    const std::size_t j = detail::permute_with_pairs(i, pairs);
    out(static_cast<Eigen::Index>(i)) =
        c * psi.amplitudes()(static_cast<Eigen::Index>(i)) +
        ms * psi.amplitudes()(static_cast<Eigen::Index>(j));
  }
  return PureState(std::move(out));
}

/// Swap-generating Hamiltonian pi*hbar*(1 - S)/(2*delta_t): ground energy 0,
/// excited level pi*hbar/delta_t, completes a full exchange in time delta_t.
class SwapHamiltonian {
 public:
  SwapHamiltonian(BlockSwap swap, double delta_t, double hbar)
      : swap_(std::move(swap)), delta_t_(delta_t), hbar_(hbar) {
    if (!(delta_t_ > 0.0)) throw std::invalid_argument("SwapHamiltonian: delta_t must be > 0");
    if (!(hbar_ > 0.0)) throw std::invalid_argument("SwapHamiltonian: hbar must be > 0");
  }

  const BlockSwap& swap() const { return swap_; }
  double delta_t() const { return delta_t_; }
  double hbar() const { return hbar_; }

  /// The nonzero eigenvalue pi*hbar/delta_t.
  double excited_energy() const { return std::numbers::pi * hbar_ / delta_t_; }

 private:
  BlockSwap swap_;
  double delta_t_;
  double hbar_;
};

/// Exact evolution e^{-i H t / hbar} for the swap Hamiltonian. With
/// phi = pi*t/(2*delta_t) this is e^{-i phi} (cos(phi) + i sin(phi) S), so a
/// full window t = delta_t reproduces the plain swap with no residual phase.
inline PureState evolve_swap_hamiltonian(const PureState& psi, const SwapHamiltonian& h,
                                         double t) {
  if (t < 0.0) throw std::invalid_argument("evolve_swap_hamiltonian: t must be >= 0");
  detail::check_layout(h.swap(), psi, "evolve_swap_hamiltonian");
  const double phi = std::numbers::pi * t / (2.0 * h.delta_t());
  const std::complex<double> global = std::polar(1.0, -phi);
  const std::complex<double> c = global * std::cos(phi);
  const std::complex<double> is = global * std::complex<double>(0.0, std::sin(phi));
  const auto pairs = detail::position_pairs(h.swap(), psi.qubit_count());
  Eigen::VectorXcd out(psi.amplitudes().size());
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    const std::size_t j = detail::permute_with_pairs(i, pairs);
    out(static_cast<Eigen::Index>(i)) =
        c * psi.amplitudes()(static_cast<Eigen::Index>(i)) +
        is * psi.amplitudes()(static_cast<Eigen::Index>(j));
  }
  return PureState(std::move(out));
}

/// Explicit Hermitian matrix in energy units. Inputs with asymmetry below
/// 1e-10 are symmetrized to (H + H^dag)/2; anything worse is rejected.
class DenseHamiltonian {
 public:
  explicit DenseHamiltonian(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
      throw std::invalid_argument("DenseHamiltonian: matrix must be square");
    }
    qubit_count_ = detail::qubit_count_for_dimension(matrix_.rows(), "DenseHamiltonian");
    const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (asym > kMatrixTolerance) {
      throw std::invalid_argument("DenseHamiltonian: matrix is not Hermitian within 1e-10");
    }
    matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
  }

  int qubit_count() const { return qubit_count_; }
  std::size_t dimension() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXcd matrix_;
  int qubit_count_;
};

/// Eigendecomposition of a dense Hamiltonian, reusable across evolution
/// times. Eigenvalues are sorted ascending.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;

  explicit SpectralDecomposition(const DenseHamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("SpectralDecomposition: eigendecomposition failed");
    }
    eigenvalues = solver.eigenvalues();
    eigenvectors = solver.eigenvectors();
  }

  double ground_energy() const { return eigenvalues(0); }

  PureState evolve(const PureState& psi, double t, double hbar) const {
    if (t < 0.0) throw std::invalid_argument("SpectralDecomposition: t must be >= 0");
    if (!(hbar > 0.0)) throw std::invalid_argument("SpectralDecomposition: hbar must be > 0");
    if (psi.amplitudes().size() != eigenvectors.rows()) {
      throw std::invalid_argument("SpectralDecomposition: dimension mismatch");
    }
    Eigen::VectorXcd coeffs = eigenvectors.adjoint() * psi.amplitudes();
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      coeffs(k) *= std::polar(1.0, -eigenvalues(k) * t / hbar);
    }
    return PureState(eigenvectors * coeffs);
  }
};

/// e^{-i H t / hbar}|psi> via eigendecomposition.
inline PureState evolve_dense(const PureState& psi, const DenseHamiltonian& h, double t,
                              double hbar) {
  return SpectralDecomposition(h).evolve(psi, t, hbar);
}

/// The permutation matrix of S on a `total_qubits` register.
inline Eigen::MatrixXcd block_swap_matrix(const BlockSwap& s, int total_qubits) {
  if (total_qubits < s.layout().min_qubit_count()) {
    throw std::invalid_argument("block_swap_matrix: register too small for layout");
  }
  if (total_qubits > kMaxDenseQubits) {
    throw std::invalid_argument("block_swap_matrix: dimension too large");
  }
  const std::size_t dim = dimension_of(total_qubits);
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) {
    mat(static_cast<Eigen::Index>(s.permute_index(i, total_qubits)),
        static_cast<Eigen::Index>(i)) = 1.0;
  }
  return mat;
}

/// Materializes pi*hbar*(1 - S)/(2*delta_t) as an explicit matrix; this is
/// the cross-check oracle for the structured kernel, not the evolution path.
/// total_qubits = 0 means the smallest register the layout fits in.
inline DenseHamiltonian dense_matrix_of(const SwapHamiltonian& h, int total_qubits = 0) {
  const int n = total_qubits == 0 ? h.swap().layout().min_qubit_count() : total_qubits;
  const double scale = std::numbers::pi * h.hbar() / (2.0 * h.delta_t());
  const std::size_t dim = dimension_of(n);
  Eigen::MatrixXcd mat = scale * Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim),
                                                            static_cast<Eigen::Index>(dim));
  mat -= scale * block_swap_matrix(h.swap(), n);
  return DenseHamiltonian(std::move(mat));
}

/// Sum of nearest-neighbor two-qubit swap terms along a chain of sites, each
/// scaled by coupling_scale. Commutes with the total excitation number.
inline DenseHamiltonian spin_chain_hamiltonian(int sites, double coupling_scale) {
  if (sites < 2 || sites > kMaxDenseQubits) {
    throw std::invalid_argument("spin_chain_hamiltonian: sites must be in [2, 14]");
  }
  const std::size_t dim = dimension_of(sites);
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                static_cast<Eigen::Index>(dim));
  for (int k = 0; k + 1 < sites; ++k) {
    const BlockSwap term(RegisterLayout({k}, {k + 1}));
    for (std::size_t i = 0; i < dim; ++i) {
      mat(static_cast<Eigen::Index>(term.permute_index(i, sites)),
          static_cast<Eigen::Index>(i)) += coupling_scale;
    }
  }
  return DenseHamiltonian(std::move(mat));
}

}  // namespace qchan
