#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "qchan/operators.hpp"
#include "qchan/statevec.hpp"
#include "support.hpp"

using namespace qchan;
using Catch::Matchers::WithinAbs;
using std::complex;

namespace {

constexpr double kPi = std::numbers::pi;

double max_amplitude_diff(const PureState& a, const PureState& b) {
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff();
}

PureState joint_with_cleared_b(const PureState& message, int m) {
  return tensor(message, basis_state(std::vector<int>(static_cast<std::size_t>(m), 0)));
}

}  // namespace

TEST_CASE("RegisterLayout validation", "[operators]") {
  REQUIRE_THROWS_AS(RegisterLayout({0, 1}, {1, 2}), std::invalid_argument);
  REQUIRE_THROWS_AS(RegisterLayout({0}, {0}), std::invalid_argument);
  REQUIRE_THROWS_AS(RegisterLayout({0, 1}, {2}), std::invalid_argument);
  REQUIRE_THROWS_AS(RegisterLayout({-1}, {0}), std::invalid_argument);
  const RegisterLayout layout = RegisterLayout::contiguous(2);
  REQUIRE(layout.pair_count() == 2);
  REQUIRE(layout.min_qubit_count() == 4);
}

TEST_CASE("block swap permutes basis states", "[operators]") {
  const BlockSwap swap2(RegisterLayout::contiguous(1));
  const PureState swapped = apply_block_swap(basis_state(std::vector<int>{1, 0}), swap2);
  REQUIRE(swapped.amplitude(1) == complex<double>(1.0));

  // M=2: |10>_A |00>_B -> |00>_A |10>_B.
  const BlockSwap swap4(RegisterLayout::contiguous(2));
  const PureState out = apply_block_swap(basis_state(std::vector<int>{1, 0, 0, 0}), swap4);
  REQUIRE(out.amplitude(2) == complex<double>(1.0));

  // Interleaved layout: exchanging (q0,q1) and (q3,q2).
  const BlockSwap interleaved(RegisterLayout({0, 3}, {1, 2}));
  const PureState moved = apply_block_swap(basis_state(std::vector<int>{1, 0, 0, 0}), interleaved);
  REQUIRE(moved.amplitude(0b0100) == complex<double>(1.0));

  const PureState small = basis_state(std::vector<int>{1, 0});
  REQUIRE_THROWS_AS(apply_block_swap(small, swap4), std::invalid_argument);
}

TEST_CASE("block swap is an exact involution", "[operators]") {
  std::mt19937_64 engine(3);
  for (int m : {1, 2, 3}) {
    const BlockSwap swap(RegisterLayout::contiguous(m));
    for (int round = 0; round < 5; ++round) {
      const PureState psi = haar_random(2 * m, engine());
      const PureState back = apply_block_swap(apply_block_swap(psi, swap), swap);
      REQUIRE(back.amplitudes() == psi.amplitudes());
    }
  }
}

TEST_CASE("evolve_swap implements the cos/sin identity", "[operators]") {
  const BlockSwap swap(RegisterLayout::contiguous(1));
  const PureState ten = basis_state(std::vector<int>{1, 0});

  REQUIRE(evolve_swap(ten, swap, 0.0).amplitudes() == ten.amplitudes());

  const PureState quarter = evolve_swap(ten, swap, kPi / 2.0);
  REQUIRE_THAT(std::abs(quarter.amplitude(1) - complex<double>(0.0, -1.0)), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(std::abs(quarter.amplitude(2)), WithinAbs(0.0, 1e-12));

  const PureState flipped = evolve_swap(ten, swap, kPi);
  REQUIRE_THAT(max_amplitude_diff(flipped, ten), WithinAbs(2.0, 1e-12));  // -psi vs psi
  REQUIRE_THAT(std::abs(flipped.amplitude(2) + 1.0), WithinAbs(0.0, 1e-12));
}

TEST_CASE("evolve_swap agrees with the dense propagator", "[operators]") {
  std::mt19937_64 engine(17);
  for (int m : {1, 2, 3, 4}) {
    const BlockSwap swap(RegisterLayout::contiguous(m));
    const DenseHamiltonian s_matrix{block_swap_matrix(swap, 2 * m)};
    const SpectralDecomposition spectral(s_matrix);
    for (int round = 0; round < 100; ++round) {
      const PureState psi = haar_random(2 * m, engine());
      const double theta =
          2.0 * kPi * static_cast<double>(engine() >> 11) * 0x1.0p-53;
      const PureState direct = evolve_swap(psi, swap, theta);
      const PureState dense = spectral.evolve(psi, theta, 1.0);
      REQUIRE(max_amplitude_diff(direct, dense) < 1e-10);
    }
  }
}

TEST_CASE("swap Hamiltonian evolution: full window is the exact swap", "[operators]") {
  const SwapHamiltonian h(BlockSwap(RegisterLayout::contiguous(2)), 1.0, 1.0);
  const PureState psi = joint_with_cleared_b(haar_random(2, 99), 2);
  const PureState swapped = apply_block_swap(psi, h.swap());

  REQUIRE(max_amplitude_diff(evolve_swap_hamiltonian(psi, h, 1.0), swapped) < 1e-12);
  REQUIRE(evolve_swap_hamiltonian(psi, h, 0.0).amplitudes() == psi.amplitudes());
  REQUIRE(max_amplitude_diff(evolve_swap_hamiltonian(psi, h, 2.0), psi) < 1e-10);
  REQUIRE_THROWS_AS(evolve_swap_hamiltonian(psi, h, -0.5), std::invalid_argument);
}

TEST_CASE("swap Hamiltonian midpoint matches the closed-form superposition", "[operators]") {
  const SwapHamiltonian h(BlockSwap(RegisterLayout::contiguous(1)), 2.0, 1.0);
  const PureState mid = evolve_swap_hamiltonian(basis_state(std::vector<int>{1, 0}), h, 1.0);
  const complex<double> pref = std::polar(1.0 / std::sqrt(2.0), -kPi / 4.0);
  REQUIRE_THAT(std::abs(mid.amplitude(2) - pref), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(std::abs(mid.amplitude(1) - pref * complex<double>(0.0, 1.0)),
               WithinAbs(0.0, 1e-12));
}

TEST_CASE("dense_matrix_of reproduces the swap generator", "[operators]") {
  const SwapHamiltonian h(BlockSwap(RegisterLayout::contiguous(1)), 1.0, 1.0);
  const DenseHamiltonian dense = dense_matrix_of(h);

  REQUIRE((dense.matrix() - dense.matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense.matrix(), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd evals = solver.eigenvalues();
  REQUIRE_THAT(evals(0), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(evals(1), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(evals(2), WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(evals(3), WithinAbs(kPi, 1e-12));

  std::mt19937_64 engine(5);
  for (int m : {1, 2}) {
    const SwapHamiltonian hm(BlockSwap(RegisterLayout::contiguous(m)), 0.7, 1.3);
    const SpectralDecomposition spectral(dense_matrix_of(hm));
    for (int round = 0; round < 10; ++round) {
      const PureState psi = haar_random(2 * m, engine());
      const double t = 1.4 * static_cast<double>(engine() >> 11) * 0x1.0p-53;
      REQUIRE(max_amplitude_diff(spectral.evolve(psi, t, 1.3),
                                 evolve_swap_hamiltonian(psi, hm, t)) < 1e-10);
    }
  }
}

TEST_CASE("evolve_dense basics", "[operators]") {
  const DenseHamiltonian zero{Eigen::MatrixXcd::Zero(4, 4)};
  const PureState psi = haar_random(2, 31);
  REQUIRE(max_amplitude_diff(evolve_dense(psi, zero, 2.5, 1.0), psi) < 1e-12);

  const DenseHamiltonian random_h{qchan_test::random_hermitian(8, 77)};
  const PureState evolved = evolve_dense(haar_random(3, 32), random_h, 3.0, 0.7);
  REQUIRE_THAT(evolved.amplitudes().norm(), WithinAbs(1.0, 1e-10));

  Eigen::MatrixXcd skew = Eigen::MatrixXcd::Zero(2, 2);
  skew(0, 1) = 1.0;
  REQUIRE_THROWS_AS(DenseHamiltonian{skew}, std::invalid_argument);

  Eigen::MatrixXcd nearly = qchan_test::random_hermitian(2, 1);
  nearly(0, 1) += complex<double>(0.0, 1e-12);
  REQUIRE_NOTHROW(DenseHamiltonian{nearly});
}

TEST_CASE("spin chain: two sites reduce to a plain swap", "[operators]") {
  const double coupling = 0.8;
  const DenseHamiltonian h = spin_chain_hamiltonian(2, coupling);
  const double transfer_time = kPi * 1.0 / (2.0 * coupling);
  const PureState out = evolve_dense(basis_state(std::vector<int>{1, 0}), h, transfer_time, 1.0);
  REQUIRE_THAT(std::norm(out.amplitude(1)), WithinAbs(1.0, 1e-10));
}

TEST_CASE("spin chain conserves excitation number", "[operators]") {
  auto excitation = [](const PureState& psi) {
    double total = 0.0;
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
      total += std::norm(psi.amplitude(i)) * static_cast<double>(std::popcount(i));
    }
    return total;
  };
  for (int sites : {3, 4}) {
    const DenseHamiltonian h = spin_chain_hamiltonian(sites, 1.1);
    // Generators never mix Hamming-weight sectors.
    for (Eigen::Index r = 0; r < h.matrix().rows(); ++r) {
      for (Eigen::Index c = 0; c < h.matrix().cols(); ++c) {
        if (std::popcount(static_cast<std::size_t>(r)) !=
            std::popcount(static_cast<std::size_t>(c))) {
          REQUIRE(std::abs(h.matrix()(r, c)) == 0.0);
        }
      }
    }
    const SpectralDecomposition spectral(h);
    const PureState psi = haar_random(sites, 400 + sites);
    const double reference = excitation(psi);
    for (double t : {0.3, 1.7, 4.9}) {
      REQUIRE_THAT(excitation(spectral.evolve(psi, t, 1.0)), WithinAbs(reference, 1e-9));
    }
  }
}

TEST_CASE("spin chain matrix matches an explicit construction", "[operators]") {
  // Independent oracle: walk the three-site basis by hand.
  const double g = 1.0;
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(8, 8);
  auto swap_bits = [](std::size_t idx, int a, int b) {
    const std::size_t pa = 2U - static_cast<std::size_t>(a);  // big-endian, 3 qubits
    const std::size_t pb = 2U - static_cast<std::size_t>(b);
    const std::size_t ba = (idx >> pa) & 1U;
    const std::size_t bb = (idx >> pb) & 1U;
    idx &= ~((std::size_t{1} << pa) | (std::size_t{1} << pb));
    idx |= (bb << pa) | (ba << pb);
    return idx;
  };
  for (std::size_t col = 0; col < 8; ++col) {
    expected(static_cast<Eigen::Index>(swap_bits(col, 0, 1)), static_cast<Eigen::Index>(col)) += g;
    expected(static_cast<Eigen::Index>(swap_bits(col, 1, 2)), static_cast<Eigen::Index>(col)) += g;
  }
  const DenseHamiltonian h = spin_chain_hamiltonian(3, g);
  REQUIRE((h.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);

  // Each swap term contributes exactly one unit per row: row sums are 2g.
  for (Eigen::Index r = 0; r < 8; ++r) {
    REQUIRE_THAT(h.matrix().row(r).sum().real(), WithinAbs(2.0 * g, 1e-12));
  }

  REQUIRE_THROWS_AS(spin_chain_hamiltonian(1, 1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(spin_chain_hamiltonian(15, 1.0), std::invalid_argument);
}
