#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qchan {

// Basis indices are register-ordered: qubit 0 is the most significant bit,
// so |b0 b1 ... b_{n-1}> sits at index sum_k b_k 2^{n-1-k}.
inline int bit_position(int qubit, int qubit_count) { return qubit_count - 1 - qubit; }

inline int bit_at(std::size_t index, int qubit, int qubit_count) {
  return static_cast<int>((index >> bit_position(qubit, qubit_count)) & 1U);
}

inline std::size_t dimension_of(int qubit_count) {
  if (qubit_count < 0 || qubit_count > 30) {
    throw std::invalid_argument("dimension_of: qubit count out of range");
  }
  return std::size_t{1} << qubit_count;
}

// Places the bits of `value` at the given index bit positions; positions[0]
// receives the most significant bit of value.
inline std::size_t scatter_bits(std::size_t value, std::span<const int> positions) {
  std::size_t out = 0;
  const int k = static_cast<int>(positions.size());
  for (int r = 0; r < k; ++r) {
    out |= ((value >> (k - 1 - r)) & std::size_t{1}) << positions[static_cast<std::size_t>(r)];
  }
  return out;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for element `index` of a run seeded with `seed`. Every Monte
// Carlo element draws from its own generator, so aggregate results do not
// depend on how elements are distributed over workers.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701ULL));
}

// Evaluates fn(begin, end) over fixed-size index chunks, possibly on several
// threads, and returns the per-chunk results in chunk order. The chunk layout
// is fixed, so folding the results is independent of the worker count.
template <typename Partial, typename Fn>
std::vector<Partial> map_index_chunks(std::int64_t count, std::int64_t chunk_size, Fn fn) {
  if (count < 0 || chunk_size <= 0) {
    throw std::invalid_argument("map_index_chunks: invalid sizes");
  }
  const std::int64_t chunks = (count + chunk_size - 1) / chunk_size;
  std::vector<Partial> partials(static_cast<std::size_t>(chunks));
  if (chunks == 0) return partials;

  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers =
      std::max(1U, std::min<unsigned>(hw == 0 ? 1U : hw, static_cast<unsigned>(chunks)));
  auto run = [&](unsigned w) {
    for (std::int64_t c = w; c < chunks; c += workers) {
      const std::int64_t begin = c * chunk_size;
      partials[static_cast<std::size_t>(c)] = fn(begin, std::min(count, begin + chunk_size));
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  return partials;
}

}  // namespace qchan
