#pragma once

#include <array>
#include <cstdint>

namespace contextsim::rng {

// Philox 4x32-10 block function (Salmon et al., "Parallel random numbers:
// as easy as 1, 2, 3", SC'11). Stateless: each 128-bit block is a pure
// function of (counter, key), so trial-indexed substreams stay reproducible
// under any partitioning of trials across worker threads.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Dimension tags keep draws made for different purposes in disjoint counter
// ranges. A trial that consumes draws under several tags can add or remove
// tags without shifting the others.
inline constexpr std::uint32_t kTagBreakingPoint = 0;  // band breaking point x
inline constexpr std::uint32_t kTagOrientation = 1;    // band share orientation
inline constexpr std::uint32_t kTagSphere = 2;         // bomb-fragment direction
inline constexpr std::uint32_t kTagUrn = 3;            // urn state index
inline constexpr std::uint32_t kTagFreshTerm = 4;      // 4..7: fresh-share CHSH terms

// Stream of uniform doubles bound to one (seed, trial, tag) cell.
// Counter layout: (trial_lo, trial_hi, tag, block index).
class Substream {
 public:
  Substream(std::uint64_t seed, std::uint64_t trial, std::uint32_t tag);

  std::uint64_t next_u64();
  double uniform01();   // [0, 1), 53-bit resolution
  double uniform_pm1(); // [-1, 1)

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::uint32_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int avail_ = 0;
};

}  // namespace contextsim::rng
