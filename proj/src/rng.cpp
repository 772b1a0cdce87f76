#include "contextsim/rng.hpp"

namespace contextsim::rng {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline std::array<std::uint32_t, 4> philox_round(std::array<std::uint32_t, 4> ctr,
                                                 const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) {
    counter = philox_round(counter, key);
    if (r < 9) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
  }
  return counter;
}

Substream::Substream(std::uint64_t seed, std::uint64_t trial, std::uint32_t tag)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      base_{static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), tag, 0} {}

void Substream::refill() {
  auto ctr = base_;
  ctr[3] = block_++;
  const auto w = philox4x32(ctr, key_);
  buf_[0] = (std::uint64_t{w[1]} << 32) | w[0];
  buf_[1] = (std::uint64_t{w[3]} << 32) | w[2];
  avail_ = 2;
}

std::uint64_t Substream::next_u64() {
  if (avail_ == 0) refill();
  return buf_[2 - avail_--];
}

double Substream::uniform01() {
  // 53 high bits -> [0, 1) on the canonical double grid
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Substream::uniform_pm1() { return 2.0 * uniform01() - 1.0; }

}  // namespace contextsim::rng
