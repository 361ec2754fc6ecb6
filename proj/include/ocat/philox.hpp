#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each
// (key, counter) pair maps to four independent 32-bit words, so any
// substream can be addressed directly without generator state.

#include <array>
#include <cstdint>

namespace ocat {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
  constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += w0;
      key[1] += w1;
    }
    const std::uint64_t p0 = std::uint64_t{m0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{m1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

// Uniform doubles for one Monte Carlo trial: key = seed, counter =
// (block, trial). Two doubles per Philox block.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        trial_(trial) {}

  // Uniform on the open interval (0, 1).
  double uniform() {
    if (slot_ == 2) refill();
    const std::uint64_t bits = words_[slot_++];
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  void refill() {
    const PhiloxCounter out = philox4x32_10(
        {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
         static_cast<std::uint32_t>(trial_), static_cast<std::uint32_t>(trial_ >> 32)},
        key_);
    ++block_;
    words_[0] = (std::uint64_t{out[0]} << 32) | out[1];
    words_[1] = (std::uint64_t{out[2]} << 32) | out[3];
    slot_ = 0;
  }

  PhiloxKey key_;
  std::uint64_t trial_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> words_{};
  int slot_ = 2;
};

}  // namespace ocat
