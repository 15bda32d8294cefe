#pragma once

#include <array>
#include <cstdint>

namespace levywalk {

/// Philox4x32-10 block function (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Random stream for one chain. Its draws depend only on (seed, stream id),
/// so chains can be scheduled on any worker in any order.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  /// +1 or -1 with probability 1/2 each.
  int sign() noexcept;

  std::uint64_t blocks_used() const noexcept { return next_block_; }

 private:
  std::uint32_t next_word() noexcept;
  void refill() noexcept;

  Philox4x32::Key key_;
  std::uint64_t stream_id_;
  std::uint64_t next_block_ = 0;
  Philox4x32::Counter buffer_{};
  int buffered_ = 0;
  std::uint32_t sign_bits_ = 0;
  int signs_left_ = 0;
};

}  // namespace levywalk
