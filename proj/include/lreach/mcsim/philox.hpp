#pragma once

#include <array>
#include <cstdint>

namespace lreach::mcsim {

/// Philox4x32-10 counter-based generator. Stream (seed, stream) yields the
/// blocks philox(counter = {i, i >> 32, stream, stream >> 32}, key = seed).
class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox(std::uint64_t seed, std::uint64_t stream);

  static Block bijection(Block counter, Key key);

  std::uint32_t next_u32();
  /// Uniform on the open interval (0, 1), 53 random bits.
  double uniform();
  /// Standard normal by Box-Muller; the second value of a pair is cached.
  double normal();

 private:
  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lreach::mcsim
