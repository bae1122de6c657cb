#pragma once

#include <array>
#include <cstdint>

namespace levitsim {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream. The (seed, stream) pair selects an independent
/// sequence, so per-axis or per-trajectory streams need no shared state.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;
  /// Standard normal via Box-Muller on consecutive uniform pairs.
  double gaussian() noexcept;
  /// Exponential with unit mean.
  double exponential() noexcept;
  /// Poisson with the given mean (inversion for small means, PTRS otherwise).
  std::uint64_t poisson(double mean) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t next_u64() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_ = 4;
  double spare_gaussian_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace levitsim
