#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace percolab {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A pure
// function of (counter, key): no state, so any draw can be recomputed from its
// coordinates alone.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter counter, Key key) noexcept;
};

// SplitMix64 finalizer; used for seed mixing only.
std::uint64_t mix64(std::uint64_t x) noexcept;

// hash(master_seed, stage_name): adding a stage never perturbs another stage.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) noexcept;
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

// Independent substreams for one replica.
enum class Stream : std::uint32_t {
  kBonds = 0,  // one uniform per edge index
  kGreen = 1,  // one uniform per vertex index
  kSkip = 2,   // sequential uniforms for geometric edge skipping
};

// Uniform doubles in [0,1) addressed by (seed, replica, stream, index).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replica, Stream stream) noexcept;

  // 53-bit uniform for position `index`; calls with adjacent indices share a
  // Philox block, which is cached.
  double uniform(std::uint64_t index) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t replica() const noexcept { return replica_; }

 private:
  std::uint64_t seed_;
  std::uint64_t replica_;
  Philox4x32::Key key_;
  std::uint32_t c2_;
  std::uint32_t c3_;
  std::uint64_t cached_block_ = ~std::uint64_t{0};
  Philox4x32::Counter cached_{};
};

// Sequential view over a CounterRng stream.
class SequentialRng {
 public:
  SequentialRng(std::uint64_t seed, std::uint64_t replica, Stream stream) noexcept
      : rng_(seed, replica, stream) {}
  double next() noexcept { return rng_.uniform(position_++); }

 private:
  CounterRng rng_;
  std::uint64_t position_ = 0;
};

}  // namespace percolab
