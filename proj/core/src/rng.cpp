#include "percolab/rng.hpp"

namespace percolab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Philox4x32::Counter Philox4x32::apply(Counter c, Key k) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage) noexcept {
  // FNV-1a over the stage name, then mixed with the master seed.
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : stage) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  return mix64(mix64(master) ^ h);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index ^ 0x5851F42D4C957F2Dull));
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t replica, Stream stream) noexcept
    : seed_(seed), replica_(replica) {
  const std::uint64_t k = mix64(seed ^ mix64(replica));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  c2_ = static_cast<std::uint32_t>(replica);
  c3_ = (static_cast<std::uint32_t>(replica >> 32) << 2) | static_cast<std::uint32_t>(stream);
}

double CounterRng::uniform(std::uint64_t index) noexcept {
  const std::uint64_t block = index >> 1;
  if (block != cached_block_) {
    cached_ = Philox4x32::apply(
        {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), c2_, c3_}, key_);
    cached_block_ = block;
  }
  const unsigned w = static_cast<unsigned>(index & 1u) * 2u;
  const std::uint64_t bits = (static_cast<std::uint64_t>(cached_[w]) << 32) | cached_[w + 1];
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace percolab
