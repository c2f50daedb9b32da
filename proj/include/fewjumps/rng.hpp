#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fewjumps {

// Philox 4x64-10 counter-based generator. The key is (seed, stream_id), so any
// (seed, stream_id, counter) triple maps to the same 256-bit block on every
// run of the same build; substreams need no coordination.
namespace philox {

inline constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
inline constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
inline constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const unsigned __int128 p =
      static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b);
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline std::array<std::uint64_t, 4> block(std::uint64_t seed,
                                          std::uint64_t stream,
                                          std::uint64_t counter) {
  std::uint64_t c0 = counter, c1 = 0, c2 = stream, c3 = 0;
  std::uint64_t k0 = seed, k1 = stream;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c0, hi0, lo0);
    mulhilo(kMul1, c2, hi1, lo1);
    const std::uint64_t n0 = hi1 ^ c1 ^ k0;
    const std::uint64_t n1 = lo1;
    const std::uint64_t n2 = hi0 ^ c3 ^ k1;
    const std::uint64_t n3 = lo0;
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kWeyl0;
    k1 += kWeyl1;
  }
  return {c0, c1, c2, c3};
}

}  // namespace philox

/// Reproducible random stream: identical (seed, stream_id) reproduce identical
/// draws bit-for-bit on one build. Substreams are independent by construction.
class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  /// Derived stream for shard `i`; collision-free in the (stream, i) plane.
  SeededStream substream(std::uint64_t i) const {
    std::uint64_t s = stream_ + 0x9E3779B97F4A7C15ULL * (i + 1);
    s ^= (s >> 31);
    s *= 0xBF58476D1CE4E5B9ULL;
    s ^= (s >> 27);
    return SeededStream(seed_, s);
  }

  std::uint64_t next_u64() {
    if (index_ == 4) {
      buffer_ = philox::block(seed_, stream_, counter_++);
      index_ = 0;
    }
    return buffer_[index_++];
  }

  /// Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (two uniforms per pair, no rejection).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  /// Standard exponential.
  double exponential() { return -std::log(uniform()); }

  /// Rademacher sign.
  double sign() { return (next_u64() & 1ULL) ? 1.0 : -1.0; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int index_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fewjumps
