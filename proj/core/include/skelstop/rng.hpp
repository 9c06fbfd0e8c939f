#pragma once

#include <cmath>
#include <cstdint>

namespace skelstop {

// Counter-based pseudo-random stream.  A stream is addressed by
// (seed, stream, substream); draws within a stream are a splitmix64
// sequence.  Streams with distinct addresses are statistically
// independent, so path i of an experiment can use stream id i and the
// result does not depend on how paths are scheduled across threads.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0) {
    state_ = mix(seed + 0x9E3779B97F4A7C15ull);
    state_ = mix(state_ ^ mix(stream + 0xBF58476D1CE4E5B9ull));
    state_ = mix(state_ ^ mix(substream + 0x94D049BB133111EBull));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform on the open interval (0,1); never returns an exact endpoint.
  double next_uniform() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-54;
  }

  // Fair sign in {-1,+1}.
  int next_sign() { return (next_u64() >> 63) ? 1 : -1; }

  // Standard normal via Box-Muller; pairs are drawn together and the
  // spare is cached, so the draw sequence is fully deterministic.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Stream-id partitions used by the experiment driver.  Training and
// evaluation paths must never share a stream.
namespace stream_domain {
inline constexpr std::uint64_t kTraining = 0;
inline constexpr std::uint64_t kEvaluation = 1ull << 40;
inline constexpr std::uint64_t kOracle = 1ull << 41;
}  // namespace stream_domain

}  // namespace skelstop
