#pragma once

#include <array>
#include <cstdint>

namespace stablerisk {

/// Counter-based random stream (Philox4x32-10).
///
/// A stream is addressed by a (seed, stream_id) pair: the seed is hashed into
/// the Philox key and the stream id occupies the upper half of the 128-bit
/// counter. Every draw is a pure function of (key, counter), so a worker can
/// reconstruct its substream without reference to any other worker.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();
  double exponential();
  /// Gamma(shape, 1).
  double gamma(double shape);
  /// log of a Gamma(shape, 1) draw; stays finite for very small shapes where
  /// the draw itself underflows.
  double log_gamma(double shape);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  /// Number of 128-bit blocks consumed so far.
  std::uint64_t position() const { return block_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::array<std::uint32_t, 2> key_{};
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> out_{};
  int next_word_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; used to derive keys and child seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace stablerisk
