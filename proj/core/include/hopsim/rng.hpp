#pragma once

#include <array>
#include <cstdint>

namespace hopsim {

// Philox4x32-10 counter-based generator (Random123 constants). One block of
// four 32-bit words per (key, counter) pair; the key is the 64-bit run seed,
// counter words [2..3] select the stream (output-word index) and counter
// words [0..1] advance within the stream. Streams never collide, results are
// independent of evaluation order, and golden files are portable because no
// standard-library distribution code is involved.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double next_double();

  // Standard normal via Box-Muller; the second variate of each pair is
  // cached so draws are deterministic regardless of call grouping.
  double next_gaussian();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double cached_gauss_ = 0.0;
  bool has_cached_gauss_ = false;
};

}  // namespace hopsim
