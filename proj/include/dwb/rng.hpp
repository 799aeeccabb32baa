#pragma once

#include <array>
#include <cstdint>

namespace dwb {

// Counter-based Philox4x32-10 stream (Salmon et al., SC'11). Streams are
// identified by a 64-bit key plus a 64-bit tag held in the upper counter
// words, so distinct (key, tag) pairs never overlap within 2^64 blocks.
class RngStream {
 public:
  RngStream() = default;
  RngStream(uint64_t key, uint32_t tag_lo, uint32_t tag_hi);

  uint32_t next_u32();
  uint64_t next_u64();
  double next_double();  // uniform on [0, 1), 53-bit resolution
  double next_open();    // uniform on (0, 1]

 private:
  void refill();

  std::array<uint32_t, 2> key_{0, 0};
  std::array<uint32_t, 4> counter_{0, 0, 0, 0};
  std::array<uint32_t, 4> block_{0, 0, 0, 0};
  int cursor_ = 4;
};

// Stream ids reserved by the runtime; agent ids must stay below these.
inline constexpr uint32_t kMetricsStream = 0xFFFFFFFFu;
inline constexpr uint32_t kMeasureGenStream = 0xFFFFFFFEu;
inline constexpr uint32_t kTopologyStream = 0xFFFFFFFDu;

// One statistically independent stream per (master_seed, stream_id, round);
// identical inputs always yield identical streams.
RngStream rng_stream(uint64_t master_seed, uint32_t stream_id, uint32_t round);

}  // namespace dwb
