#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fhn {

/// Counter-based RNG (Philox4x64-10).  A stream is identified by
/// (master_seed, stream_index); distinct indices select distinct cipher
/// keys, so streams never share output by construction and ensembles can
/// be split reproducibly across threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : key_{master_seed, stream_index} {}

  std::uint64_t next_u64() {
    if (idx_ == 4) refill();
    return buf_[idx_++];
  }

  /// Uniform on (0, 1), never exactly 0 or 1.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal (Marsaglia polar method, cached pair).
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_uniform() - 1.0;
      v = 2.0 * next_uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * m;
    have_cached_ = true;
    return u * m;
  }

 private:
  void refill() {
    std::array<std::uint64_t, 4> x = ctr_;
    std::uint64_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      std::uint64_t hi0, lo0, hi1, lo1;
      mulhilo(0xD2E7470EE14C6C93ULL, x[0], hi0, lo0);
      mulhilo(0xCA5A826395121157ULL, x[2], hi1, lo1);
      x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
      k0 += 0x9E3779B97F4A7C15ULL;
      k1 += 0xBB67AE8584CAA73BULL;
    }
    buf_ = x;
    idx_ = 0;
    if (++ctr_[0] == 0)
      if (++ctr_[1] == 0)
        if (++ctr_[2] == 0) ++ctr_[3];
  }

  static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> buf_{};
  int idx_ = 4;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

inline RngStream make_rng_stream(std::uint64_t master_seed,
                                 std::uint64_t stream_index) {
  return RngStream(master_seed, stream_index);
}

}  // namespace fhn
