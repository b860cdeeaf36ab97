#pragma once

#include <cstdint>
#include <vector>

namespace l2boost {

// Counter-based stream keyed by (master_seed, substream_id). The state is a
// 64-bit counter pushed through an integer mixing finalizer, so draw i of a
// stream is a pure function of (master_seed, substream_id, i): streams can be
// replayed or split across workers without coordination.
class rng_stream {
public:
  rng_stream(std::uint64_t master_seed, std::uint64_t substream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t substream_id() const noexcept { return substream_id_; }

  std::uint64_t next_u64();

  // uniform on [0, 1), 53-bit mantissa
  double next_uniform();

  // standard normal via Box-Muller; the paired draw is cached
  double next_gaussian();

  std::vector<double> gaussians(std::size_t count);

private:
  std::uint64_t master_seed_;
  std::uint64_t substream_id_;
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

} // namespace l2boost
