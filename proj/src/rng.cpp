#include "rng.hpp"

#include <cmath>
#include <numbers>

namespace l2boost {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

} // namespace

rng_stream::rng_stream(std::uint64_t master_seed, std::uint64_t substream_id)
    : master_seed_(master_seed), substream_id_(substream_id) {
  // fold the key into a starting counter; two mix rounds decorrelate
  // neighbouring (seed, substream) pairs
  state_ = mix64(mix64(master_seed + kGamma) ^ (substream_id * 0xD6E8FEB86659FD93ull + 0x2545F4914F6CDD1Dull));
}

std::uint64_t rng_stream::next_u64() {
  state_ += kGamma;
  return mix64(state_);
}

double rng_stream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double rng_stream::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = 1.0 - next_uniform(); // (0, 1], keeps the log finite
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(a);
  has_cached_ = true;
  return r * std::cos(a);
}

std::vector<double> rng_stream::gaussians(std::size_t count) {
  std::vector<double> out(count);
  for (auto& v : out) v = next_gaussian();
  return out;
}

} // namespace l2boost
