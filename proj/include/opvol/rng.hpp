#pragma once

// Counter-based random streams. A stream is keyed by
// (master seed, replication index, purpose) so every replication draws the
// same numbers no matter which worker runs it or in what order.

#include <cstdint>
#include <limits>

namespace opvol {

enum class Purpose : std::uint64_t {
  clock = 1,
  jumps = 2,
  probe = 3,
  wiener = 4,
  test = 5,
};

class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix(key_ + kGolden * ++counter_); }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  /// SplitMix64 finalizer.
  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Independent stream for one (seed, replication, purpose) triple.
inline Stream derive_stream(std::uint64_t master_seed, std::uint64_t replication, Purpose purpose) noexcept {
  std::uint64_t k = Stream::mix(master_seed + Stream::kGolden);
  k = Stream::mix(k ^ (replication + 0x632be59bd9b4e019ULL));
  k = Stream::mix(k ^ (static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL));
  return Stream(k);
}

}  // namespace opvol
