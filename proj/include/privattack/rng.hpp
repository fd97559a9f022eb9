#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace privattack {

// splitmix64 finalizer, used to derive independent child seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Child seed for a named stream. Dropping one stream (e.g. repetition k) does
// not perturb any other stream derived from the same master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a over the stream label
  for (unsigned char c : stream) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::uint64_t s = splitmix64(master ^ h);
  s = splitmix64(s ^ splitmix64(a ^ 0x9e3779b97f4a7c15ull));
  return splitmix64(s ^ splitmix64(b ^ 0x5851f42d4c957f2dull));
}

// mt19937_64 with hand-rolled uniform helpers. The standard <random>
// distributions are implementation-defined, so every sampler that must be
// reproducible across toolchains draws through these instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // 53-bit uniform in [0, 1)
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1]; safe to pass to log()
  double uniform01_positive() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  // unbiased uniform integer in [0, n), n > 0
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t x;
    do {
      x = eng_();
    } while (x < threshold);
    return x % n;
  }

  bool coin() { return (eng_() >> 63) != 0; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace privattack
