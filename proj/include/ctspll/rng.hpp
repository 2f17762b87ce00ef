/*
 * seeded random source with named substreams
 *
 * std::mt19937_64 is bit-stable across platforms but the standard
 * distributions are not, so bounded draws and shuffles are implemented here.
 */
#pragma once
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace ctspll {

// splitmix64 finalizer, used for seed derivation only
inline uint64_t mix64(uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// one root seed fans out into independent streams, keyed by a purpose tag
// and an optional index
inline uint64_t derive_seed(uint64_t root, std::string_view purpose,
                            uint64_t index = 0)
{
  uint64_t h = 1469598103934665603ULL;  // FNV-1a over the tag
  for (char c : purpose) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
  return mix64(mix64(root ^ h) + index);
}

struct Rng {
  std::mt19937_64 engine;

  explicit Rng(uint64_t seed) : engine(seed) {}

  uint64_t next() { return engine(); }

  // uniform in [0, n), unbiased via rejection
  int below(int n)
  {
    const uint64_t un = static_cast<uint64_t>(n);
    const uint64_t limit = (UINT64_MAX / un) * un;
    uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return static_cast<int>(r % un);
  }

  // uniform in [0, 1)
  double unit() { return (next() >> 11) * 0x1.0p-53; }

  template <typename It>
  void shuffle(It first, It last)
  {
    const auto n = last - first;
    for (auto i = n - 1; i > 0; --i) {
      const auto j = below(static_cast<int>(i) + 1);
      std::swap(first[i], first[j]);
    }
  }

  template <typename T>
  void shuffle(std::vector<T>& v)
  {
    shuffle(v.begin(), v.end());
  }

  // k distinct values from [0, n), order random
  std::vector<int> sample_without_replacement(int n, int k)
  {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
      const int j = i + below(n - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
};

}  // namespace ctspll
