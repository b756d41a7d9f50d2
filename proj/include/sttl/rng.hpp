#ifndef STTL_RNG_HPP
#define STTL_RNG_HPP

#include <cstdint>
#include <random>

namespace sttl {

// splitmix64, used to derive well-separated stream seeds from (master, index)
// pairs so that parallel runs get independent deterministic streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
  return std::mt19937_64(splitmix64(splitmix64(master_seed) ^ stream_id));
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace sttl

#endif
