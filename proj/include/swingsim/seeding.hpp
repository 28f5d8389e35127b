#pragma once

#include <cstdint>

namespace swingsim {

/// SplitMix64 finalizer.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for stream `stream` of `base`. Campaign trial i uses
/// split_seed(campaign_seed, i); inside a trial the capture, the clustering
/// and the human model draw from fixed sub-streams of the trial seed.
inline constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

namespace streams {
inline constexpr std::uint64_t kCapture = 1;
inline constexpr std::uint64_t kClustering = 2;
inline constexpr std::uint64_t kHuman = 3;
inline constexpr std::uint64_t kScenario = 4;
}  // namespace streams

}  // namespace swingsim
