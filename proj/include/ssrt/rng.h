// Copyright 2026 The ssr-telescopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSRT_RNG_H
#define SSRT_RNG_H

#include <cstdint>
#include <random>

namespace ssrt {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Key for stream `counter` under `seed`. Distinct counters give independent
/// streams, so work items can be drawn in any order or on any thread.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t counter) {
    return mix64(mix64(seed) ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t counter) {
    return std::mt19937_64(stream_key(seed, counter));
}

}  // namespace ssrt

#endif  // SSRT_RNG_H
