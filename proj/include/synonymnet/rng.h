// Copyright 2026 The SynonymNet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYNONYMNET_RNG_H_
#define SYNONYMNET_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace synonymnet {

using Rng = std::mt19937_64;

// SplitMix64 finaliser; used to decorrelate derived seeds.
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a over the stream name.
inline uint64_t HashName(std::string_view name) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Independent generator for subsystem `name` (and optional index, e.g. an
// epoch or entity id) derived from one run seed.
inline Rng MakeStream(uint64_t seed, std::string_view name, uint64_t index = 0) {
  return Rng(MixSeed(MixSeed(seed ^ HashName(name)) + index));
}

// Uniform integer in [0, n). n must be > 0.
inline size_t UniformIndex(Rng &rng, size_t n) {
  return std::uniform_int_distribution<size_t>(0, n - 1)(rng);
}

}  // namespace synonymnet

#endif  // SYNONYMNET_RNG_H_
