/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
you may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>

namespace polarzip {

// Counter-based seed derivation (splitmix64 finalizer). Trial t of a run
// always sees the same generator state no matter how trials are scheduled
// across threads.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t counter)
{
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// 53-bit uniform draw in [0, 1) from a 64-bit word.
constexpr double unit_double(std::uint64_t word)
{
    return static_cast<double>(word >> 11) * 0x1.0p-53;
}

} // namespace polarzip
