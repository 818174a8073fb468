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
#include <functional>

namespace polarzip {

// Worker cap from POLARZIP_THREADS (0 or unset means hardware concurrency).
int thread_budget();

// Runs fn(begin, end) over contiguous chunks of [0, count), one chunk per
// worker. Workers keep whatever per-chunk state they need (engines, RNGs);
// callers make the result deterministic by writing into index-addressed
// slots. The first exception thrown by any worker is rethrown.
void parallel_chunks(std::uint64_t count,
                     const std::function<void(std::uint64_t, std::uint64_t)>& fn);

} // namespace polarzip
