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

#include <cstddef>

#include "polarzip/symbol_block.hpp"

namespace polarzip {

// u = x * G over modulo-r arithmetic, where G is the n-fold Kronecker power
// of the 2x2 kernel [[1,0],[1,1]] in natural ordering (no bit-reversal).
// Row-vector convention: the length-2 base case is (u1, u2) = (x1+x2, x2).
// O(N log N) butterfly.
SymbolBlock polar_forward(const SymbolBlock& x);

// Inverse transform, built from the kernel inverse [[1,0],[r-1,1]].
// For r = 2 the transform is an involution, so inverse == forward.
SymbolBlock polar_inverse(const SymbolBlock& u);

// In-place variants over raw storage; n must be a power of two.
void polar_forward_inplace(Symbol* data, std::size_t n, int radix);
void polar_inverse_inplace(Symbol* data, std::size_t n, int radix);

} // namespace polarzip
