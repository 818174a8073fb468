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

#include "polarzip/polar_transform.hpp"

namespace polarzip {

void polar_forward_inplace(Symbol* a, std::size_t n, int radix)
{
    // Stage order follows the Kronecker recursion: combine across halves,
    // then descend. Halves are disjoint, so the iterative form is identical.
    for (std::size_t h = n / 2; h >= 1; h /= 2)
        for (std::size_t base = 0; base < n; base += 2 * h)
            for (std::size_t j = 0; j < h; ++j)
                a[base + j] = static_cast<Symbol>((a[base + j] + a[base + h + j]) % radix);
}

void polar_inverse_inplace(Symbol* a, std::size_t n, int radix)
{
    // Reverse stage order, kernel inverse [[1,0],[r-1,1]].
    for (std::size_t h = 1; h <= n / 2; h *= 2)
        for (std::size_t base = 0; base < n; base += 2 * h)
            for (std::size_t j = 0; j < h; ++j)
                a[base + j] =
                    static_cast<Symbol>((a[base + j] + radix - a[base + h + j]) % radix);
}

SymbolBlock polar_forward(const SymbolBlock& x)
{
    x.validate();
    SymbolBlock u = x;
    polar_forward_inplace(u.symbols.data(), u.symbols.size(), u.radix);
    return u;
}

SymbolBlock polar_inverse(const SymbolBlock& u)
{
    u.validate();
    SymbolBlock x = u;
    polar_inverse_inplace(x.symbols.data(), x.symbols.size(), x.radix);
    return x;
}

} // namespace polarzip
