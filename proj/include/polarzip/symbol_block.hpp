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
#include <cstdint>
#include <vector>

namespace polarzip {

using Symbol = std::uint8_t;

bool is_prime(int v);

// Length-N sequence of radix-r symbols with N = 2^n_exp.
struct SymbolBlock {
    int radix = 2;
    int n_exp = 0;
    std::vector<Symbol> symbols;

    std::size_t size() const { return symbols.size(); }

    // Throws parameter_error when the invariants above do not hold.
    void validate() const;

    static SymbolBlock zeros(int radix, int n_exp);
};

} // namespace polarzip
