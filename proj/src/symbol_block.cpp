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

#include "polarzip/symbol_block.hpp"

#include "polarzip/errors.hpp"

namespace polarzip {

bool is_prime(int v)
{
    if (v < 2)
        return false;
    for (int d = 2; d * d <= v; ++d)
        if (v % d == 0)
            return false;
    return true;
}

void SymbolBlock::validate() const
{
    if (radix < 2 || radix > 255)
        throw parameter_error("symbol block radix must be in [2, 255]");
    if (n_exp < 0 || n_exp > 24)
        throw parameter_error("symbol block n_exp must be in [0, 24]");
    if (symbols.size() != (std::size_t{1} << n_exp))
        throw parameter_error("symbol block length must be exactly 2^n_exp");
    for (Symbol s : symbols)
        if (s >= radix)
            throw parameter_error("symbol value out of alphabet range");
}

SymbolBlock SymbolBlock::zeros(int radix, int n_exp)
{
    SymbolBlock b;
    b.radix = radix;
    b.n_exp = n_exp;
    b.symbols.assign(std::size_t{1} << n_exp, 0);
    b.validate();
    return b;
}

} // namespace polarzip
