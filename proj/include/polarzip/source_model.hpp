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
#include <vector>

#include "polarzip/symbol_block.hpp"

namespace polarzip {

// An i.i.d. discrete memoryless source over a prime-size alphabet.
// The modulo-r kernel polarizes only for prime r, so non-prime radixes are
// rejected at construction. Immutable once built; safe to share across
// threads.
class SourceModel {
public:
    // probs.size() is the radix. Requires a prime radix >= 2, every
    // probability in [0, 1] and a total of 1 within 1e-12. Probabilities of
    // exactly 0 or 1 are accepted (the LLR engine separately rejects them).
    explicit SourceModel(std::vector<double> probs);

    // Inverts the binary entropy function by bisection on [0, 0.5]:
    // returns the (1-p, p) model with H2(p) = target_bits.
    static SourceModel binary_from_entropy(double target_bits);

    int radix() const { return static_cast<int>(probs_.size()); }
    const std::vector<double>& probs() const { return probs_; }

    // -sum p log_base p, with 0 log 0 = 0.
    double entropy(int base) const;
    double entropy_bits() const { return entropy(2); }

    // True when some probability is exactly 0 (equivalently, 1).
    bool degenerate() const;

    // Ties resolve toward the smaller symbol value.
    Symbol most_probable() const;

private:
    std::vector<double> probs_;
};

// Draws N = 2^n_exp i.i.d. symbols. Fully deterministic: identical
// (model, n_exp, seed) produce identical blocks on every platform.
// Requires 1 <= n_exp <= 24.
SymbolBlock sample_block(const SourceModel& model, int n_exp, std::uint64_t seed);

} // namespace polarzip
