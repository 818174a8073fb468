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

#include <vector>

#include "polarzip/source_model.hpp"
#include "polarzip/symbol_block.hpp"

namespace polarzip {

// Brute-force reference semantics at small N: enumerates every source block,
// weights it by the model, and aggregates over the transformed side. Entirely
// independent of the SC recursion it is used to check. Feasible while
// r^N <= 10^7 (N <= 16 for r=2, N <= 8 for r=3 and r=5).

struct OracleResult {
    std::vector<double> cond_dist;
};

bool oracle_feasible(int radix, int n_exp);

// Conditional law of the symbol following `prefix` on the transformed side.
// Throws parameter_error when r^N exceeds the size bound and degeneracy_error
// when the prefix has zero probability mass.
OracleResult brute_conditional(const SourceModel& model, int n_exp,
                               const std::vector<Symbol>& prefix);

// Exact average conditional entropies (bits), index by index. Their sum is
// N * H(X) by the chain rule, which callers use as a checksum.
std::vector<double> brute_entropy_profile(const SourceModel& model, int n_exp);

// All conditional laws at once: result[i-1] maps the base-r encoding of
// u_{1:i-1} to the conditional distribution of u_i. Same cost as one
// enumeration; used by exhaustive engine checks.
std::vector<std::vector<std::vector<double>>>
brute_all_conditionals(const SourceModel& model, int n_exp);

} // namespace polarzip
