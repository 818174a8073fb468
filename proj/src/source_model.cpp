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

#include "polarzip/source_model.hpp"

#include <cmath>
#include <random>

#include "polarzip/errors.hpp"
#include "polarzip/rng.hpp"

namespace polarzip {

SourceModel::SourceModel(std::vector<double> probs) : probs_(std::move(probs))
{
    if (!is_prime(radix()))
        throw parameter_error("alphabet size must be a prime >= 2");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || p > 1.0)
            throw parameter_error("probabilities must lie in [0, 1]");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw parameter_error("probabilities must sum to 1 within 1e-12");
}

namespace {

double binary_entropy_bits(double p)
{
    double h = 0.0;
    if (p > 0.0)
        h -= p * std::log2(p);
    if (p < 1.0)
        h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

} // namespace

SourceModel SourceModel::binary_from_entropy(double target_bits)
{
    if (!(target_bits > 0.0) || target_bits > 1.0)
        throw parameter_error("binary entropy target must lie in (0, 1]");
    if (target_bits == 1.0)
        return SourceModel({0.5, 0.5});
    // Bisect until the bracket collapses to adjacent doubles; H2 is strictly
    // increasing on [0, 0.5], so this lands on the best representable p.
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        if (binary_entropy_bits(mid) < target_bits)
            lo = mid;
        else
            hi = mid;
    }
    double p = std::fabs(binary_entropy_bits(lo) - target_bits) <
                       std::fabs(binary_entropy_bits(hi) - target_bits)
                   ? lo
                   : hi;
    if (p == 0.0)
        p = hi;
    return SourceModel({1.0 - p, p});
}

double SourceModel::entropy(int base) const
{
    if (base < 2)
        throw parameter_error("entropy base must be >= 2");
    const double log_base = std::log(static_cast<double>(base));
    double h = 0.0;
    for (double p : probs_)
        if (p > 0.0)
            h -= p * (std::log(p) / log_base);
    return h;
}

bool SourceModel::degenerate() const
{
    for (double p : probs_)
        if (p == 0.0 || p == 1.0)
            return true;
    return false;
}

Symbol SourceModel::most_probable() const
{
    int best = 0;
    for (int k = 1; k < radix(); ++k)
        if (probs_[k] > probs_[best])
            best = k;
    return static_cast<Symbol>(best);
}

SymbolBlock sample_block(const SourceModel& model, int n_exp, std::uint64_t seed)
{
    if (n_exp < 1 || n_exp > 24)
        throw parameter_error("sample_block requires 1 <= n_exp <= 24");
    const int r = model.radix();
    std::vector<double> cumulative(r);
    double acc = 0.0;
    for (int k = 0; k < r; ++k) {
        acc += model.probs()[k];
        cumulative[k] = acc;
    }

    SymbolBlock block;
    block.radix = r;
    block.n_exp = n_exp;
    block.symbols.resize(std::size_t{1} << n_exp);

    // mt19937_64 output is pinned by the standard, so blocks are identical
    // across platforms; distributions are avoided because they are not.
    std::mt19937_64 gen(seed);
    for (Symbol& s : block.symbols) {
        const double u = unit_double(gen());
        int k = 0;
        while (k < r - 1 && u >= cumulative[k])
            ++k;
        s = static_cast<Symbol>(k);
    }
    return block;
}

} // namespace polarzip
