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

#include "polarzip/oracle.hpp"

#include <cmath>
#include <cstdint>

#include "polarzip/errors.hpp"
#include "polarzip/polar_transform.hpp"

namespace polarzip {

namespace {

constexpr std::uint64_t kEnumerationBound = 10'000'000;

// r^N, saturating above the bound.
std::uint64_t enumeration_size(int radix, int n_exp)
{
    std::uint64_t total = 1;
    const std::uint64_t n = std::uint64_t{1} << n_exp;
    for (std::uint64_t i = 0; i < n; ++i) {
        total *= static_cast<std::uint64_t>(radix);
        if (total > kEnumerationBound)
            return kEnumerationBound + 1;
    }
    return total;
}

void check_bounds(const SourceModel& model, int n_exp)
{
    if (n_exp < 0 || n_exp > 24 ||
        enumeration_size(model.radix(), n_exp) > kEnumerationBound)
        throw parameter_error("oracle enumeration exceeds the r^N <= 10^7 bound");
}

// Walks every positive-mass source block in odometer order, invoking
// visit(weight, transformed block).
template <class Visit>
void enumerate(const SourceModel& model, int n_exp, Visit&& visit)
{
    const int r = model.radix();
    const std::size_t n = std::size_t{1} << n_exp;
    std::vector<Symbol> x(n, 0);
    std::vector<Symbol> u(n);
    for (;;) {
        double weight = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            weight *= model.probs()[x[k]];
        if (weight > 0.0) {
            u = x;
            polar_forward_inplace(u.data(), n, r);
            visit(weight, u);
        }
        std::size_t pos = 0;
        while (pos < n) {
            if (++x[pos] < r)
                break;
            x[pos] = 0;
            ++pos;
        }
        if (pos == n)
            return;
    }
}

// buckets[i] is a flat array of r^i prefix cells times r values holding the
// joint mass of (u_{1:i} = prefix, u_{i+1} = value).
std::vector<std::vector<double>> joint_mass_buckets(const SourceModel& model, int n_exp)
{
    const int r = model.radix();
    const std::size_t n = std::size_t{1} << n_exp;
    std::vector<std::vector<double>> buckets(n);
    std::size_t keys = 1;
    for (std::size_t i = 0; i < n; ++i) {
        buckets[i].assign(keys * r, 0.0);
        keys *= r;
    }
    enumerate(model, n_exp, [&](double weight, const std::vector<Symbol>& u) {
        std::size_t key = 0;
        for (std::size_t i = 0; i < n; ++i) {
            buckets[i][key * r + u[i]] += weight;
            key = key * r + u[i];
        }
    });
    return buckets;
}

} // namespace

bool oracle_feasible(int radix, int n_exp)
{
    return n_exp >= 0 && n_exp <= 24 &&
           enumeration_size(radix, n_exp) <= kEnumerationBound;
}

OracleResult brute_conditional(const SourceModel& model, int n_exp,
                               const std::vector<Symbol>& prefix)
{
    check_bounds(model, n_exp);
    const int r = model.radix();
    const std::size_t n = std::size_t{1} << n_exp;
    const std::size_t i = prefix.size(); // 0-based index of the queried symbol
    if (i >= n)
        throw parameter_error("prefix must be shorter than the block");
    for (Symbol s : prefix)
        if (s >= r)
            throw parameter_error("prefix symbol out of alphabet range");

    OracleResult result;
    result.cond_dist.assign(r, 0.0);
    enumerate(model, n_exp, [&](double weight, const std::vector<Symbol>& u) {
        for (std::size_t k = 0; k < i; ++k)
            if (u[k] != prefix[k])
                return;
        result.cond_dist[u[i]] += weight;
    });

    double norm = 0.0;
    for (double v : result.cond_dist)
        norm += v;
    if (norm == 0.0)
        throw degeneracy_error("prefix has zero probability mass");
    for (double& v : result.cond_dist)
        v /= norm;
    return result;
}

std::vector<std::vector<std::vector<double>>>
brute_all_conditionals(const SourceModel& model, int n_exp)
{
    check_bounds(model, n_exp);
    const int r = model.radix();
    const std::size_t n = std::size_t{1} << n_exp;
    const auto buckets = joint_mass_buckets(model, n_exp);

    std::vector<std::vector<std::vector<double>>> result(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cells = buckets[i].size() / r;
        result[i].assign(cells, std::vector<double>(r, 0.0));
        for (std::size_t key = 0; key < cells; ++key) {
            double norm = 0.0;
            for (int k = 0; k < r; ++k)
                norm += buckets[i][key * r + k];
            if (norm == 0.0)
                continue; // unreachable prefix
            for (int k = 0; k < r; ++k)
                result[i][key][k] = buckets[i][key * r + k] / norm;
        }
    }
    return result;
}

std::vector<double> brute_entropy_profile(const SourceModel& model, int n_exp)
{
    check_bounds(model, n_exp);
    const int r = model.radix();
    const std::size_t n = std::size_t{1} << n_exp;
    const auto buckets = joint_mass_buckets(model, n_exp);

    // Average conditional entropy: sum over prefixes of
    // Pr(prefix) * H(U_i | prefix).
    std::vector<double> profile(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cells = buckets[i].size() / r;
        for (std::size_t key = 0; key < cells; ++key) {
            double mass = 0.0;
            for (int k = 0; k < r; ++k)
                mass += buckets[i][key * r + k];
            if (mass == 0.0)
                continue;
            double h = 0.0;
            for (int k = 0; k < r; ++k) {
                const double v = buckets[i][key * r + k];
                if (v > 0.0) {
                    const double p = v / mass;
                    h -= p * std::log2(p);
                }
            }
            profile[i] += mass * h;
        }
    }
    return profile;
}

} // namespace polarzip
