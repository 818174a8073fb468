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

#include "polarzip/sc_engine.hpp"

#include <cmath>

namespace polarzip {

bool metric_compatible(SelectionMetric metric, EngineKind kind)
{
    if (kind == EngineKind::llr_min_sum)
        return metric == SelectionMetric::abs_llr;
    return metric == SelectionMetric::entropy_h || metric == SelectionMetric::ml_error;
}

void minus_combine(std::span<const double> left, std::span<const double> right,
                   std::span<double> out)
{
    const int r = static_cast<int>(out.size());
    double norm = 0.0;
    for (int s = 0; s < r; ++s) {
        double acc = 0.0;
        for (int c = 0; c < r; ++c) {
            int a = s - c;
            if (a < 0)
                a += r;
            acc += left[a] * right[c];
        }
        out[s] = acc;
        norm += acc;
    }
    if (norm == 0.0)
        throw degeneracy_error("sum distribution has zero total mass");
    for (int s = 0; s < r; ++s)
        out[s] /= norm;
}

void plus_combine(std::span<const double> left, std::span<const double> right,
                  Symbol sum, std::span<double> out)
{
    const int r = static_cast<int>(out.size());
    double norm = 0.0;
    for (int c = 0; c < r; ++c) {
        int a = static_cast<int>(sum) - c;
        if (a < 0)
            a += r;
        out[c] = left[a] * right[c];
        norm += out[c];
    }
    if (norm == 0.0)
        throw degeneracy_error("conditioning event has zero probability mass");
    for (int c = 0; c < r; ++c)
        out[c] /= norm;
}

ScEngine::ScEngine(SourceModel model, int n_exp, EngineKind kind)
    : model_(std::move(model)), n_exp_(n_exp), kind_(kind)
{
    if (n_exp_ < 0 || n_exp_ > 22)
        throw parameter_error("engine n_exp must be in [0, 22]");
    if (model_.radix() > kMaxRadix)
        throw parameter_error("engine supports alphabets up to size 16");
    if (kind_ == EngineKind::llr_min_sum) {
        if (model_.radix() != 2)
            throw parameter_error("the LLR engine requires a binary alphabet");
        if (model_.degenerate())
            throw parameter_error("the LLR engine rejects degenerate models (infinite LLR)");
    }

    const std::size_t n = block_size();
    const std::size_t r = static_cast<std::size_t>(model_.radix());
    out_.resize(n);
    if (kind_ == EngineKind::probability) {
        root_prob_.resize(n * r);
        arena_.resize(n >= 2 ? (n - 1) * r : 0);
    } else {
        root_llr_.resize(n);
        arena_.resize(n >= 2 ? n - 1 : 0);
    }
    // level_bufs_[l] serves the 2^l lattice nodes of size N >> l; calls at
    // one level never overlap, so a single buffer per level suffices.
    level_bufs_.resize(n_exp_);
    std::size_t off = 0;
    const std::size_t stride = kind_ == EngineKind::probability ? r : 1;
    for (int level = 0; level < n_exp_; ++level) {
        level_bufs_[level] = arena_.data() + off;
        off += (n >> (level + 1)) * stride;
    }
}

IndexStats ScEngine::prob_leaf_stats(const double* dist) const
{
    const int r = radix();
    IndexStats st;
    st.index = next_index_;
    st.radix = r;
    int best = 0;
    double entropy = 0.0;
    for (int k = 0; k < r; ++k) {
        const double p = dist[k];
        st.cond_dist[k] = p;
        if (p > dist[best])
            best = k; // ties keep the smaller symbol
        if (p > 0.0)
            entropy -= p * std::log2(p);
    }
    st.entropy_h = entropy;
    st.ml_error = 1.0 - dist[best];
    if (st.ml_error < 0.0)
        st.ml_error = 0.0;
    st.ml_decision = static_cast<Symbol>(best);
    return st;
}

GuidedStats guided_stats(const SymbolBlock& u, const SourceModel& model, EngineKind kind)
{
    u.validate();
    if (u.radix != model.radix())
        throw parameter_error("block and model radix disagree");
    ScEngine engine(model, u.n_exp, kind);
    GuidedStats out;
    out.stats.reserve(u.size());
    engine.run_pass([&](const IndexStats& st) {
        const Symbol truth = u.symbols[st.index - 1];
        out.stats.push_back(st);
        if (truth != st.ml_decision)
            out.error_set.push_back(st.index);
        return truth;
    });
    return out;
}

} // namespace polarzip
