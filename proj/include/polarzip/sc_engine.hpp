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

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "polarzip/errors.hpp"
#include "polarzip/source_model.hpp"
#include "polarzip/symbol_block.hpp"

namespace polarzip {

// Largest alphabet the per-index statistics can carry (primes up to 13).
inline constexpr int kMaxRadix = 16;

enum class EngineKind : std::uint8_t {
    probability = 0, // exact conditional distributions, any prime radix
    llr_min_sum = 1, // min-sum LLR approximation, radix 2 only
};

enum class SelectionMetric : std::uint8_t {
    entropy_h = 0, // conditional entropy in bits, retained when >= threshold
    ml_error = 1,  // 1 - max conditional probability, retained when >= threshold
    abs_llr = 2,   // |LLR|, retained when <= threshold (LLR engine only)
};

bool metric_compatible(SelectionMetric metric, EngineKind kind);

// Per-index statistics observed by a successive-cancellation pass.
// The probability engine fills cond_dist / entropy_h / ml_error; the LLR
// engine fills llr. Unfilled fields are NaN.
struct IndexStats {
    std::uint32_t index = 0; // 1-based position in the pass
    int radix = 0;
    std::array<double, kMaxRadix> cond_dist{};
    double entropy_h = std::numeric_limits<double>::quiet_NaN();
    double ml_error = std::numeric_limits<double>::quiet_NaN();
    double llr = std::numeric_limits<double>::quiet_NaN();
    Symbol ml_decision = 0;

    double metric(SelectionMetric m) const
    {
        switch (m) {
        case SelectionMetric::entropy_h: return entropy_h;
        case SelectionMetric::ml_error: return ml_error;
        case SelectionMetric::abs_llr: return std::fabs(llr);
        }
        return std::numeric_limits<double>::quiet_NaN();
    }
};

// True when an index whose metric equals `value` is stored verbatim at
// `threshold` rather than ML-decided. Encoder and decoder must agree on
// this comparison bit for bit, so it lives in exactly one place.
inline bool metric_retains(SelectionMetric m, double value, double threshold)
{
    return m == SelectionMetric::abs_llr ? value <= threshold : value >= threshold;
}

// ---- combining kernels -----------------------------------------------------
//
// The recursion views a block as pairs (a, b) of independent symbols with
// s = a + b mod r. minus_combine gives the law of s; plus_combine the law of
// b once s is known. Outputs are normalized.

// out[s] = sum_c left[(s - c) mod r] * right[c]
void minus_combine(std::span<const double> left, std::span<const double> right,
                   std::span<double> out);

// out[c] proportional to left[(sum - c) mod r] * right[c].
// Throws degeneracy_error when the conditioning event has zero mass.
void plus_combine(std::span<const double> left, std::span<const double> right,
                  Symbol sum, std::span<double> out);

// Min-sum LLR combining. Zero LLRs carry positive sign.
inline double minsum_f(double a, double b)
{
    double m = std::fmin(std::fabs(a), std::fabs(b));
    return ((a < 0.0) != (b < 0.0)) ? -m : m;
}

inline double minsum_g(double a, double b, Symbol u)
{
    return u ? b - a : b + a;
}

// ---- the engine ------------------------------------------------------------

// One successive-cancellation lattice with its working buffers. The same
// object (and therefore the same instruction sequence) serves the encoder's
// guided pass and the decoder's threshold-driven pass; two runs over
// identical inputs yield bit-identical IndexStats. Instances are not
// thread-safe; use one per execution context.
class ScEngine {
public:
    ScEngine(SourceModel model, int n_exp, EngineKind kind);

    int radix() const { return model_.radix(); }
    int n_exp() const { return n_exp_; }
    std::size_t block_size() const { return std::size_t{1} << n_exp_; }
    EngineKind kind() const { return kind_; }
    const SourceModel& model() const { return model_; }

    // Runs one pass over i = 1..N. At each index the feed receives that
    // index's statistics and returns the symbol committed as u_i. Returns
    // the committed symbols in order.
    template <class Feed>
    std::vector<Symbol> run_pass(Feed&& feed)
    {
        const std::size_t n = block_size();
        committed_.clear();
        committed_.reserve(n);
        next_index_ = 1;
        if (kind_ == EngineKind::probability) {
            const int r = radix();
            for (std::size_t j = 0; j < n; ++j)
                for (int k = 0; k < r; ++k)
                    root_prob_[j * r + k] = model_.probs()[k];
            pass_prob(0, root_prob_.data(), out_.data(), n, feed);
        } else {
            const double leaf = std::log(model_.probs()[0] / model_.probs()[1]);
            for (std::size_t j = 0; j < n; ++j)
                root_llr_[j] = leaf;
            pass_llr(0, root_llr_.data(), out_.data(), n, feed);
        }
        return committed_;
    }

private:
    template <class Feed>
    void pass_prob(int level, const double* q, Symbol* out, std::size_t m, Feed& feed)
    {
        const int r = radix();
        if (m == 1) {
            IndexStats st = prob_leaf_stats(q);
            Symbol u = feed(static_cast<const IndexStats&>(st));
            committed_.push_back(u);
            out[0] = u;
            ++next_index_;
            return;
        }
        const std::size_t h = m / 2;
        double* buf = level_bufs_[level];
        for (std::size_t j = 0; j < h; ++j)
            minus_combine({q + j * r, std::size_t(r)}, {q + (j + h) * r, std::size_t(r)},
                          {buf + j * r, std::size_t(r)});
        pass_prob(level + 1, buf, out, h, feed);
        for (std::size_t j = 0; j < h; ++j)
            plus_combine({q + j * r, std::size_t(r)}, {q + (j + h) * r, std::size_t(r)},
                         out[j], {buf + j * r, std::size_t(r)});
        pass_prob(level + 1, buf, out + h, h, feed);
        // partial sums: this node's leaves are (v - w, w)
        for (std::size_t j = 0; j < h; ++j)
            out[j] = static_cast<Symbol>((out[j] + r - out[j + h]) % r);
    }

    template <class Feed>
    void pass_llr(int level, const double* q, Symbol* out, std::size_t m, Feed& feed)
    {
        if (m == 1) {
            IndexStats st;
            st.index = next_index_;
            st.radix = 2;
            st.llr = q[0];
            st.ml_decision = q[0] < 0.0 ? 1 : 0;
            Symbol u = feed(static_cast<const IndexStats&>(st));
            committed_.push_back(u);
            out[0] = u;
            ++next_index_;
            return;
        }
        const std::size_t h = m / 2;
        double* buf = level_bufs_[level];
        for (std::size_t j = 0; j < h; ++j)
            buf[j] = minsum_f(q[j], q[j + h]);
        pass_llr(level + 1, buf, out, h, feed);
        for (std::size_t j = 0; j < h; ++j)
            buf[j] = minsum_g(q[j], q[j + h], out[j]);
        pass_llr(level + 1, buf, out + h, h, feed);
        for (std::size_t j = 0; j < h; ++j)
            out[j] = static_cast<Symbol>(out[j] ^ out[j + h]);
    }

    IndexStats prob_leaf_stats(const double* dist) const;

    SourceModel model_;
    int n_exp_;
    EngineKind kind_;
    std::uint32_t next_index_ = 1;
    std::vector<double> root_prob_;
    std::vector<double> root_llr_;
    std::vector<double> arena_;
    std::vector<double*> level_bufs_;
    std::vector<Symbol> out_;
    std::vector<Symbol> committed_;
};

// ---- guided pass -----------------------------------------------------------

struct GuidedStats {
    std::vector<IndexStats> stats;
    std::vector<std::uint32_t> error_set; // 1-based, ascending
};

// Rate-1 pass over an already-transformed block: every decision is overridden
// by the true u_i. This is the encoder's replay of the decoder. The error set
// collects the indices whose ML decision disagrees with the true symbol.
GuidedStats guided_stats(const SymbolBlock& u, const SourceModel& model, EngineKind kind);

} // namespace polarzip
