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
#include <limits>
#include <optional>
#include <vector>

#include "polarzip/sc_engine.hpp"
#include "polarzip/source_model.hpp"
#include "polarzip/symbol_block.hpp"

namespace polarzip {

// ---- adaptive scheme -------------------------------------------------------
//
// The encoder replays the decoder, takes the boundary metric value over the
// indices the decoder would get wrong, and stores every symbol on the retain
// side of that threshold. The decoder reconstructs the retained set on the
// fly by recomputing the same metrics.

struct AdaptiveEncoding {
    // nullopt is the empty-error-set sentinel: nothing is retained and the
    // payload is empty.
    std::optional<double> threshold;
    std::vector<Symbol> payload; // retained symbols in index order
};

AdaptiveEncoding encode_adaptive(const SymbolBlock& x, const SourceModel& model,
                                 EngineKind kind, SelectionMetric metric);

SymbolBlock decode_adaptive(const AdaptiveEncoding& enc, int n_exp,
                            const SourceModel& model, EngineKind kind,
                            SelectionMetric metric);

// ---- fixed-threshold scheme ------------------------------------------------

struct Correction {
    std::uint32_t index = 0; // 1-based, strictly increasing across the list
    Symbol delta = 0;        // in [1, r-1]; the decoder adds it modulo r

    friend bool operator==(const Correction&, const Correction&) = default;
};

struct FixedEncoding {
    std::uint32_t g_count = 0;            // number of retained indices
    std::vector<Symbol> payload;          // size g_count, in index order
    std::vector<Correction> corrections;  // erroneous indices outside the retained set

    friend bool operator==(const FixedEncoding&, const FixedEncoding&) = default;
};

// Threshold minimizing the fixed-scheme rate for the ML-error metric:
// 1 / (log_r N + log_r(r-1)). For r = 2 the second term vanishes.
double default_ml_error_threshold(int n_exp, int radix);

enum class LlrThresholdMap {
    exact,        // |g| = ln((1-eps)/eps), the standard eps <-> |LLR| map
    log_quotient, // |g| = |ln(1-eps)/ln(eps)|
};

// An ML-error threshold expressed on the |LLR| scale. Requires 0 < eps < 0.5.
double llr_threshold_from_ml_error(double eps, LlrThresholdMap map = LlrThresholdMap::exact);

// Binary-alphabet entropy equivalent of an ML-error threshold (bits).
double entropy_threshold_from_ml_error(double eps);

FixedEncoding encode_fixed(const SymbolBlock& x, const SourceModel& model,
                           EngineKind kind, SelectionMetric metric, double threshold);

SymbolBlock decode_fixed(const FixedEncoding& enc, int n_exp, const SourceModel& model,
                         EngineKind kind, SelectionMetric metric, double threshold);

// ---- rate accounting -------------------------------------------------------

struct RateReport {
    double analytic_rate = 0.0; // base-r symbols per source symbol
    std::uint64_t container_bits = 0; // 8 x serialized body length
    std::uint32_t g_count = 0;
    std::uint32_t correction_count = 0;
    double source_entropy = std::numeric_limits<double>::quiet_NaN(); // base r
};

RateReport rate_of(const FixedEncoding& enc, int n_exp, int radix);
RateReport rate_of(const FixedEncoding& enc, int n_exp, const SourceModel& model);

// ---- fixed-length truncation ----------------------------------------------
//
// Truncating the variable-length output to a budget of floor(N * R) symbols
// turns the scheme into a fixed-length one: blocks whose analytic rate
// exceeds R become undecodable, everything else decodes as before.

struct TruncationResult {
    bool decodable = false;
    std::uint64_t word_symbols = 0;        // floor(N * R)
    std::optional<FixedEncoding> content;  // present when decodable
};

TruncationResult truncate_to_rate(const FixedEncoding& enc, int n_exp, int radix,
                                  double rate_budget);

} // namespace polarzip
