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
#include <span>
#include <vector>

#include "polarzip/codec.hpp"
#include "polarzip/source_model.hpp"

namespace polarzip {

enum class SchemeKind : std::uint8_t { fixed = 0, adaptive = 1 };

inline constexpr std::uint8_t kFormatVersion = 1;
inline constexpr std::uint64_t kThresholdSentinelBits = 0xFFFFFFFFFFFFFFFFULL;

// ---- field widths (bits) ---------------------------------------------------

int symbol_bits(int radix);                       // ceil(log2 r)
int index_bits(int n_exp);                        // ceil(log2 N) = n_exp
int count_bits(int n_exp);                        // ceil(log2(N+1)) = n_exp + 1
int delta_bits(int radix);                        // ceil(log2(r-1)), r > 2 only
int correction_record_bits(int n_exp, int radix); // index field + delta field

// The correction count of a fixed block is implied by the remaining body
// length, which is unambiguous only while a correction record is at least
// one byte wide. Geometries below that are rejected by the writer.
bool fixed_block_supported(int n_exp, int radix);

std::size_t fixed_body_bytes(const FixedEncoding& enc, int n_exp, int radix);
std::size_t adaptive_body_bytes(const AdaptiveEncoding& enc, int n_exp, int radix);

// ---- block records ----------------------------------------------------------
//
// A record is a 4-byte little-endian body length followed by the body.
// Fixed body, MSB-first: g_count in ceil(log2(N+1)) bits, the retained
// symbols in ceil(log2 r) bits each, then correction records of
// (index-1, delta-1) fields; the record count is implied by the remaining
// length. Adaptive body: the threshold's 64-bit pattern (all ones reserved
// for the empty sentinel, in which case the body ends there), then the
// payload count in ceil(log2(N+1)) bits and the packed payload symbols.
// Padding bits to the byte boundary are zero.

std::vector<std::uint8_t> write_block_fixed(const FixedEncoding& enc, int n_exp, int radix);
FixedEncoding parse_block_fixed(std::span<const std::uint8_t> record, int n_exp, int radix);

std::vector<std::uint8_t> write_block_adaptive(const AdaptiveEncoding& enc, int n_exp, int radix);
AdaptiveEncoding parse_block_adaptive(std::span<const std::uint8_t> record, int n_exp, int radix);

// Stream variants: parse one record starting at `offset` and advance it.
FixedEncoding parse_block_fixed_at(std::span<const std::uint8_t> bytes, std::size_t& offset,
                                   int n_exp, int radix);
AdaptiveEncoding parse_block_adaptive_at(std::span<const std::uint8_t> bytes, std::size_t& offset,
                                         int n_exp, int radix);

// ---- file header -------------------------------------------------------------

struct FileHeader {
    int radix = 2;
    int n_exp = 0;
    SchemeKind scheme = SchemeKind::fixed;
    EngineKind engine = EngineKind::probability;
    SelectionMetric metric = SelectionMetric::ml_error;
    std::vector<double> probs;
    double threshold = 0.0; // fixed scheme; zero (unused) for adaptive
    std::uint64_t total_symbols = 0;
    std::uint32_t block_count = 0;
};

std::vector<std::uint8_t> write_header(const FileHeader& header);
FileHeader parse_header(std::span<const std::uint8_t> bytes, std::size_t& offset);

// ---- raw bytes <-> symbols ---------------------------------------------------
//
// r = 2: each input byte is 8 symbols, MSB first. r > 2: one symbol per byte
// with values in [0, r).

std::vector<Symbol> bytes_to_symbols(std::span<const std::uint8_t> raw, int radix);
std::vector<std::uint8_t> symbols_to_bytes(std::span<const Symbol> symbols, int radix);

// ---- whole files -------------------------------------------------------------

struct CompressResult {
    std::vector<std::uint8_t> bytes;
    std::uint32_t block_count = 0;
    std::uint64_t total_symbols = 0;
    std::uint64_t container_bits = 0;       // sum of block body bits
    double sum_analytic_rate = 0.0;         // fixed scheme only
};

// Splits the input into blocks of 2^n_exp symbols (the final block padded
// with the model's most probable symbol) and encodes each one. Blocks are
// processed concurrently; output bytes are identical regardless of the
// thread budget.
CompressResult compress_bytes(std::span<const std::uint8_t> raw, const SourceModel& model,
                              int n_exp, SchemeKind scheme, EngineKind engine,
                              SelectionMetric metric, double threshold);

std::vector<std::uint8_t> decompress_bytes(std::span<const std::uint8_t> container);

} // namespace polarzip
