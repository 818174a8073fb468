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

#include "polarzip/container.hpp"

#include <bit>
#include <cmath>
#include <cstring>

#include "polarzip/bitio.hpp"
#include "polarzip/errors.hpp"
#include "polarzip/threading.hpp"

namespace polarzip {

namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'Z', 'C', '1'};

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64le(std::vector<std::uint8_t>& out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32le(std::span<const std::uint8_t> bytes, std::size_t& offset)
{
    if (offset + 4 > bytes.size())
        throw malformed_stream("truncated 32-bit field", offset);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
    offset += 4;
    return v;
}

std::uint64_t get_u64le(std::span<const std::uint8_t> bytes, std::size_t& offset)
{
    if (offset + 8 > bytes.size())
        throw malformed_stream("truncated 64-bit field", offset);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(bytes[offset + i]) << (8 * i);
    offset += 8;
    return v;
}

std::uint8_t get_u8(std::span<const std::uint8_t> bytes, std::size_t& offset)
{
    if (offset >= bytes.size())
        throw malformed_stream("truncated byte field", offset);
    return bytes[offset++];
}

int width_for(std::uint32_t max_value)
{
    return std::bit_width(max_value);
}

} // namespace

int symbol_bits(int radix) { return width_for(static_cast<std::uint32_t>(radix - 1)); }

int index_bits(int n_exp) { return n_exp; }

int count_bits(int n_exp) { return n_exp + 1; }

int delta_bits(int radix)
{
    return radix > 2 ? width_for(static_cast<std::uint32_t>(radix - 2)) : 0;
}

int correction_record_bits(int n_exp, int radix)
{
    return index_bits(n_exp) + delta_bits(radix);
}

bool fixed_block_supported(int n_exp, int radix)
{
    return n_exp >= 1 && correction_record_bits(n_exp, radix) >= 8;
}

std::size_t fixed_body_bytes(const FixedEncoding& enc, int n_exp, int radix)
{
    const std::size_t bits = static_cast<std::size_t>(count_bits(n_exp)) +
                             enc.payload.size() * static_cast<std::size_t>(symbol_bits(radix)) +
                             enc.corrections.size() *
                                 static_cast<std::size_t>(correction_record_bits(n_exp, radix));
    return (bits + 7) / 8;
}

std::size_t adaptive_body_bytes(const AdaptiveEncoding& enc, int n_exp, int radix)
{
    if (!enc.threshold)
        return 8;
    const std::size_t bits = 64 + static_cast<std::size_t>(count_bits(n_exp)) +
                             enc.payload.size() * static_cast<std::size_t>(symbol_bits(radix));
    return (bits + 7) / 8;
}

// ---- fixed block ------------------------------------------------------------

std::vector<std::uint8_t> write_block_fixed(const FixedEncoding& enc, int n_exp, int radix)
{
    const std::uint64_t n = std::uint64_t{1} << n_exp;
    if (!fixed_block_supported(n_exp, radix))
        throw parameter_error(
            "fixed block records need correction records of at least 8 bits; "
            "increase the block size");
    if (enc.g_count != enc.payload.size())
        throw parameter_error("g_count disagrees with the payload length");
    if (enc.g_count > n)
        throw parameter_error("retained count exceeds the block size");

    BitWriter w;
    w.put(enc.g_count, count_bits(n_exp));
    for (Symbol s : enc.payload) {
        if (s >= radix)
            throw parameter_error("payload symbol out of alphabet range");
        w.put(s, symbol_bits(radix));
    }
    std::uint32_t prev = 0;
    for (const Correction& c : enc.corrections) {
        if (c.index < 1 || c.index > n)
            throw parameter_error("correction index out of range");
        if (c.index <= prev)
            throw parameter_error("correction indices must be strictly increasing");
        if (c.delta < 1 || c.delta >= radix)
            throw parameter_error("correction delta out of range");
        prev = c.index;
        w.put(c.index - 1, index_bits(n_exp));
        if (radix > 2)
            w.put(static_cast<std::uint32_t>(c.delta - 1), delta_bits(radix));
    }
    w.align_zero();

    std::vector<std::uint8_t> record;
    const auto& body = w.bytes();
    put_u32le(record, static_cast<std::uint32_t>(body.size()));
    record.insert(record.end(), body.begin(), body.end());
    return record;
}

FixedEncoding parse_block_fixed_at(std::span<const std::uint8_t> bytes, std::size_t& offset,
                                   int n_exp, int radix)
{
    const std::uint64_t n = std::uint64_t{1} << n_exp;
    if (!fixed_block_supported(n_exp, radix))
        throw parameter_error("unsupported fixed block geometry");
    const std::size_t record_start = offset;
    const std::uint32_t body_len = get_u32le(bytes, offset);
    if (offset + body_len > bytes.size())
        throw malformed_stream("block body extends past the end of the stream", record_start);
    BitReader r(bytes.subspan(offset, body_len));

    FixedEncoding enc;
    enc.g_count = static_cast<std::uint32_t>(r.get(count_bits(n_exp)));
    if (enc.g_count > n)
        throw malformed_stream("retained count exceeds the block size", record_start);
    if (r.bits_left() < enc.g_count * static_cast<std::size_t>(symbol_bits(radix)))
        throw malformed_stream("block body truncated inside the payload", record_start);
    enc.payload.reserve(enc.g_count);
    for (std::uint32_t i = 0; i < enc.g_count; ++i) {
        const std::uint64_t s = r.get(symbol_bits(radix));
        if (s >= static_cast<std::uint64_t>(radix))
            throw malformed_stream("payload symbol out of alphabet range", record_start);
        enc.payload.push_back(static_cast<Symbol>(s));
    }

    const int rec_bits = correction_record_bits(n_exp, radix);
    const std::size_t corrections = r.bits_left() / static_cast<std::size_t>(rec_bits);
    std::uint32_t prev = 0;
    enc.corrections.reserve(corrections);
    for (std::size_t i = 0; i < corrections; ++i) {
        const std::uint32_t index = static_cast<std::uint32_t>(r.get(index_bits(n_exp))) + 1;
        Symbol delta = 1;
        if (radix > 2) {
            const std::uint64_t d = r.get(delta_bits(radix)) + 1;
            if (d >= static_cast<std::uint64_t>(radix))
                throw malformed_stream("correction delta out of range", record_start);
            delta = static_cast<Symbol>(d);
        }
        if (index <= prev)
            throw malformed_stream("correction indices out of order", record_start);
        prev = index;
        enc.corrections.push_back({index, delta});
    }
    if (!r.rest_is_zero())
        throw malformed_stream("nonzero padding bits in block body", record_start);

    offset += body_len;
    return enc;
}

FixedEncoding parse_block_fixed(std::span<const std::uint8_t> record, int n_exp, int radix)
{
    std::size_t offset = 0;
    FixedEncoding enc = parse_block_fixed_at(record, offset, n_exp, radix);
    if (offset != record.size())
        throw malformed_stream("trailing bytes after block record", offset);
    return enc;
}

// ---- adaptive block ---------------------------------------------------------

std::vector<std::uint8_t> write_block_adaptive(const AdaptiveEncoding& enc, int n_exp, int radix)
{
    const std::uint64_t n = std::uint64_t{1} << n_exp;
    if (n_exp < 1)
        throw parameter_error("adaptive block records require n_exp >= 1");
    BitWriter w;
    if (!enc.threshold) {
        if (!enc.payload.empty())
            throw parameter_error("sentinel threshold with a nonempty payload");
        w.put(kThresholdSentinelBits, 64);
    } else {
        const std::uint64_t pattern = std::bit_cast<std::uint64_t>(*enc.threshold);
        if (pattern == kThresholdSentinelBits)
            throw parameter_error("threshold collides with the sentinel bit pattern");
        if (enc.payload.size() > n)
            throw parameter_error("payload exceeds the block size");
        w.put(pattern, 64);
        w.put(enc.payload.size(), count_bits(n_exp));
        for (Symbol s : enc.payload) {
            if (s >= radix)
                throw parameter_error("payload symbol out of alphabet range");
            w.put(s, symbol_bits(radix));
        }
    }
    w.align_zero();

    std::vector<std::uint8_t> record;
    const auto& body = w.bytes();
    put_u32le(record, static_cast<std::uint32_t>(body.size()));
    record.insert(record.end(), body.begin(), body.end());
    return record;
}

AdaptiveEncoding parse_block_adaptive_at(std::span<const std::uint8_t> bytes,
                                         std::size_t& offset, int n_exp, int radix)
{
    const std::uint64_t n = std::uint64_t{1} << n_exp;
    const std::size_t record_start = offset;
    const std::uint32_t body_len = get_u32le(bytes, offset);
    if (offset + body_len > bytes.size())
        throw malformed_stream("block body extends past the end of the stream", record_start);
    BitReader r(bytes.subspan(offset, body_len));

    AdaptiveEncoding enc;
    const std::uint64_t pattern = r.get(64);
    if (pattern == kThresholdSentinelBits) {
        if (!r.rest_is_zero())
            throw malformed_stream("trailing data after sentinel threshold", record_start);
        offset += body_len;
        return enc;
    }
    const double threshold = std::bit_cast<double>(pattern);
    if (!std::isfinite(threshold))
        throw malformed_stream("threshold is not a finite value", record_start);
    enc.threshold = threshold;
    const std::uint64_t count = r.get(count_bits(n_exp));
    if (count > n)
        throw malformed_stream("payload count exceeds the block size", record_start);
    if (r.bits_left() < count * static_cast<std::uint64_t>(symbol_bits(radix)))
        throw malformed_stream("block body truncated inside the payload", record_start);
    enc.payload.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t s = r.get(symbol_bits(radix));
        if (s >= static_cast<std::uint64_t>(radix))
            throw malformed_stream("payload symbol out of alphabet range", record_start);
        enc.payload.push_back(static_cast<Symbol>(s));
    }
    if (!r.rest_is_zero())
        throw malformed_stream("nonzero padding bits in block body", record_start);

    offset += body_len;
    return enc;
}

AdaptiveEncoding parse_block_adaptive(std::span<const std::uint8_t> record, int n_exp, int radix)
{
    std::size_t offset = 0;
    AdaptiveEncoding enc = parse_block_adaptive_at(record, offset, n_exp, radix);
    if (offset != record.size())
        throw malformed_stream("trailing bytes after block record", offset);
    return enc;
}

// ---- file header ------------------------------------------------------------

std::vector<std::uint8_t> write_header(const FileHeader& header)
{
    std::vector<std::uint8_t> out;
    out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
    out.push_back(kFormatVersion);
    out.push_back(static_cast<std::uint8_t>(header.radix));
    out.push_back(static_cast<std::uint8_t>(header.n_exp));
    out.push_back(static_cast<std::uint8_t>(header.scheme));
    out.push_back(static_cast<std::uint8_t>(header.engine));
    out.push_back(static_cast<std::uint8_t>(header.metric));
    for (double p : header.probs)
        put_u64le(out, std::bit_cast<std::uint64_t>(p));
    put_u64le(out, std::bit_cast<std::uint64_t>(header.threshold));
    put_u64le(out, header.total_symbols);
    put_u32le(out, header.block_count);
    return out;
}

FileHeader parse_header(std::span<const std::uint8_t> bytes, std::size_t& offset)
{
    FileHeader h;
    for (int i = 0; i < 4; ++i)
        if (get_u8(bytes, offset) != kMagic[i])
            throw malformed_stream("bad magic; not a polarzip container", 0);
    if (get_u8(bytes, offset) != kFormatVersion)
        throw malformed_stream("unsupported container version", 4);
    h.radix = get_u8(bytes, offset);
    h.n_exp = get_u8(bytes, offset);
    if (!is_prime(h.radix))
        throw malformed_stream("container radix is not prime", 5);
    if (h.n_exp < 1 || h.n_exp > 22)
        throw malformed_stream("container block size out of range", 6);
    const std::uint8_t scheme = get_u8(bytes, offset);
    if (scheme > 1)
        throw malformed_stream("unknown scheme identifier", 7);
    h.scheme = static_cast<SchemeKind>(scheme);
    const std::uint8_t engine = get_u8(bytes, offset);
    if (engine > 1)
        throw malformed_stream("unknown engine identifier", 8);
    h.engine = static_cast<EngineKind>(engine);
    const std::uint8_t metric = get_u8(bytes, offset);
    if (metric > 2)
        throw malformed_stream("unknown metric identifier", 9);
    h.metric = static_cast<SelectionMetric>(metric);
    if (!metric_compatible(h.metric, h.engine))
        throw malformed_stream("metric is incompatible with the engine", 9);

    h.probs.resize(h.radix);
    for (int k = 0; k < h.radix; ++k)
        h.probs[k] = std::bit_cast<double>(get_u64le(bytes, offset));
    h.threshold = std::bit_cast<double>(get_u64le(bytes, offset));
    h.total_symbols = get_u64le(bytes, offset);
    h.block_count = get_u32le(bytes, offset);

    const std::uint64_t n = std::uint64_t{1} << h.n_exp;
    if (h.block_count == 0) {
        if (h.total_symbols != 0)
            throw malformed_stream("symbol count without blocks", offset);
    } else {
        const std::uint64_t hi = static_cast<std::uint64_t>(h.block_count) * n;
        const std::uint64_t lo = (static_cast<std::uint64_t>(h.block_count) - 1) * n;
        if (!(h.total_symbols <= hi && h.total_symbols > lo))
            throw malformed_stream("symbol count inconsistent with block count", offset);
    }
    return h;
}

// ---- raw bytes <-> symbols ----------------------------------------------------

std::vector<Symbol> bytes_to_symbols(std::span<const std::uint8_t> raw, int radix)
{
    std::vector<Symbol> symbols;
    if (radix == 2) {
        symbols.reserve(raw.size() * 8);
        for (std::uint8_t byte : raw)
            for (int b = 7; b >= 0; --b)
                symbols.push_back(static_cast<Symbol>((byte >> b) & 1));
    } else {
        symbols.reserve(raw.size());
        for (std::uint8_t byte : raw) {
            if (byte >= radix)
                throw parameter_error("input byte " + std::to_string(byte) +
                                      " is not a symbol of the radix-" +
                                      std::to_string(radix) + " alphabet");
            symbols.push_back(static_cast<Symbol>(byte));
        }
    }
    return symbols;
}

std::vector<std::uint8_t> symbols_to_bytes(std::span<const Symbol> symbols, int radix)
{
    std::vector<std::uint8_t> raw;
    if (radix == 2) {
        raw.assign((symbols.size() + 7) / 8, 0);
        for (std::size_t i = 0; i < symbols.size(); ++i)
            if (symbols[i])
                raw[i >> 3] |= static_cast<std::uint8_t>(1u << (7 - (i & 7)));
    } else {
        raw.assign(symbols.begin(), symbols.end());
    }
    return raw;
}

// ---- whole files ---------------------------------------------------------------

CompressResult compress_bytes(std::span<const std::uint8_t> raw, const SourceModel& model,
                              int n_exp, SchemeKind scheme, EngineKind engine,
                              SelectionMetric metric, double threshold)
{
    if (n_exp < 1 || n_exp > 20)
        throw parameter_error("block exponent must be in [1, 20]");
    if (!metric_compatible(metric, engine))
        throw parameter_error("selection metric is incompatible with the engine kind");
    if (scheme == SchemeKind::fixed) {
        if (!std::isfinite(threshold))
            throw parameter_error("fixed scheme requires a finite threshold");
        if (!fixed_block_supported(n_exp, model.radix()))
            throw parameter_error("block size too small for the fixed container format");
    }

    const std::uint64_t n = std::uint64_t{1} << n_exp;
    std::vector<Symbol> symbols = bytes_to_symbols(raw, model.radix());

    CompressResult result;
    result.total_symbols = symbols.size();
    const std::uint64_t blocks = (symbols.size() + n - 1) / n;
    if (blocks > 0xFFFFFFFFull)
        throw parameter_error("input needs more blocks than the container can index");
    result.block_count = static_cast<std::uint32_t>(blocks);

    // pad the tail block with the most probable symbol
    symbols.resize(blocks * n, model.most_probable());

    std::vector<std::vector<std::uint8_t>> records(blocks);
    std::vector<double> rates(blocks, 0.0);
    std::vector<std::uint64_t> bits(blocks, 0);
    parallel_chunks(blocks, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t b = begin; b < end; ++b) {
            SymbolBlock x;
            x.radix = model.radix();
            x.n_exp = n_exp;
            x.symbols.assign(symbols.begin() + static_cast<std::ptrdiff_t>(b * n),
                             symbols.begin() + static_cast<std::ptrdiff_t>((b + 1) * n));
            if (scheme == SchemeKind::fixed) {
                const FixedEncoding enc = encode_fixed(x, model, engine, metric, threshold);
                records[b] = write_block_fixed(enc, n_exp, model.radix());
                rates[b] = rate_of(enc, n_exp, model.radix()).analytic_rate;
            } else {
                const AdaptiveEncoding enc = encode_adaptive(x, model, engine, metric);
                records[b] = write_block_adaptive(enc, n_exp, model.radix());
            }
            bits[b] = 8 * (records[b].size() - 4);
        }
    });

    FileHeader header;
    header.radix = model.radix();
    header.n_exp = n_exp;
    header.scheme = scheme;
    header.engine = engine;
    header.metric = metric;
    header.probs = model.probs();
    header.threshold = scheme == SchemeKind::fixed ? threshold : 0.0;
    header.total_symbols = result.total_symbols;
    header.block_count = result.block_count;

    result.bytes = write_header(header);
    for (std::uint64_t b = 0; b < blocks; ++b) {
        result.bytes.insert(result.bytes.end(), records[b].begin(), records[b].end());
        result.container_bits += bits[b];
        result.sum_analytic_rate += rates[b];
    }
    return result;
}

std::vector<std::uint8_t> decompress_bytes(std::span<const std::uint8_t> container)
{
    std::size_t offset = 0;
    const FileHeader header = parse_header(container, offset);

    SourceModel model = [&] {
        try {
            return SourceModel(header.probs);
        } catch (const parameter_error& e) {
            throw malformed_stream(std::string("container model is invalid: ") + e.what(), 10);
        }
    }();

    const std::uint64_t n = std::uint64_t{1} << header.n_exp;
    std::vector<Symbol> symbols;
    symbols.reserve(header.block_count * n);
    for (std::uint32_t b = 0; b < header.block_count; ++b) {
        try {
            SymbolBlock x = header.scheme == SchemeKind::fixed
                                ? decode_fixed(parse_block_fixed_at(container, offset,
                                                                    header.n_exp, header.radix),
                                               header.n_exp, model, header.engine, header.metric,
                                               header.threshold)
                                : decode_adaptive(parse_block_adaptive_at(container, offset,
                                                                          header.n_exp,
                                                                          header.radix),
                                                  header.n_exp, model, header.engine,
                                                  header.metric);
            symbols.insert(symbols.end(), x.symbols.begin(), x.symbols.end());
        } catch (const malformed_stream& e) {
            throw malformed_stream("block " + std::to_string(b) + ": " + e.what());
        } catch (const degeneracy_error& e) {
            throw malformed_stream("block " + std::to_string(b) +
                                   ": impossible conditioning while decoding (" + e.what() + ")");
        } catch (const parameter_error& e) {
            throw malformed_stream("block " + std::to_string(b) +
                                   ": container parameters are unusable (" + e.what() + ")");
        }
    }
    if (offset != container.size())
        throw malformed_stream("trailing bytes after the final block", offset);

    symbols.resize(header.total_symbols); // drop tail padding
    return symbols_to_bytes(symbols, header.radix);
}

} // namespace polarzip
