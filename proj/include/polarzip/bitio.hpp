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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace polarzip {

// MSB-first bit packing over a growable byte buffer.
class BitWriter {
public:
    // Appends the low `bits` bits of value, most significant first. bits <= 64.
    void put(std::uint64_t value, int bits);

    // Zero-pads to the next byte boundary.
    void align_zero();

    std::size_t bit_count() const { return bit_count_; }
    const std::vector<std::uint8_t>& bytes() const { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
    std::size_t bit_count_ = 0;
};

// MSB-first bit reader; throws malformed_stream on overrun.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> bytes) : data_(bytes) {}

    std::uint64_t get(int bits);

    std::size_t bit_pos() const { return pos_; }
    std::size_t bits_left() const { return data_.size() * 8 - pos_; }

    // True when every remaining bit is zero (valid padding).
    bool rest_is_zero() const;

private:
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

} // namespace polarzip
