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

#include "polarzip/bitio.hpp"

#include "polarzip/errors.hpp"

namespace polarzip {

void BitWriter::put(std::uint64_t value, int bits)
{
    if (bits < 0 || bits > 64)
        throw parameter_error("bit field width must be in [0, 64]");
    for (int i = bits - 1; i >= 0; --i) {
        const int used = static_cast<int>(bit_count_ & 7);
        if (used == 0)
            buf_.push_back(0);
        const std::uint8_t bit = static_cast<std::uint8_t>((value >> i) & 1);
        buf_.back() |= static_cast<std::uint8_t>(bit << (7 - used));
        ++bit_count_;
    }
}

void BitWriter::align_zero()
{
    bit_count_ = (bit_count_ + 7) & ~std::size_t{7};
}

std::uint64_t BitReader::get(int bits)
{
    if (bits < 0 || bits > 64)
        throw parameter_error("bit field width must be in [0, 64]");
    if (static_cast<std::size_t>(bits) > bits_left())
        throw malformed_stream("bit field extends past the end of the record", pos_ / 8);
    std::uint64_t v = 0;
    for (int i = 0; i < bits; ++i) {
        const std::uint8_t byte = data_[pos_ >> 3];
        v = (v << 1) | ((byte >> (7 - (pos_ & 7))) & 1);
        ++pos_;
    }
    return v;
}

bool BitReader::rest_is_zero() const
{
    for (std::size_t p = pos_; p < data_.size() * 8; ++p)
        if ((data_[p >> 3] >> (7 - (p & 7))) & 1)
            return false;
    return true;
}

} // namespace polarzip
