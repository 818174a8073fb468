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
#include <stdexcept>
#include <string>

namespace polarzip {

// Invalid user-supplied parameter or argument combination. CLI exit code 1.
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Corrupted, truncated or internally inconsistent encoded stream.
// CLI exit code 2.
class malformed_stream : public std::runtime_error {
public:
    static constexpr std::size_t no_offset = static_cast<std::size_t>(-1);

    explicit malformed_stream(const std::string& what, std::size_t byte_offset = no_offset)
        : std::runtime_error(byte_offset == no_offset
                                 ? what
                                 : what + " (byte offset " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset)
    {
    }

    std::size_t byte_offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Conditioning on an event of zero probability mass.
class degeneracy_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace polarzip
