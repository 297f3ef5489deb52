// Copyright 2026 The kedge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kedge/types.hpp"

#include <charconv>

namespace kedge {

std::string to_string(BlockId id) { return fmt::format("{}", id); }

std::optional<BlockId> parse_block_id(std::string_view token) {
    if (!token.empty() && (token.front() == 'B' || token.front() == 'b')) {
        token.remove_prefix(1);
    }
    if (token.empty()) return std::nullopt;
    std::uint32_t value = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return BlockId{value};
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(line > 0 ? fmt::format("line {}: {}", line, what) : what), line_(line) {}

UnknownBlockError::UnknownBlockError(BlockId id)
    : Error(fmt::format("unknown block {}", id)), id_(id) {}

}  // namespace kedge
