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

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace kedge {

using Bytes = std::uint64_t;
using Cycles = std::uint64_t;

/// Label of a basic block. Printed as `B<n>`.
enum class BlockId : std::uint32_t {};

constexpr std::uint32_t to_underlying(BlockId id) noexcept {
    return static_cast<std::uint32_t>(id);
}

std::string to_string(BlockId id);

/// Accepts `B<n>`, `b<n>` or a bare non-negative integer.
std::optional<BlockId> parse_block_id(std::string_view token);

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed input text; carries the 1-based line number (0 if unknown).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownBlockError : public Error {
public:
    explicit UnknownBlockError(BlockId id);
    BlockId block() const noexcept { return id_; }

private:
    BlockId id_;
};

/// The memory cap cannot be honoured.
class InfeasibleCapError : public Error {
public:
    using Error::Error;
};

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Configuration values out of their domain.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kedge

template <>
struct fmt::formatter<kedge::BlockId> : fmt::formatter<std::string_view> {
    template <typename FormatContext>
    auto format(kedge::BlockId id, FormatContext& ctx) const {
        return fmt::format_to(ctx.out(), "B{}", kedge::to_underlying(id));
    }
};
