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

#include "kedge/types.hpp"

namespace kedge {

/// Cycle prices of the overlay machinery. All zero means "free".
struct CostModel {
    Cycles decomp_base = 0;
    Cycles decomp_per_byte = 0;  ///< per compressed byte
    Cycles exception_cycles = 0;  ///< demand-miss handler entry
    Cycles patch_cycles = 0;      ///< per branch patch or un-patch
    Cycles compress_cycles = 0;   ///< per deleted decompressed copy

    Cycles decompression_latency(Bytes compressed_size) const noexcept {
        return decomp_base + decomp_per_byte * compressed_size;
    }

    friend bool operator==(const CostModel&, const CostModel&) = default;
};

}  // namespace kedge
