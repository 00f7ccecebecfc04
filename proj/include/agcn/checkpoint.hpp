// Copyright 2026 The AGCN Authors
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

#include <filesystem>
#include <iosfwd>

#include "agcn/model.hpp"

namespace agcn {

/// Binary checkpoint layout (little-endian):
///   magic "AGCNCKPT", u32 version, u32 model kind, u32 layers, u32 input_dim,
///   u32 hidden, u32 mlp_hidden, u32 flags (bit 0: symmetric readout),
///   f64 leaky slope, u64 schema hash, u32 group count, u32 cardinality per
///   group, u8 interaction mask per group (empty mask stored as all ones),
///   u32 tensor count, then per tensor u32 rows, u32 cols and rows*cols f64
///   values in ModelParams order.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const ModelParams& params);
ModelParams read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);
/// Loads and verifies the checkpoint was trained on `schema`.
ModelParams load_checkpoint(const std::filesystem::path& path, const AttrGroupSchema& schema);

}  // namespace agcn
