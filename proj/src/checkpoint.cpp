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

#include "agcn/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace agcn {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMagic = {'A', 'G', 'C', 'N', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v))
    throw CheckpointError("checkpoint truncated");
  return v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const ModelParams& params) {
  const auto& c = params.config;
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.kind));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.layers));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.input_dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.hidden));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.mlp_hidden));
  put<std::uint32_t>(out, c.symmetric_readout ? 1u : 0u);
  put<double>(out, static_cast<double>(c.leaky_slope));
  put<std::uint64_t>(out, c.schema_hash);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.group_count()));
  for (auto card : c.group_cardinalities) put<std::uint32_t>(out, card);
  for (std::size_t g = 0; g < c.group_count(); ++g)
    put<std::uint8_t>(out, c.projects_group(g) ? 1 : 0);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.tensors.size()));
  for (const auto& t : params.tensors) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rows()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.cols()));
    for (auto x : t.data()) put<double>(out, static_cast<double>(x));
  }
  if (!out) throw CheckpointError("failed writing checkpoint");
}

ModelParams read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw CheckpointError("not an AGCN checkpoint (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version));

  ModelConfig c;
  const auto kind = get<std::uint32_t>(in);
  if (kind > static_cast<std::uint32_t>(ModelKind::kConcat))
    throw CheckpointError("unknown model kind " + std::to_string(kind));
  c.kind = static_cast<ModelKind>(kind);
  c.layers = get<std::uint32_t>(in);
  c.input_dim = get<std::uint32_t>(in);
  c.hidden = get<std::uint32_t>(in);
  c.mlp_hidden = get<std::uint32_t>(in);
  c.symmetric_readout = (get<std::uint32_t>(in) & 1u) != 0;
  c.leaky_slope = static_cast<Scalar>(get<double>(in));
  c.schema_hash = get<std::uint64_t>(in);
  const auto groups = get<std::uint32_t>(in);
  constexpr std::uint32_t kSane = 1u << 20;
  if (c.layers > 1024 || c.input_dim > kSane || c.hidden > kSane || c.mlp_hidden > kSane ||
      groups > kSane)
    throw CheckpointError("checkpoint header has implausible dimensions");
  for (std::uint32_t g = 0; g < groups; ++g) c.group_cardinalities.push_back(get<std::uint32_t>(in));
  bool all = true;
  std::vector<bool> mask(groups);
  for (std::uint32_t g = 0; g < groups; ++g) {
    mask[g] = get<std::uint8_t>(in) != 0;
    all = all && mask[g];
  }
  if (!all) c.interaction_groups = std::move(mask);

  ModelParams expected = ModelParams::zeros(c);
  const auto count = get<std::uint32_t>(in);
  if (count != expected.tensors.size())
    throw CheckpointError("checkpoint holds " + std::to_string(count) + " tensors, expected " +
                          std::to_string(expected.tensors.size()));
  for (std::size_t k = 0; k < count; ++k) {
    auto& t = expected.tensors[k];
    const auto rows = get<std::uint32_t>(in);
    const auto cols = get<std::uint32_t>(in);
    if (rows != t.rows() || cols != t.cols())
      throw CheckpointError("tensor " + expected.names[k] + " has wrong shape");
    for (auto& x : t.data()) x = static_cast<Scalar>(get<double>(in));
    if (!t.all_finite()) throw CheckpointError("tensor " + expected.names[k] + " is not finite");
  }
  return expected;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write " + path.string());
  write_checkpoint(out, params);
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  return read_checkpoint(in);
}

ModelParams load_checkpoint(const std::filesystem::path& path, const AttrGroupSchema& schema) {
  auto params = load_checkpoint(path);
  params.config.check_schema(schema);
  return params;
}

}  // namespace agcn
