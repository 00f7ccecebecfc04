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

#include "agcn/model.hpp"

#include <cmath>
#include <numeric>

#include "agcn/baselines.hpp"
#include "agcn/random.hpp"

namespace agcn {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kAgcn:
      return "agcn";
    case ModelKind::kConcat:
      return "concat";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "agcn") return ModelKind::kAgcn;
  if (name == "concat") return ModelKind::kConcat;
  throw DataError("unknown model kind '" + std::string(name) + "'");
}

ModelConfig ModelConfig::for_graph(const AttributedGraph& g, ModelKind kind) {
  ModelConfig c;
  c.kind = kind;
  c.input_dim = g.node_dim();
  for (const auto& grp : g.schema().groups()) c.group_cardinalities.push_back(grp.cardinality);
  c.schema_hash = g.schema().hash();
  return c;
}

std::size_t ModelConfig::edge_dim() const noexcept {
  return std::accumulate(group_cardinalities.begin(), group_cardinalities.end(), std::size_t{0});
}

void ModelConfig::check_schema(const AttrGroupSchema& schema) const {
  if (schema.hash() != schema_hash)
    throw SchemaMismatch("model was trained on a different attribute schema");
}

std::vector<bool> select_high_frequency_groups(const AttributedGraph& g, double tau) {
  const std::size_t b = g.schema().group_count();
  std::vector<std::size_t> present(b, 0);
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    const auto& attr = g.edge_attr_by_id(e);
    for (std::size_t grp = 0; grp < b; ++grp)
      if (!attr.missing(grp)) ++present[grp];
  }
  std::vector<bool> keep(b);
  const double m = static_cast<double>(std::max<std::size_t>(g.edge_count(), 1));
  for (std::size_t grp = 0; grp < b; ++grp) keep[grp] = present[grp] / m >= tau;
  return keep;
}

namespace {

struct Slot {
  std::string name;
  std::size_t rows, cols;
  enum Init { kGlorot, kZero } init;
};

std::vector<Slot> layout(const ModelConfig& c) {
  if (c.layers < 1) throw DataError("model needs at least one layer");
  if (c.input_dim < 1) throw DataError("model needs node attributes (input_dim >= 1)");
  if (c.hidden < 1 || c.mlp_hidden < 1) throw DataError("hidden widths must be positive");
  std::vector<Slot> s;
  const std::size_t n = c.edge_dim();
  for (std::size_t l = 0; l < c.layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + ".";
    const std::size_t in = c.layer_width(l), out = c.hidden;
    if (c.kind == ModelKind::kAgcn) {
      s.push_back({p + "W_E", n, out, Slot::kGlorot});
      s.push_back({p + "W_V", in, out, Slot::kGlorot});
      s.push_back({p + "W", out, out, Slot::kGlorot});
    } else {
      s.push_back({p + "W_E", n, c.hidden, Slot::kGlorot});
      s.push_back({p + "W", in + c.hidden, out, Slot::kGlorot});
    }
  }
  const std::size_t readout =
      2 * c.hidden + (c.kind == ModelKind::kAgcn ? c.group_count() : std::size_t{0});
  s.push_back({"classifier.C1", readout, c.mlp_hidden, Slot::kGlorot});
  s.push_back({"classifier.c1", 1, c.mlp_hidden, Slot::kZero});
  s.push_back({"classifier.C2", c.mlp_hidden, 1, Slot::kZero});
  s.push_back({"classifier.c2", 1, 1, Slot::kZero});
  return s;
}

}  // namespace

ModelParams ModelParams::initialize(const ModelConfig& config, std::uint64_t seed) {
  ModelParams p;
  p.config = config;
  Rng rng(mix_seed(seed, 0x706172616d73ULL));
  for (const auto& slot : layout(config)) {
    Matrix m(slot.rows, slot.cols);
    if (slot.init == Slot::kGlorot) {
      const double s = std::sqrt(6.0 / static_cast<double>(slot.rows + slot.cols));
      for (auto& x : m.data()) x = static_cast<Scalar>(rng.uniform(-s, s));
    }
    p.tensors.push_back(std::move(m));
    p.names.push_back(slot.name);
  }
  return p;
}

ModelParams ModelParams::zeros(const ModelConfig& config) {
  ModelParams p;
  p.config = config;
  for (const auto& slot : layout(config)) {
    p.tensors.emplace_back(slot.rows, slot.cols);
    p.names.push_back(slot.name);
  }
  return p;
}

std::size_t ModelParams::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.size();
  return n;
}

bool ModelParams::all_finite() const noexcept {
  for (const auto& t : tensors)
    if (!t.all_finite()) return false;
  return true;
}

namespace detail {

OneHotRows edge_onehot(std::span<const EdgeAttr* const> edges, const ModelConfig& config) {
  const std::size_t b = config.group_count();
  std::vector<std::size_t> offset(b, 0);
  for (std::size_t g = 1; g < b; ++g) offset[g] = offset[g - 1] + config.group_cardinalities[g - 1];
  OneHotRows rows;
  rows.cols = config.edge_dim();
  rows.active.resize(edges.size());
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const auto& values = edges[r]->values;
    if (values.size() != b)
      throw SchemaMismatch("edge attribute has " + std::to_string(values.size()) +
                           " groups, model expects " + std::to_string(b));
    for (std::size_t g = 0; g < b; ++g) {
      if (values[g] == EdgeAttr::kMissing || !config.projects_group(g)) continue;
      if (values[g] < 0 || static_cast<std::uint32_t>(values[g]) >= config.group_cardinalities[g])
        throw SchemaMismatch("edge attribute value outside its group");
      rows.active[r].push_back(static_cast<std::uint32_t>(offset[g] + values[g]));
    }
  }
  return rows;
}

LayerPlan plan_layers(const Subgraph& sub, const ModelConfig& config) {
  LayerPlan plan;
  std::vector<const EdgeAttr*> attrs;
  attrs.reserve(sub.edges.size());
  for (const auto& e : sub.edges) attrs.push_back(&e.attr);
  plan.edge_onehot = std::make_shared<OneHotRows>(edge_onehot(attrs, config));

  const std::size_t m = sub.edges.size();
  plan.src.resize(2 * m);
  plan.dst.resize(2 * m);
  plan.edge.resize(2 * m);
  for (std::uint32_t e = 0; e < m; ++e) {
    plan.src[e] = sub.edges[e].u;
    plan.dst[e] = sub.edges[e].v;
    plan.src[m + e] = sub.edges[e].v;
    plan.dst[m + e] = sub.edges[e].u;
    plan.edge[e] = plan.edge[m + e] = e;
  }
  plan.norm.resize(sub.node_count());
  for (std::uint32_t y = 0; y < sub.node_count(); ++y)
    plan.norm[y] = Scalar(1) / static_cast<Scalar>(sub.degree(y) + 1);
  return plan;
}

Var record_classifier(Tape& tape, const ModelConfig& config, Var x, Var c1w, Var c1b, Var c2w,
                      Var c2b) {
  Var h = tape.leaky_relu(tape.add_row(tape.matmul(x, c1w), c1b), config.leaky_slope);
  return tape.add_row(tape.matmul(h, c2w), c2b);
}

}  // namespace detail

namespace {

// V^{l+1} = f( norm ⊙ (V W_V + Σ_x (E_xy W_E) ⊙ (V_x W_V)) W )
Var record_agcn_layer(Tape& tape, const detail::LayerPlan& plan, const ModelConfig& config,
                      Var v, Var w_e, Var w_v, Var w) {
  const std::size_t n = tape.value(v).rows();
  Var projected = tape.matmul(v, w_v);
  Var edge_proj = tape.matmul(plan.edge_onehot, w_e);
  Var messages = tape.hadamard(tape.gather_rows(edge_proj, plan.edge),
                               tape.gather_rows(projected, plan.src));
  Var summed = tape.add(projected, tape.scatter_add_rows(messages, plan.dst, n));
  Var normed = tape.scale_rows(summed, plan.norm);
  return tape.leaky_relu(tape.matmul(normed, w), config.leaky_slope);
}

Var record_readout(Tape& tape, const ModelConfig& config, Var v) {
  if (!config.symmetric_readout) return tape.flatten_rows(v, {0, 1});
  Var a = tape.gather_rows(v, {0});
  Var b = tape.gather_rows(v, {1});
  Var parts[] = {tape.add(a, b), tape.abs(tape.add(a, tape.scale(b, Scalar(-1))))};
  return tape.concat_cols(parts);
}

void check_inputs(const Subgraph& sub, const ModelParams& params, std::span<const Var> vars) {
  if (vars.size() != params.tensors.size())
    throw ShapeMismatch("expected " + std::to_string(params.tensors.size()) +
                        " parameter variables, got " + std::to_string(vars.size()));
  if (sub.node_count() < 2) throw ShapeMismatch("subgraph has no target pair");
  if (sub.node_matrix.cols() != params.config.input_dim)
    throw ShapeMismatch("node matrix has " + std::to_string(sub.node_matrix.cols()) +
                        " columns, model expects " + std::to_string(params.config.input_dim));
}

Var record_agcn(Tape& tape, const ModelParams& params, std::span<const Var> vars,
                const Subgraph& sub, const PathBundle& bundle, ForwardState* state) {
  const auto& c = params.config;
  check_inputs(sub, params, vars);
  const auto plan = detail::plan_layers(sub, c);
  Var v = tape.constant(sub.node_matrix);
  if (state) state->layers.push_back(tape.value(v));
  for (std::size_t l = 0; l < c.layers; ++l) {
    v = record_agcn_layer(tape, plan, c, v, vars[3 * l], vars[3 * l + 1], vars[3 * l + 2]);
    if (state) state->layers.push_back(tape.value(v));
  }
  auto path_vec = path_unit_forward(bundle, c.group_count());
  if (state) state->path_encoding = path_vec;
  Var parts[] = {record_readout(tape, c, v), tape.constant(Matrix::row(std::move(path_vec)))};
  Var x = tape.concat_cols(parts);
  const std::size_t k = 3 * c.layers;
  return detail::record_classifier(tape, c, x, vars[k], vars[k + 1], vars[k + 2], vars[k + 3]);
}

}  // namespace

Matrix interaction_unit_forward(std::span<const Scalar> node_row, const EdgeAttr& edge,
                                const ModelParams& params, std::size_t layer) {
  const auto& c = params.config;
  if (c.kind != ModelKind::kAgcn) throw ShapeMismatch("interaction unit needs AGCN params");
  if (layer >= c.layers) throw ShapeMismatch("layer index out of range");
  if (node_row.size() != c.layer_width(layer))
    throw ShapeMismatch("node row width " + std::to_string(node_row.size()) + ", layer expects " +
                        std::to_string(c.layer_width(layer)));
  const EdgeAttr* attrs[] = {&edge};
  const Matrix edge_proj = matmul(detail::edge_onehot(attrs, c), params.tensors[3 * layer]);
  const Matrix node_proj = matmul(Matrix(1, node_row.size(), {node_row.begin(), node_row.end()}),
                                  params.tensors[3 * layer + 1]);
  return elementwise_mul(edge_proj, node_proj);
}

Matrix gcn_layer_forward(const Subgraph& sub, const Matrix& v, const ModelParams& params,
                         std::size_t layer) {
  const auto& c = params.config;
  if (c.kind != ModelKind::kAgcn) throw ShapeMismatch("gcn_layer_forward needs AGCN params");
  if (layer >= c.layers) throw ShapeMismatch("layer index out of range");
  if (v.rows() != sub.node_count())
    throw ShapeMismatch("embedding rows " + std::to_string(v.rows()) + " != subgraph nodes " +
                        std::to_string(sub.node_count()));
  Tape tape;
  const auto plan = detail::plan_layers(sub, c);
  Var out = record_agcn_layer(tape, plan, c, tape.constant(v),
                              tape.constant(params.tensors[3 * layer]),
                              tape.constant(params.tensors[3 * layer + 1]),
                              tape.constant(params.tensors[3 * layer + 2]));
  return tape.value(out);
}

std::vector<Scalar> encode_path(const PathRecord& path, std::size_t group_count) {
  std::vector<Scalar> bits(group_count, Scalar(0));
  if (path.edge_seq.empty()) return bits;
  for (const auto& e : path.edge_seq)
    if (e.values.size() != group_count)
      throw SchemaMismatch("path edge has " + std::to_string(e.values.size()) +
                           " groups, expected " + std::to_string(group_count));
  const auto& first = path.edge_seq.front().values;
  for (std::size_t g = 0; g < group_count; ++g) {
    if (first[g] == EdgeAttr::kMissing) continue;
    bool agree = true;
    for (const auto& e : path.edge_seq) agree = agree && e.values[g] == first[g];
    bits[g] = agree ? Scalar(1) : Scalar(0);
  }
  return bits;
}

std::vector<Scalar> encode_path(const PathRecord& path, const AttrGroupSchema& schema) {
  return encode_path(path, schema.group_count());
}

std::vector<Scalar> path_unit_forward(const PathBundle& bundle, std::size_t group_count) {
  std::vector<Scalar> sum(group_count, Scalar(0));
  for (const auto& p : bundle.paths) {
    auto bits = encode_path(p, group_count);
    for (std::size_t g = 0; g < group_count; ++g) sum[g] += bits[g];
  }
  return sum;
}

Var record_logit(Tape& tape, const ModelParams& params, std::span<const Var> vars,
                 const Subgraph& sub, const PathBundle& bundle, ForwardState* state) {
  if (params.config.kind == ModelKind::kConcat)
    return record_concat_logit(tape, params, vars, sub, state);
  return record_agcn(tape, params, vars, sub, bundle, state);
}

ForwardState forward(const Subgraph& sub, const PathBundle& bundle, const ModelParams& params) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(params.tensors.size());
  for (const auto& t : params.tensors) vars.push_back(tape.constant(t));
  ForwardState state;
  Var logit = record_logit(tape, params, vars, sub, bundle, &state);
  state.logit = tape.value(logit)(0, 0);
  state.probability = tape.value(tape.sigmoid(logit))(0, 0);
  return state;
}

}  // namespace agcn
