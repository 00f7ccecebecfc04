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

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <string_view>
#include <unordered_set>

#include "agcn/graph.hpp"

namespace agcn {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::ifstream open_input(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot open " + p.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

bool skip_line(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

GraphFiles GraphFiles::in_directory(const std::filesystem::path& dir) {
  return {dir / "schema.tsv", dir / "nodes.tsv", dir / "edges.tsv"};
}

AttrGroupSchema read_schema(const std::filesystem::path& schema_file) {
  auto in = open_input(schema_file);
  const std::string fname = schema_file.string();
  std::vector<AttrGroupSchema::Group> groups;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    auto fields = split(line, '\t');
    std::uint32_t card = 0;
    if (fields.size() != 2 || trim(fields[0]).empty() || !parse_number(fields[1], card) ||
        card == 0)
      throw ParseError(fname, lineno, "expected 'group_name<TAB>cardinality'");
    groups.push_back({std::string(trim(fields[0])), card});
  }
  try {
    return AttrGroupSchema(std::move(groups));
  } catch (const SchemaMismatch& e) {
    throw ParseError(fname, lineno, e.what());
  }
}

AttributedGraph ingest(const GraphFiles& files, IngestReport* report) {
  AttrGroupSchema schema = read_schema(files.schema);

  std::vector<std::optional<NodeAttr>> slots;
  {
    auto in = open_input(files.nodes);
    const std::string fname = files.nodes.string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (skip_line(line)) continue;
      auto fields = split(line, '\t');
      NodeId id = 0;
      if (fields.size() > 2 || !parse_number(fields[0], id))
        throw ParseError(fname, lineno, "expected 'node_id<TAB>dim:weight,...'");
      NodeAttr attr;
      if (fields.size() == 2 && !trim(fields[1]).empty()) {
        for (auto item : split(trim(fields[1]), ',')) {
          auto kv = split(item, ':');
          std::uint32_t dim = 0;
          double w = 0;
          if (kv.size() != 2 || !parse_number(kv[0], dim) || !parse_number(kv[1], w))
            throw ParseError(fname, lineno, "bad attribute entry '" + std::string(item) + "'");
          if (!attr.entries.empty() && dim <= attr.entries.back().first)
            throw ParseError(fname, lineno, "attribute dimensions must be strictly increasing");
          attr.entries.emplace_back(dim, w);
        }
      }
      if (id >= slots.size()) slots.resize(std::size_t{id} + 1);
      if (slots[id]) throw ParseError(fname, lineno, "node " + std::to_string(id) + " repeated");
      slots[id] = std::move(attr);
    }
  }
  std::vector<NodeAttr> nodes;
  nodes.reserve(slots.size());
  for (std::size_t v = 0; v < slots.size(); ++v) {
    if (!slots[v])
      throw ParseError(files.nodes.string(), 0,
                       "node ids must be contiguous from 0; missing " + std::to_string(v));
    nodes.push_back(std::move(*slots[v]));
  }
  slots.clear();

  std::vector<EdgeInput> edges;
  std::size_t dropped = 0;
  {
    auto in = open_input(files.edges);
    const std::string fname = files.edges.string();
    std::unordered_set<std::uint64_t> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (skip_line(line)) continue;
      auto fields = split(line, '\t');
      EdgeInput e;
      if (fields.size() < 2 || fields.size() > 3 || !parse_number(fields[0], e.u) ||
          !parse_number(fields[1], e.v))
        throw ParseError(fname, lineno, "expected 'src<TAB>dst<TAB>group=value;...'");
      if (e.u >= nodes.size() || e.v >= nodes.size())
        throw NodeIdOutOfRange(fname + ":" + std::to_string(lineno) + ": endpoint out of range");
      if (e.u == e.v) throw SelfLoop(fname + ":" + std::to_string(lineno) + ": self-loop");
      e.attr.values.assign(schema.group_count(), EdgeAttr::kMissing);
      if (fields.size() == 3 && !trim(fields[2]).empty()) {
        for (auto item : split(trim(fields[2]), ';')) {
          if (trim(item).empty()) continue;
          auto kv = split(item, '=');
          std::int32_t value = 0;
          if (kv.size() != 2 || !parse_number(kv[1], value))
            throw ParseError(fname, lineno, "bad attribute '" + std::string(item) + "'");
          auto g = schema.find(trim(kv[0]));
          if (!g)
            throw ParseError(fname, lineno,
                             "unknown attribute group '" + std::string(trim(kv[0])) + "'");
          if (value < 0 || static_cast<std::uint32_t>(value) >= schema.group(*g).cardinality)
            throw ParseError(fname, lineno,
                             "value " + std::to_string(value) + " outside group '" +
                                 schema.group(*g).name + "'");
          if (e.attr.values[*g] != EdgeAttr::kMissing)
            throw ParseError(fname, lineno, "group '" + schema.group(*g).name + "' repeated");
          e.attr.values[*g] = value;
        }
      }
      const std::uint64_t key = (std::uint64_t{std::min(e.u, e.v)} << 32) | std::max(e.u, e.v);
      if (!seen.insert(key).second) {
        if (dropped == 0)
          std::cerr << "warning: " << fname << ":" << lineno
                    << ": repeated edge ignored (keeping first occurrence)\n";
        ++dropped;
        continue;
      }
      edges.push_back(std::move(e));
    }
  }
  if (dropped > 1)
    std::cerr << "warning: " << dropped << " repeated edges ignored in total\n";
  if (report) report->duplicate_edges_dropped = dropped;
  return build_graph(std::move(nodes), std::move(edges), std::move(schema));
}

AttributedGraph ingest(const std::filesystem::path& node_file,
                       const std::filesystem::path& edge_file,
                       const std::filesystem::path& schema_file) {
  return ingest(GraphFiles{schema_file, node_file, edge_file});
}

void export_graph(const AttributedGraph& g, const GraphFiles& files) {
  const auto& schema = g.schema();
  {
    auto out = open_output(files.schema);
    for (const auto& grp : schema.groups()) out << grp.name << '\t' << grp.cardinality << '\n';
  }
  {
    auto out = open_output(files.nodes);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      out << v << '\t';
      const auto& entries = g.node_attr(v).entries;
      for (std::size_t k = 0; k < entries.size(); ++k) {
        if (k) out << ',';
        out << entries[k].first << ':' << format_real(entries[k].second);
      }
      out << '\n';
    }
  }
  {
    auto out = open_output(files.edges);
    for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
      auto [u, v] = g.edge_endpoints(e);
      out << u << '\t' << v << '\t';
      const auto& attr = g.edge_attr_by_id(e);
      bool first = true;
      for (std::size_t grp = 0; grp < attr.values.size(); ++grp) {
        if (attr.missing(grp)) continue;
        if (!first) out << ';';
        first = false;
        out << schema.group(grp).name << '=' << attr.values[grp];
      }
      out << '\n';
    }
  }
}

}  // namespace agcn
