/*
 * Copyright 2026 The mlpinit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "mlpinit/graph_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "mlpinit/errors.hpp"

namespace mlpinit {

namespace {

constexpr char kFeatureMagic[4] = {'M', 'L', 'P', 'I'};
constexpr std::uint32_t kFeatureVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw ParseError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// Parses an unsigned decimal token; rejects signs and trailing junk.
bool parse_index(std::string_view tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) toks.push_back(line.substr(i, j - i));
    i = j;
  }
  return toks;
}

std::vector<std::pair<NodeId, NodeId>> read_edges(const std::filesystem::path& path,
                                                  std::size_t n) {
  auto in = open_in(path);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    std::uint64_t u = 0, v = 0;
    if (toks.size() != 2 || !parse_index(toks[0], u) || !parse_index(toks[1], v)) {
      throw ParseError("malformed edge line '" + line + "' in " + path.string(), lineno);
    }
    if (u >= n || v >= n) {
      throw RangeError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") on line " +
                       std::to_string(lineno) + " references a node >= " + std::to_string(n));
    }
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    std::uint64_t v = 0;
    if (toks.size() != 1 || !parse_index(toks[0], v) || v > 1u << 30) {
      throw ParseError("malformed label line '" + line + "' in " + path.string(), lineno);
    }
    labels.push_back(static_cast<int>(v));
  }
  return labels;
}

NodeSplits read_splits(const std::filesystem::path& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid splits JSON in " + path.string() + ": " + e.what());
  }
  NodeSplits s;
  auto field = [&](const char* name) {
    if (!j.contains(name) || !j[name].is_array()) {
      throw ParseError(std::string("splits file lacks array '") + name + "'");
    }
    std::vector<NodeId> ids;
    for (const auto& v : j[name]) {
      if (!v.is_number_unsigned()) throw ParseError(std::string("non-index entry in '") + name + "'");
      ids.push_back(v.get<NodeId>());
    }
    return ids;
  };
  s.train = field("train");
  s.val = field("val");
  s.test = field("test");
  return s;
}

template <typename U>
U read_le(std::istream& in) {
  U v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(U));
  return v;
}

template <typename U>
void write_le(std::ostream& out, U v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(U));
}

Matrix<double> read_features_text(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> data;
  std::size_t cols = 0, rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++rows;
    std::size_t count = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("junk");
        data.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("malformed feature value '" + cell + "' in " + path.string(), rows);
      }
      ++count;
    }
    if (rows == 1) cols = count;
    if (count != cols || count == 0) {
      throw ParseError("feature row has " + std::to_string(count) + " values, expected " +
                           std::to_string(cols),
                       rows);
    }
  }
  return Matrix<double>(rows, cols, std::move(data));
}

}  // namespace

DatasetPaths DatasetPaths::in_directory(const std::filesystem::path& dir) {
  return {dir / "edges.txt", dir / "features.bin", dir / "labels.txt", dir / "splits.json"};
}

Matrix<double> read_features(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::in | std::ios::binary);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() < 4 || std::memcmp(magic, kFeatureMagic, 4) != 0) {
    return read_features_text(path);
  }
  auto version = read_le<std::uint32_t>(in);
  auto n = read_le<std::uint32_t>(in);
  auto d = read_le<std::uint32_t>(in);
  if (!in) throw ParseError("truncated feature header in " + path.string());
  if (version != kFeatureVersion) {
    throw ParseError("unsupported feature file version " + std::to_string(version));
  }
  std::vector<float> raw(static_cast<std::size_t>(n) * d);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != raw.size() * sizeof(float)) {
    throw ParseError("truncated feature payload in " + path.string());
  }
  std::vector<double> data(raw.begin(), raw.end());
  return Matrix<double>(n, d, std::move(data));
}

void write_features_binary(const Matrix<double>& features, const std::filesystem::path& path) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(kFeatureMagic, 4);
  write_le<std::uint32_t>(out, kFeatureVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(features.rows()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(features.cols()));
  for (double v : features.values()) write_le<float>(out, static_cast<float>(v));
}

Graph load_graph(const DatasetPaths& paths) {
  Graph g;
  g.features = read_features(paths.features);
  const std::size_t n = g.features.rows();
  g.labels = read_labels(paths.labels);
  if (g.labels.size() != n) {
    throw ConsistencyError("labels file has " + std::to_string(g.labels.size()) +
                           " rows but features have " + std::to_string(n));
  }
  g.num_classes = 0;
  for (int y : g.labels) g.num_classes = std::max(g.num_classes, y + 1);
  g.adjacency = symmetric_adjacency(n, read_edges(paths.edges, n));
  g.splits = read_splits(paths.splits);
  g.validate();
  return g;
}

void write_graph(const Graph& graph, const DatasetPaths& paths) {
  {
    auto out = open_out(paths.edges);
    const auto& adj = graph.adjacency;
    for (std::size_t u = 0; u < adj.rows(); ++u) {
      for (auto v : adj.row_cols(u)) {
        if (u <= v) out << u << ' ' << v << '\n';
      }
    }
  }
  write_features_binary(graph.features, paths.features);
  {
    auto out = open_out(paths.labels);
    for (int y : graph.labels) out << y << '\n';
  }
  {
    nlohmann::json j;
    j["train"] = graph.splits.train;
    j["val"] = graph.splits.val;
    j["test"] = graph.splits.test;
    auto out = open_out(paths.splits);
    out << j.dump() << '\n';
  }
}

}  // namespace mlpinit
