// Copyright 2026 The Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "forge/schema/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <functional>
#include <sstream>

#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"
#include "forge/mesh/parallel.hpp"

namespace forge {

std::string graph_signature(const KinematicGraph& graph) {
  std::function<std::string(std::int32_t, int)> node = [&](std::int32_t id, int depth) -> std::string {
    if (depth > static_cast<int>(graph.nodes.size())) {
      throw Error(ErrorCode::kCycleDetected, "graph_signature needs a tree");
    }
    std::vector<std::string> kids;
    for (auto c : graph.children(id)) kids.push_back(node(c, depth + 1));
    std::sort(kids.begin(), kids.end());
    std::string out;
    if (auto it = graph.joints.find(id); it != graph.joints.end() && id != graph.root) {
      out += std::string(to_string(it->second.motion)) + ":";
    }
    auto label = graph.labels.find(id);
    out += label == graph.labels.end() ? std::string("?") : label->second;
    out += "(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
      if (i) out += ",";
      out += kids[i];
    }
    return out + ")";
  };
  return node(graph.root, 0);
}

nlohmann::json GraphStats::to_json() const {
  return {{"total", total}, {"unique", unique}, {"entropy", entropy}, {"perplexity", perplexity}, {"counts", counts}};
}

std::string GraphStats::to_csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "signature,count,probability\n";
  for (const auto& [sig, n] : counts) {
    // Signatures contain commas; quote them.
    std::string quoted = "\"";
    for (char c : sig) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
    out << quoted << "\"," << n << "," << static_cast<double>(n) / static_cast<double>(total) << "\n";
  }
  return out.str();
}

GraphStats dataset_graph_stats(std::span<const std::string> signatures) {
  if (signatures.empty()) throw Error(ErrorCode::kEmptyInput, "no graph signatures");
  GraphStats s;
  for (const auto& sig : signatures) ++s.counts[sig];
  s.total = signatures.size();
  s.unique = s.counts.size();
  const double n = static_cast<double>(s.total);
  double h = 0.0;
  for (const auto& [sig, c] : s.counts) {
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  s.entropy = h;
  s.perplexity = std::exp(h);
  return s;
}

std::vector<DuplicatePair> find_near_duplicates(std::span<const Embedding> vectors, double threshold) {
  if (vectors.empty()) return {};
  const std::size_t dim = vectors.front().values.size();
  std::vector<std::vector<double>> unit(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i].values;
    if (v.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "vector '" + vectors[i].id + "' has " + std::to_string(v.size()) +
                                                     " entries, expected " + std::to_string(dim));
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) throw Error(ErrorCode::kZeroVector, "vector '" + vectors[i].id + "' is zero");
    unit[i].resize(dim);
    for (std::size_t k = 0; k < dim; ++k) unit[i][k] = v[k] / norm;
  }
  struct Hit {
    std::size_t a, b;
    double sim;
  };
  std::vector<std::vector<Hit>> rows(vectors.size());
  parallel_for(std::size_t{0}, vectors.size(), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) dot += unit[i][k] * unit[j][k];
      if (dot > threshold) rows[i].push_back({i, j, std::min(dot, 1.0)});
    }
  });
  std::vector<Hit> all;
  for (auto& r : rows) all.insert(all.end(), r.begin(), r.end());
  std::stable_sort(all.begin(), all.end(), [](const Hit& x, const Hit& y) { return x.sim > y.sim; });
  std::vector<DuplicatePair> out;
  out.reserve(all.size());
  for (const auto& h : all) out.push_back({vectors[h.a].id, vectors[h.b].id, h.sim});
  return out;
}

std::vector<Embedding> read_embeddings_emb(std::span<const std::uint8_t> bytes) {
  const auto nl = std::find(bytes.begin(), bytes.end(), std::uint8_t{'\n'});
  if (nl == bytes.end()) throw Error(ErrorCode::kMalformedFile, "EMB header has no newline");
  std::istringstream header(std::string(bytes.begin(), nl));
  std::string magic;
  long long count = -1, dim = -1;
  header >> magic >> count >> dim;
  if (magic != "EMB" || count < 0 || dim <= 0) throw Error(ErrorCode::kMalformedFile, "bad EMB header");
  const std::size_t offset = static_cast<std::size_t>(nl - bytes.begin()) + 1;
  const std::size_t need = static_cast<std::size_t>(count) * static_cast<std::size_t>(dim) * 4;
  if (bytes.size() - offset != need) {
    throw Error(ErrorCode::kMalformedFile, "EMB payload is " + std::to_string(bytes.size() - offset) +
                                               " bytes, expected " + std::to_string(need));
  }
  std::vector<Embedding> out(static_cast<std::size_t>(count));
  const std::uint8_t* p = bytes.data() + offset;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].id = std::to_string(i);
    out[i].values.resize(static_cast<std::size_t>(dim));
    for (auto& v : out[i].values) {
      std::uint32_t bits = static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
                           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
      v = std::bit_cast<float>(bits);
      p += 4;
    }
  }
  return out;
}

std::vector<std::uint8_t> write_embeddings_emb(std::span<const Embedding> vectors) {
  const std::size_t dim = vectors.empty() ? 1 : vectors.front().values.size();
  const std::string header = "EMB " + std::to_string(vectors.size()) + " " + std::to_string(dim) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  for (const auto& e : vectors) {
    if (e.values.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "ragged embeddings");
    for (double v : e.values) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
      for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
    }
  }
  return out;
}

std::vector<Embedding> read_embeddings_csv(std::string_view text) {
  std::vector<Embedding> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream cells(line);
    Embedding e;
    std::getline(cells, e.id, ',');
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        e.values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kMalformedFile, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Embedding> read_embeddings_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "EMB ", 4) == 0) return read_embeddings_emb(bytes);
  return read_embeddings_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace forge
