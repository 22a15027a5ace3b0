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
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/articulation/kinematic_graph.hpp"

namespace forge {

/// Canonical tree string: a node is `label(children)`, non-root nodes are
/// prefixed by their joint type as `type:label(...)`, and children are sorted
/// by their own strings. A lone "body" root gives "body()".
std::string graph_signature(const KinematicGraph& graph);

struct GraphStats {
  std::size_t total = 0;
  std::size_t unique = 0;
  /// Natural log.
  double entropy = 0.0;
  double perplexity = 1.0;
  std::map<std::string, std::size_t> counts;

  nlohmann::json to_json() const;
  /// signature,count,probability rows after a header.
  std::string to_csv() const;
};

/// Throws EmptyInput.
GraphStats dataset_graph_stats(std::span<const std::string> signatures);

struct Embedding {
  std::string id;
  std::vector<double> values;
};

struct DuplicatePair {
  std::string a;
  std::string b;
  double similarity = 0.0;
};

inline constexpr double kDuplicateThreshold = 0.99;

/// Unordered pairs with cosine similarity strictly above `threshold`, most
/// similar first (ties by input order). Throws DimensionMismatch, ZeroVector.
std::vector<DuplicatePair> find_near_duplicates(std::span<const Embedding> vectors,
                                                double threshold = kDuplicateThreshold);

/// `EMB <count> <dim>\n` then little-endian float32 rows; ids are row
/// indices. Throws MalformedFile.
std::vector<Embedding> read_embeddings_emb(std::span<const std::uint8_t> bytes);
/// `id,v0,v1,...` per line; blank lines and lines starting with '#' skipped.
std::vector<Embedding> read_embeddings_csv(std::string_view text);
/// Picks the reader by the leading magic.
std::vector<Embedding> read_embeddings_file(const std::filesystem::path& path);
std::vector<std::uint8_t> write_embeddings_emb(std::span<const Embedding> vectors);

}  // namespace forge
