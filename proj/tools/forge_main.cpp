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

// forge: batch annotation pipeline, dataset statistics and the verification
// service.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "forge/error.hpp"
#include "forge/pipeline/files.hpp"
#include "forge/pipeline/pipeline.hpp"
#include "forge/pipeline/service.hpp"
#include "forge/schema/annotation.hpp"
#include "forge/schema/stats.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFailure = 1;

void print_summary(const forge::RunManifest& m) {
  std::cout << "objects: " << m.objects.size() << "  ok: " << m.count(forge::ObjectStatus::kOk)
            << "  flagged: " << m.count(forge::ObjectStatus::kFlagged)
            << "  error: " << m.count(forge::ObjectStatus::kError) << "\n";
  for (const auto& o : m.objects) {
    if (o.status == forge::ObjectStatus::kError) {
      std::cout << "  " << o.id << ": " << o.error_message.value_or("error") << "\n";
    }
  }
}

std::vector<std::string> collect_signatures(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::is_regular_file(dir)) {
    files.push_back(dir);
  } else {
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().filename() == "annotation.json") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> out;
  for (const auto& f : files) {
    out.push_back(forge::graph_signature(forge::to_graph(forge::parse_annotation(forge::read_text_file(f)))));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: articulated-object annotation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", forge::kToolVersion);

  std::string config_path;
  std::size_t workers = 0;
  auto* run = app.add_subcommand("run", "Run every enabled stage on every object");
  run->add_option("-c,--config", config_path, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
  run->add_option("-j,--workers", workers, "Concurrent objects (0 = all cores)");

  std::string object_id;
  std::vector<CLI::App*> stage_cmds;
  for (forge::Stage s : forge::kAllStages) {
    const std::string name(forge::to_string(s));
    auto* cmd = app.add_subcommand(name, "Run only the " + name + " stage on one object");
    cmd->add_option("-c,--config", config_path, "Pipeline config JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--object", object_id, "Object id")->required();
    stage_cmds.push_back(cmd);
  }

  std::string stats_dir, stats_csv;
  auto* stats = app.add_subcommand("stats", "Graph-signature entropy and perplexity of exported annotations");
  stats->add_option("dir", stats_dir, "Output directory or annotation file")->required()->check(CLI::ExistingPath);
  stats->add_option("--csv", stats_csv, "Also write per-signature counts as CSV");

  std::string embeddings;
  double threshold = forge::kDuplicateThreshold;
  auto* dedup = app.add_subcommand("dedup", "Near-duplicate pairs by cosine similarity");
  dedup->add_option("--embeddings", embeddings, "EMB or CSV embedding file")->required()->check(CLI::ExistingFile);
  dedup->add_option("--threshold", threshold, "Pairs strictly above this similarity")->check(CLI::Range(-1.0, 1.0));

  int port = 8080;
  std::string serve_dir, host = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Serve an output directory to the verification UI");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--dir", serve_dir, "Pipeline output directory")->required()->check(CLI::ExistingDirectory);
  serve->add_option("--host", host, "Bind address");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      forge::PipelineConfig config = forge::PipelineConfig::load(config_path);
      if (run->count("--workers")) config.workers = workers;
      const forge::RunManifest m = forge::run_pipeline(config);
      print_summary(m);
      std::cout << "manifest: " << (config.paths.output / "manifest.json").string() << "\n";
      return 0;
    }
    for (std::size_t i = 0; i < stage_cmds.size(); ++i) {
      if (!stage_cmds[i]->parsed()) continue;
      forge::PipelineConfig config = forge::PipelineConfig::load(config_path);
      const forge::Stage stage = forge::kAllStages[i];
      config.stages = {stage == forge::Stage::kSegment, stage == forge::Stage::kComplete,
                       stage == forge::Stage::kArticulate, stage == forge::Stage::kPhysics,
                       stage == forge::Stage::kExport};
      config.objects = {object_id};
      const forge::RunManifest m = forge::run_pipeline(config);
      print_summary(m);
      return m.count(forge::ObjectStatus::kError) ? kExitFailure : 0;
    }
    if (stats->parsed()) {
      const auto signatures = collect_signatures(stats_dir);
      const forge::GraphStats s = forge::dataset_graph_stats(signatures);
      std::cout << s.to_json().dump(2) << "\n";
      if (!stats_csv.empty()) forge::write_file_atomic(stats_csv, s.to_csv());
      return 0;
    }
    if (dedup->parsed()) {
      const auto vectors = forge::read_embeddings_file(embeddings);
      const auto pairs = forge::find_near_duplicates(vectors, threshold);
      std::cout << "a,b,similarity\n";
      for (const auto& p : pairs) std::cout << p.a << "," << p.b << "," << p.similarity << "\n";
      std::cerr << pairs.size() << " pair(s) above " << threshold << " among " << vectors.size() << " vectors\n";
      return 0;
    }
    if (serve->parsed()) {
      forge::AnnotationServer server(serve_dir);
      const int bound = server.bind(host, port);
      std::cerr << "serving " << serve_dir << " on http://" << host << ":" << bound << "\n";
      server.listen();
      return 0;
    }
  } catch (const forge::Error& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return e.code() == forge::ErrorCode::kConfigInvalid ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "forge: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
