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
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

namespace forge {

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  std::map<std::string, std::string> headers;
};

/// Verification endpoints over a pipeline output directory. Reads run
/// concurrently; writes to one object are serialized. Every annotation goes
/// through validate_graph before it is stored or served. Versions start at 1
/// and live next to the annotation in `annotation.version`.
class AnnotationService {
 public:
  explicit AnnotationService(std::filesystem::path output_dir);

  /// [{id, version, flags}] for every object with an annotation.
  HttpResponse list_objects() const;
  HttpResponse get_mesh(const std::string& id) const;
  /// Annotation JSON with an ETag carrying the version.
  HttpResponse get_annotation(const std::string& id) const;
  /// 404 unknown id, 428 without If-Match, 409 stale version, 422 schema or
  /// graph validation failure (report in the body), else 200 and the new
  /// version. The URDF is regenerated when the saved workspace allows it.
  HttpResponse put_annotation(const std::string& id, std::string_view body,
                              const std::optional<std::string>& if_match);
  HttpResponse get_flags(const std::string& id) const;
  /// Ids of parts sharing the label of `part_id`, for motion copying.
  HttpResponse similar_parts(const std::string& id, std::int32_t part_id) const;

  std::uint64_t version(const std::string& id) const;

 private:
  std::filesystem::path object_dir(const std::string& id) const;
  bool known(const std::string& id) const;
  std::shared_mutex& lock_for(const std::string& id) const;

  std::filesystem::path root_;
  mutable std::mutex locks_mutex_;
  mutable std::map<std::string, std::unique_ptr<std::shared_mutex>> locks_;
};

/// HTTP front end for AnnotationService.
class AnnotationServer {
 public:
  explicit AnnotationServer(std::filesystem::path output_dir);
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  /// Binds `host:port`; port 0 picks a free one. Returns the bound port.
  /// Throws Io.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void listen();
  void stop();
  void wait_until_ready() const;

  AnnotationService& service();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds and serves `output_dir` until the process ends. Throws Io.
void serve(const std::filesystem::path& output_dir, int port, const std::string& host = "127.0.0.1");

}  // namespace forge
