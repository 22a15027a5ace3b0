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

#include "forge/pipeline/service.hpp"

#include <charconv>

#include <nlohmann/json.hpp>

#include "forge/articulation/template.hpp"
#include "forge/error.hpp"
#include "forge/mesh/mesh_io.hpp"
#include "forge/pipeline/files.hpp"
#include "forge/pipeline/pipeline.hpp"
#include "forge/schema/annotation.hpp"
#include "forge/schema/urdf.hpp"

// Last: <resolv.h> defines a `_res` macro that collides with Eigen internals.
#include <httplib.h>

namespace forge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump(2) + "\n", "application/json", {}}; }

HttpResponse error_response(int status, const std::string& kind, const std::string& message) {
  return json_response(status, {{"error", kind}, {"message", message}});
}

HttpResponse not_found(const std::string& id) { return error_response(404, "not_found", "unknown object '" + id + "'"); }

std::string etag(std::uint64_t version) { return "\"" + std::to_string(version) + "\""; }

/// Accepts `"7"`, `W/"7"` and bare `7`.
std::optional<std::uint64_t> parse_etag(std::string_view text) {
  if (text.starts_with("W/")) text.remove_prefix(2);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::uint64_t read_version(const fs::path& dir) {
  const fs::path p = dir / "annotation.version";
  if (!fs::is_regular_file(p)) return 1;
  std::string text = read_text_file(p);
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ')) text.pop_back();
  return parse_etag(text).value_or(1);
}

struct Checked {
  AnnotationDocument doc;
  json report;
  bool ok = true;
};

/// Structural problems plus validate_graph against the object's template.
Checked check_document(AnnotationDocument doc, const CategoryTemplate& tmpl) {
  Checked c;
  const auto problems = document_problems(doc);
  const ValidationReport report = validate_graph(to_graph(doc), tmpl);
  c.ok = problems.empty() && report.ok();
  c.report = report.to_json();
  c.report["problems"] = problems;
  c.doc = std::move(doc);
  return c;
}

CategoryTemplate object_template(const fs::path& dir) { return load_template_file(dir / "template.json"); }

}  // namespace

AnnotationService::AnnotationService(fs::path output_dir) : root_(std::move(output_dir)) {}

fs::path AnnotationService::object_dir(const std::string& id) const { return root_ / id; }

bool AnnotationService::known(const std::string& id) const {
  if (id.empty() || id.front() == '.' || id.find('/') != std::string::npos || id.find('\\') != std::string::npos) {
    return false;
  }
  return fs::is_regular_file(object_dir(id) / "annotation.json");
}

std::shared_mutex& AnnotationService::lock_for(const std::string& id) const {
  std::lock_guard guard(locks_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::shared_mutex>();
  return *slot;
}

std::uint64_t AnnotationService::version(const std::string& id) const {
  if (!known(id)) throw Error(ErrorCode::kInvalidArgument, "unknown object '" + id + "'");
  std::shared_lock lock(lock_for(id));
  return read_version(object_dir(id));
}

HttpResponse AnnotationService::list_objects() const {
  std::vector<std::string> ids;
  if (fs::is_directory(root_)) {
    for (const auto& e : fs::directory_iterator(root_)) {
      const std::string id = e.path().filename().string();
      if (e.is_directory() && known(id)) ids.push_back(id);
    }
  }
  std::sort(ids.begin(), ids.end());
  json out = json::array();
  for (const auto& id : ids) {
    std::shared_lock lock(lock_for(id));
    json flags = json::object();
    const fs::path flags_path = object_dir(id) / "flags.json";
    if (fs::is_regular_file(flags_path)) flags = json::parse(read_text_file(flags_path), nullptr, false);
    out.push_back({{"id", id}, {"version", read_version(object_dir(id))}, {"flags", flags}});
  }
  return json_response(200, out);
}

HttpResponse AnnotationService::get_mesh(const std::string& id) const {
  if (!known(id)) return not_found(id);
  std::shared_lock lock(lock_for(id));
  const fs::path p = object_dir(id) / "mesh.glb";
  if (!fs::is_regular_file(p)) return error_response(404, "not_found", "object '" + id + "' has no mesh");
  return {200, read_text_file(p), "model/gltf-binary", {}};
}

HttpResponse AnnotationService::get_annotation(const std::string& id) const {
  if (!known(id)) return not_found(id);
  std::shared_lock lock(lock_for(id));
  const fs::path dir = object_dir(id);
  std::string text = read_text_file(dir / "annotation.json");
  try {
    const Checked c = check_document(parse_annotation(text), object_template(dir));
    if (!c.ok) {
      return json_response(422, {{"error", "invalid_graph"}, {"message", "stored annotation fails validation"},
                                 {"report", c.report}});
    }
  } catch (const Error& e) {
    return error_response(422, "schema_violation", e.what());
  }
  HttpResponse r{200, std::move(text), "application/json", {}};
  r.headers["ETag"] = etag(read_version(dir));
  return r;
}

HttpResponse AnnotationService::put_annotation(const std::string& id, std::string_view body,
                                               const std::optional<std::string>& if_match) {
  if (!known(id)) return not_found(id);
  if (!if_match) return error_response(428, "precondition_required", "PUT needs an If-Match version");
  std::unique_lock lock(lock_for(id));
  const fs::path dir = object_dir(id);
  const std::uint64_t current = read_version(dir);
  const auto expected = parse_etag(*if_match);
  if (!expected || *expected != current) {
    return json_response(409, {{"error", "version_conflict"},
                               {"message", "If-Match " + *if_match + " does not match the stored version"},
                               {"current_version", current}});
  }

  Checked checked;
  try {
    checked = check_document(parse_annotation(body), object_template(dir));
  } catch (const Error& e) {
    return error_response(422, "schema_violation", e.what());
  }
  if (!checked.ok) {
    return json_response(422, {{"error", "invalid_graph"}, {"message", "annotation fails validation"},
                               {"report", checked.report}});
  }
  const AnnotationDocument stored = parse_annotation(read_text_file(dir / "annotation.json"));
  if (stored.object.uuid != checked.doc.object.uuid) {
    return error_response(422, "schema_violation", "annotation belongs to a different object");
  }

  json result = {{"id", id}};
  write_file_atomic(dir / "annotation.json", export_annotation(checked.doc));
  const fs::path work = dir / "work.cbor";
  if (fs::is_regular_file(work)) {
    try {
      const Workspace ws = decode_workspace(read_file_bytes(work), ClusteringParams{});
      const UrdfPackage urdf = export_urdf(checked.doc, ws.mesh, ws.parts);
      for (const auto& [path, obj] : urdf.meshes) {
        fs::create_directories((dir / path).parent_path());
        write_file_atomic(dir / path, obj);
      }
      write_file_atomic(dir / "object.urdf", urdf.xml);
      result["urdf"] = "regenerated";
    } catch (const Error& e) {
      result["urdf"] = std::string("stale: ") + e.what();
    }
  }
  const std::uint64_t next = current + 1;
  write_file_atomic(dir / "annotation.version", std::to_string(next) + "\n");
  result["version"] = next;
  HttpResponse r = json_response(200, result);
  r.headers["ETag"] = etag(next);
  return r;
}

HttpResponse AnnotationService::get_flags(const std::string& id) const {
  if (!known(id)) return not_found(id);
  std::shared_lock lock(lock_for(id));
  const fs::path p = object_dir(id) / "flags.json";
  if (!fs::is_regular_file(p)) return json_response(200, json::object());
  return {200, read_text_file(p), "application/json", {}};
}

HttpResponse AnnotationService::similar_parts(const std::string& id, std::int32_t part_id) const {
  if (!known(id)) return not_found(id);
  std::shared_lock lock(lock_for(id));
  const AnnotationDocument doc = parse_annotation(read_text_file(object_dir(id) / "annotation.json"));
  const PartRecord* part = doc.find(part_id);
  if (part == nullptr) return error_response(404, "not_found", "unknown part " + std::to_string(part_id));
  json same = json::array();
  for (const auto& p : doc.parts) {
    if (p.id != part_id && p.label == part->label) same.push_back(p.id);
  }
  return json_response(200, {{"part", part_id}, {"label", part->label}, {"same_label", same}});
}

struct AnnotationServer::Impl {
  explicit Impl(fs::path dir) : service(std::move(dir)) {}
  AnnotationService service;
  httplib::Server http;
};

namespace {

void reply(httplib::Response& res, const HttpResponse& r) {
  res.status = r.status;
  for (const auto& [k, v] : r.headers) res.set_header(k, v);
  res.set_content(r.body, r.content_type);
}

}  // namespace

AnnotationServer::AnnotationServer(fs::path output_dir) : impl_(std::make_unique<Impl>(std::move(output_dir))) {
  auto& http = impl_->http;
  AnnotationService& svc = impl_->service;
  http.Get("/objects", [&svc](const httplib::Request&, httplib::Response& res) { reply(res, svc.list_objects()); });
  http.Get(R"(/objects/([^/]+)/mesh\.glb)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.get_mesh(req.matches[1]));
  });
  http.Get(R"(/objects/([^/]+)/annotation)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.get_annotation(req.matches[1]));
  });
  http.Put(R"(/objects/([^/]+)/annotation)", [&svc](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> if_match;
    if (req.has_header("If-Match")) if_match = req.get_header_value("If-Match");
    reply(res, svc.put_annotation(req.matches[1], req.body, if_match));
  });
  http.Get(R"(/objects/([^/]+)/flags)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.get_flags(req.matches[1]));
  });
  http.Get(R"(/objects/([^/]+)/parts/(\d+)/similar)", [&svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc.similar_parts(req.matches[1], std::stoi(req.matches[2])));
  });
  http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string msg = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      msg = e.what();
    } catch (...) {
    }
    reply(res, error_response(500, "internal", msg));
  });
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound <= 0) throw Error(ErrorCode::kIo, "cannot bind " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void AnnotationServer::listen() { impl_->http.listen_after_bind(); }

void AnnotationServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void AnnotationServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

AnnotationService& AnnotationServer::service() { return impl_->service; }

void serve(const fs::path& output_dir, int port, const std::string& host) {
  if (!fs::is_directory(output_dir)) throw Error(ErrorCode::kIo, "no output directory " + output_dir.string());
  AnnotationServer server(output_dir);
  server.bind(host, port);
  server.listen();
}

}  // namespace forge
