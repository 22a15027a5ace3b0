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

#include "forge/mesh/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include <nlohmann/json.hpp>

#include "forge/error.hpp"

namespace forge {

namespace {

using nlohmann::json;
using Affine = Eigen::Affine3d;

constexpr std::uint32_t kGlbMagic = 0x46546C67;
constexpr std::uint32_t kChunkJson = 0x4E4F534A;
constexpr std::uint32_t kChunkBin = 0x004E4942;

std::uint32_t read_u32(std::span<const std::uint8_t> bytes, std::size_t at) {
  if (at + 4 > bytes.size()) {
    throw Error(ErrorCode::kMalformedFile, "truncated GLB");
  }
  return static_cast<std::uint32_t>(bytes[at]) |
         (static_cast<std::uint32_t>(bytes[at + 1]) << 8) |
         (static_cast<std::uint32_t>(bytes[at + 2]) << 16) |
         (static_cast<std::uint32_t>(bytes[at + 3]) << 24);
}

void finalize(TriMesh& mesh) {
  // Drop faces that repeat a vertex index; they carry no area or topology.
  std::size_t kept = 0;
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const Face& f = mesh.faces[i];
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) continue;
    mesh.faces[kept] = f;
    if (!mesh.face_material.empty()) {
      mesh.face_material[kept] = mesh.face_material[i];
    }
    ++kept;
  }
  mesh.faces.resize(kept);
  if (!mesh.face_material.empty()) mesh.face_material.resize(kept);
  if (mesh.faces.empty()) {
    throw Error(ErrorCode::kEmptyGeometry, "no triangles in input");
  }
  mesh.validate();
  recenter(mesh);
}

class GlbReader {
 public:
  GlbReader(const json& doc, std::span<const std::uint8_t> bin)
      : doc_(doc), bin_(bin) {}

  TriMesh read() {
    TriMesh mesh;
    std::vector<std::size_t> roots;
    const auto& nodes = doc_.value("nodes", json::array());
    if (doc_.contains("scenes") && !doc_["scenes"].empty()) {
      const std::size_t scene = doc_.value("scene", 0);
      if (scene >= doc_["scenes"].size()) {
        throw Error(ErrorCode::kMalformedFile, "scene index out of range");
      }
      for (const auto& n : doc_["scenes"][scene].value("nodes", json::array())) {
        roots.push_back(n.get<std::size_t>());
      }
    } else {
      std::set<std::size_t> children;
      for (const auto& n : nodes) {
        for (const auto& c : n.value("children", json::array())) {
          children.insert(c.get<std::size_t>());
        }
      }
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!children.count(i)) roots.push_back(i);
      }
    }
    std::set<std::size_t> visiting;
    for (auto r : roots) visit(r, Affine::Identity(), mesh, visiting);
    finalize(mesh);
    return mesh;
  }

 private:
  static Affine local_transform(const json& node) {
    Affine t = Affine::Identity();
    if (node.contains("matrix")) {
      const auto& m = node["matrix"];
      if (m.size() != 16) {
        throw Error(ErrorCode::kMalformedFile, "node matrix must have 16 values");
      }
      Eigen::Matrix4d mat;
      for (int c = 0; c < 4; ++c) {
        for (int r = 0; r < 4; ++r) mat(r, c) = m[c * 4 + r].get<double>();
      }
      t.matrix() = mat;
      return t;
    }
    if (node.contains("translation")) {
      const auto& v = node["translation"];
      t.translate(Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>()));
    }
    if (node.contains("rotation")) {
      const auto& q = node["rotation"];
      t.rotate(Eigen::Quaterniond(q[3].get<double>(), q[0].get<double>(),
                                  q[1].get<double>(), q[2].get<double>())
                   .normalized());
    }
    if (node.contains("scale")) {
      const auto& s = node["scale"];
      t.scale(Vec3(s[0].get<double>(), s[1].get<double>(), s[2].get<double>()));
    }
    return t;
  }

  void visit(std::size_t index, const Affine& parent, TriMesh& out,
             std::set<std::size_t>& visiting) {
    const auto& nodes = doc_.at("nodes");
    if (index >= nodes.size()) {
      throw Error(ErrorCode::kMalformedFile, "node index out of range");
    }
    if (!visiting.insert(index).second) {
      throw Error(ErrorCode::kMalformedFile, "node hierarchy contains a cycle");
    }
    const json& node = nodes[index];
    const Affine world = parent * local_transform(node);
    if (node.contains("mesh")) {
      append_mesh(node["mesh"].get<std::size_t>(), world, out);
    }
    for (const auto& c : node.value("children", json::array())) {
      visit(c.get<std::size_t>(), world, out, visiting);
    }
    visiting.erase(index);
  }

  struct AccessorView {
    const std::uint8_t* data = nullptr;
    std::size_t count = 0;
    std::size_t stride = 0;
    int component_type = 0;
    int components = 0;
  };

  AccessorView accessor(std::size_t index) const {
    const auto& accessors = doc_.at("accessors");
    if (index >= accessors.size()) {
      throw Error(ErrorCode::kMalformedFile, "accessor index out of range");
    }
    const json& acc = accessors[index];
    if (acc.contains("sparse")) {
      throw Error(ErrorCode::kMalformedFile, "sparse accessors are not supported");
    }
    AccessorView view;
    view.count = acc.at("count").get<std::size_t>();
    view.component_type = acc.at("componentType").get<int>();
    const std::string type = acc.at("type").get<std::string>();
    static const std::map<std::string, int> kComponents = {
        {"SCALAR", 1}, {"VEC2", 2}, {"VEC3", 3}, {"VEC4", 4}};
    auto it = kComponents.find(type);
    if (it == kComponents.end()) {
      throw Error(ErrorCode::kMalformedFile, "unsupported accessor type " + type);
    }
    view.components = it->second;
    std::size_t component_size = 0;
    switch (view.component_type) {
      case 5121: component_size = 1; break;
      case 5123: component_size = 2; break;
      case 5125: case 5126: component_size = 4; break;
      default:
        throw Error(ErrorCode::kMalformedFile, "unsupported component type");
    }
    const std::size_t element_size = component_size * view.components;
    const json& bv = doc_.at("bufferViews").at(acc.at("bufferView").get<std::size_t>());
    if (bv.value("buffer", 0) != 0) {
      throw Error(ErrorCode::kMalformedFile, "only the GLB binary buffer is supported");
    }
    const std::size_t offset = bv.value("byteOffset", std::size_t{0}) +
                               acc.value("byteOffset", std::size_t{0});
    view.stride = bv.value("byteStride", element_size);
    const std::size_t length = bv.at("byteLength").get<std::size_t>();
    if (view.count > 0) {
      const std::size_t needed = (view.count - 1) * view.stride + element_size;
      if (acc.value("byteOffset", std::size_t{0}) + needed > length ||
          offset + needed > bin_.size()) {
        throw Error(ErrorCode::kMalformedFile, "accessor exceeds buffer");
      }
    }
    view.data = bin_.data() + offset;
    return view;
  }

  static double component(const AccessorView& v, std::size_t i, int c) {
    const std::uint8_t* p = v.data + i * v.stride;
    switch (v.component_type) {
      case 5126: {
        float f;
        std::memcpy(&f, p + 4 * c, 4);
        return f;
      }
      case 5125: {
        std::uint32_t u;
        std::memcpy(&u, p + 4 * c, 4);
        return u;
      }
      case 5123: {
        std::uint16_t u;
        std::memcpy(&u, p + 2 * c, 2);
        return u;
      }
      default:
        return p[c];
    }
  }

  void append_mesh(std::size_t mesh_index, const Affine& world, TriMesh& out) {
    const json& m = doc_.at("meshes").at(mesh_index);
    for (const json& prim : m.at("primitives")) {
      const int mode = prim.value("mode", 4);
      if (mode != 4 && mode != 5 && mode != 6) {
        throw Error(ErrorCode::kNonTriangulatable,
                    "primitive mode " + std::to_string(mode) + " has no faces");
      }
      const AccessorView pos = accessor(prim.at("attributes").at("POSITION").get<std::size_t>());
      if (pos.component_type != 5126 || pos.components != 3) {
        throw Error(ErrorCode::kMalformedFile, "POSITION must be float VEC3");
      }
      const auto base = static_cast<std::int32_t>(out.vertices.size());
      for (std::size_t i = 0; i < pos.count; ++i) {
        out.vertices.push_back(world * Vec3(component(pos, i, 0), component(pos, i, 1),
                                            component(pos, i, 2)));
      }
      std::vector<std::int64_t> idx;
      if (prim.contains("indices")) {
        const AccessorView iv = accessor(prim["indices"].get<std::size_t>());
        if (iv.components != 1 || iv.component_type == 5126) {
          throw Error(ErrorCode::kMalformedFile, "indices must be unsigned scalars");
        }
        idx.reserve(iv.count);
        for (std::size_t i = 0; i < iv.count; ++i) {
          idx.push_back(static_cast<std::int64_t>(component(iv, i, 0)));
        }
      } else {
        idx.resize(pos.count);
        std::iota(idx.begin(), idx.end(), 0);
      }
      for (auto i : idx) {
        if (i < 0 || static_cast<std::size_t>(i) >= pos.count) {
          throw Error(ErrorCode::kMalformedFile, "index out of range");
        }
      }
      const std::int32_t material = prim.value("material", -1);
      auto emit = [&](std::int64_t a, std::int64_t b, std::int64_t c) {
        out.faces.push_back({base + static_cast<std::int32_t>(a),
                             base + static_cast<std::int32_t>(b),
                             base + static_cast<std::int32_t>(c)});
        out.face_material.push_back(material);
      };
      if (mode == 4) {
        if (idx.size() % 3 != 0) {
          throw Error(ErrorCode::kMalformedFile, "triangle list length not a multiple of 3");
        }
        for (std::size_t i = 0; i + 2 < idx.size(); i += 3) emit(idx[i], idx[i + 1], idx[i + 2]);
      } else if (mode == 5) {
        for (std::size_t i = 0; i + 2 < idx.size(); ++i) {
          if (i % 2 == 0) {
            emit(idx[i], idx[i + 1], idx[i + 2]);
          } else {
            emit(idx[i + 1], idx[i], idx[i + 2]);
          }
        }
      } else {
        for (std::size_t i = 1; i + 1 < idx.size(); ++i) emit(idx[0], idx[i], idx[i + 1]);
      }
    }
  }

  const json& doc_;
  std::span<const std::uint8_t> bin_;
};

TriMesh load_glb(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 20 || read_u32(bytes, 0) != kGlbMagic) {
    throw Error(ErrorCode::kMalformedFile, "missing glTF binary magic");
  }
  if (read_u32(bytes, 4) != 2) {
    throw Error(ErrorCode::kMalformedFile, "unsupported glTF version");
  }
  const std::size_t total = std::min<std::size_t>(read_u32(bytes, 8), bytes.size());
  std::size_t at = 12;
  json doc;
  bool have_json = false;
  std::span<const std::uint8_t> bin;
  while (at + 8 <= total) {
    const std::size_t len = read_u32(bytes, at);
    const std::uint32_t type = read_u32(bytes, at + 4);
    at += 8;
    if (at + len > total) throw Error(ErrorCode::kMalformedFile, "chunk exceeds file");
    if (type == kChunkJson) {
      try {
        doc = json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(at),
                          bytes.begin() + static_cast<std::ptrdiff_t>(at + len));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kMalformedFile, std::string("GLB JSON: ") + e.what());
      }
      have_json = true;
    } else if (type == kChunkBin && bin.empty()) {
      bin = bytes.subspan(at, len);
    }
    at += len;
  }
  if (!have_json) throw Error(ErrorCode::kMalformedFile, "GLB has no JSON chunk");
  try {
    return GlbReader(doc, bin).read();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("GLB structure: ") + e.what());
  }
}

std::int64_t parse_obj_index(std::string_view token, std::size_t vertex_count) {
  const auto slash = token.find('/');
  const std::string_view head = token.substr(0, slash);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
  if (ec != std::errc() || ptr != head.data() + head.size() || value == 0) {
    throw Error(ErrorCode::kMalformedFile, "bad OBJ face index '" + std::string(token) + "'");
  }
  const std::int64_t resolved =
      value > 0 ? value - 1 : static_cast<std::int64_t>(vertex_count) + value;
  if (resolved < 0 || resolved >= static_cast<std::int64_t>(vertex_count)) {
    throw Error(ErrorCode::kMalformedFile, "OBJ face index out of range");
  }
  return resolved;
}

double parse_double(std::string_view token) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kMalformedFile, "bad OBJ number '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

TriMesh load_obj(std::span<const std::uint8_t> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  TriMesh mesh;
  std::map<std::string, std::int32_t> materials;
  std::int32_t current_material = -1;
  bool any_material = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "v") {
      if (tokens.size() < 4) throw Error(ErrorCode::kMalformedFile, "vertex needs 3 coordinates");
      mesh.vertices.emplace_back(parse_double(tokens[1]), parse_double(tokens[2]),
                                 parse_double(tokens[3]));
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) {
        throw Error(ErrorCode::kNonTriangulatable, "face with fewer than 3 vertices");
      }
      std::vector<std::int64_t> poly;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        poly.push_back(parse_obj_index(tokens[i], mesh.vertices.size()));
      }
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        mesh.faces.push_back({static_cast<std::int32_t>(poly[0]),
                              static_cast<std::int32_t>(poly[i]),
                              static_cast<std::int32_t>(poly[i + 1])});
        mesh.face_material.push_back(current_material);
      }
    } else if (tokens[0] == "usemtl" && tokens.size() >= 2) {
      auto [it, inserted] = materials.emplace(std::string(tokens[1]),
                                              static_cast<std::int32_t>(materials.size()));
      current_material = it->second;
      any_material = true;
    }
    if (end == text.size()) break;
  }
  if (!any_material) mesh.face_material.clear();
  finalize(mesh);
  return mesh;
}

}  // namespace

MeshFormat format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".glb") return MeshFormat::kGlb;
  if (ext == ".obj") return MeshFormat::kObj;
  throw Error(ErrorCode::kMalformedFile, "unknown mesh extension '" + ext + "'");
}

TriMesh load_mesh(std::span<const std::uint8_t> bytes, MeshFormat format) {
  return format == MeshFormat::kGlb ? load_glb(bytes) : load_obj(bytes);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TriMesh load_mesh_file(const std::filesystem::path& path) {
  const auto format = format_from_path(path);
  const auto bytes = read_file_bytes(path);
  return load_mesh(bytes, format);
}

std::vector<std::uint8_t> write_glb(std::span<const GlbNode> nodes) {
  json doc;
  doc["asset"] = {{"version", "2.0"}, {"generator", "forge"}};
  doc["scene"] = 0;
  json scene_nodes = json::array();
  json jnodes = json::array();
  json meshes = json::array();
  json accessors = json::array();
  json views = json::array();
  std::vector<std::uint8_t> bin;
  auto push_bytes = [&bin](const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bin.insert(bin.end(), p, p + n);
    while (bin.size() % 4 != 0) bin.push_back(0);
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const GlbNode& node = nodes[i];
    json jn;
    jn["name"] = node.name;
    if (!node.translation.isZero()) {
      jn["translation"] = {node.translation.x(), node.translation.y(), node.translation.z()};
    }
    if (!node.mesh.empty()) {
      std::vector<float> pos;
      pos.reserve(node.mesh.vertices.size() * 3);
      Aabb box;
      for (const Vec3& v : node.mesh.vertices) {
        const Vec3 f = v.cast<float>().cast<double>();
        box.expand(f);
        pos.push_back(static_cast<float>(v.x()));
        pos.push_back(static_cast<float>(v.y()));
        pos.push_back(static_cast<float>(v.z()));
      }
      std::vector<std::uint32_t> idx;
      idx.reserve(node.mesh.faces.size() * 3);
      for (const Face& f : node.mesh.faces) {
        for (auto v : f) idx.push_back(static_cast<std::uint32_t>(v));
      }
      const std::size_t pos_offset = bin.size();
      push_bytes(pos.data(), pos.size() * sizeof(float));
      const std::size_t idx_offset = bin.size();
      push_bytes(idx.data(), idx.size() * sizeof(std::uint32_t));
      const std::size_t view_base = views.size();
      views.push_back({{"buffer", 0}, {"byteOffset", pos_offset},
                       {"byteLength", pos.size() * sizeof(float)}, {"target", 34962}});
      views.push_back({{"buffer", 0}, {"byteOffset", idx_offset},
                       {"byteLength", idx.size() * sizeof(std::uint32_t)}, {"target", 34963}});
      const std::size_t acc_base = accessors.size();
      accessors.push_back({{"bufferView", view_base}, {"componentType", 5126},
                           {"count", node.mesh.vertices.size()}, {"type", "VEC3"},
                           {"min", {box.min.x(), box.min.y(), box.min.z()}},
                           {"max", {box.max.x(), box.max.y(), box.max.z()}}});
      accessors.push_back({{"bufferView", view_base + 1}, {"componentType", 5125},
                           {"count", idx.size()}, {"type", "SCALAR"}});
      jn["mesh"] = meshes.size();
      meshes.push_back({{"name", node.name},
                        {"primitives", json::array({{{"attributes", {{"POSITION", acc_base}}},
                                                     {"indices", acc_base + 1},
                                                     {"mode", 4}}})}});
    }
    scene_nodes.push_back(jnodes.size());
    jnodes.push_back(jn);
  }
  doc["scenes"] = json::array({{{"nodes", scene_nodes}}});
  doc["nodes"] = jnodes;
  if (!meshes.empty()) {
    doc["meshes"] = meshes;
    doc["accessors"] = accessors;
    doc["bufferViews"] = views;
    doc["buffers"] = json::array({{{"byteLength", bin.size()}}});
  }
  std::string text = doc.dump();
  while (text.size() % 4 != 0) text.push_back(' ');

  std::vector<std::uint8_t> out;
  auto put_u32 = [&out](std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  };
  const std::size_t total = 12 + 8 + text.size() + (bin.empty() ? 0 : 8 + bin.size());
  put_u32(kGlbMagic);
  put_u32(2);
  put_u32(static_cast<std::uint32_t>(total));
  put_u32(static_cast<std::uint32_t>(text.size()));
  put_u32(kChunkJson);
  out.insert(out.end(), text.begin(), text.end());
  if (!bin.empty()) {
    put_u32(static_cast<std::uint32_t>(bin.size()));
    put_u32(kChunkBin);
    out.insert(out.end(), bin.begin(), bin.end());
  }
  return out;
}

std::string write_obj(const TriMesh& mesh) {
  std::ostringstream out;
  out.precision(9);
  for (const Vec3& v : mesh.vertices) {
    out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  }
  for (const Face& f : mesh.faces) {
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
  return out.str();
}

}  // namespace forge
