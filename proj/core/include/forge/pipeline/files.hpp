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
#include <span>
#include <string_view>

namespace forge {

/// Writes to a sibling temporary file, flushes, then renames over `path`.
/// Throws Io.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

/// Moves a fully written `staging` directory to `target`, replacing any
/// previous version. Readers see either the old or the new tree, apart from
/// a short window in which `target` is absent. Throws Io.
void replace_directory(const std::filesystem::path& staging, const std::filesystem::path& target);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace forge
