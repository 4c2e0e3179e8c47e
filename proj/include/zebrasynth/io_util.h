// Copyright 2026 The Zebrasynth Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef ZEBRASYNTH_IO_UTIL_H_
#define ZEBRASYNTH_IO_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace zebrasynth {

// Writes to a sibling temp file, then renames over `path`. Creates parent
// directories. Throws IoError.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view bytes);
void WriteFileAtomic(const std::filesystem::path& path,
                     std::span<const uint8_t> bytes);

// Throws IoError when the file cannot be read.
std::string ReadFile(const std::filesystem::path& path);

// Lowercase hex SHA-256.
std::string Sha256Hex(std::string_view bytes);

// Little-endian float32 packing.
void AppendF32(std::string& out, float v);
float ReadF32(const char* p);

}  // namespace zebrasynth

#endif  // ZEBRASYNTH_IO_UTIL_H_
