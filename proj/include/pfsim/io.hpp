// Copyright 2026 The pfsim Authors
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

#include <string>
#include <vector>

namespace pfsim {

// Deterministic numeric formatting: shortest round-trippable decimal,
// identical across runs so CSV bodies are byte-stable.
std::string format_double(double v);

// Row-oriented CSV assembly with a fixed header.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void add_row_mixed(const std::vector<std::string>& cells);
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

void write_text_file(const std::string& path, const std::string& text);

// FNV-1a 64-bit content hash, hex-encoded; used to key run manifests.
std::string content_hash_hex(const std::string& data);

// JSON manifest written beside task outputs: task name, config hash,
// library version, wall time.
void write_manifest(const std::string& path, const std::string& task,
                    const std::string& configText, double wallSeconds);

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pfsim
