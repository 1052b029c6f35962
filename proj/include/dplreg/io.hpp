// Copyright 2026 The dplreg Authors
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

#ifndef DPLREG_IO_HPP_
#define DPLREG_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace dplreg::io {

// Shortest decimal representation that round-trips binary64 exactly
// (std::to_chars). All file formats use this so that a write/read cycle
// reproduces the bit pattern.
std::string fmt_double(double v);
std::string fmt_int(long long v);

double parse_double(std::string_view s);
long long parse_int(std::string_view s);
std::uint64_t parse_u64(std::string_view s);

std::vector<std::string> split_ws(std::string_view line);
std::string trim(std::string_view s);
std::string to_lower(std::string_view s);

// FNV-1a, 64-bit. Used for config hashes and trajectory fingerprints.
class Fnv1a {
 public:
  void update(std::string_view bytes);
  void update_double(double v) { update(fmt_double(v)); update("|"); }
  void update_int(long long v) { update(fmt_int(v)); update("|"); }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t v);

// Opens an output file, writing the `# config_hash=<hex>` header line.
// Refuses to overwrite an existing file unless `force` is set.
std::ofstream open_output(const std::filesystem::path& path,
                          std::string_view config_hash_hex, bool force);

std::string read_file(const std::filesystem::path& path);

}  // namespace dplreg::io

#endif  // DPLREG_IO_HPP_
