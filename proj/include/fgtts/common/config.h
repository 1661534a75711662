// Copyright (c) 2026 The fgtts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FGTTS_COMMON_CONFIG_H_
#define FGTTS_COMMON_CONFIG_H_

#include <map>
#include <string>
#include <vector>

namespace fgtts {

// Flat "dotted.key = value" configuration. Lines starting with '#' are
// comments. Keys are kept sorted so Dump() output is canonical and a dumped
// snapshot reloads to an identical config.
class Config {
 public:
  Config() = default;

  static Config FromFile(const std::string& path);
  static Config FromString(const std::string& text);

  void Set(const std::string& key, const std::string& value);
  bool Has(const std::string& key) const;
  void Erase(const std::string& key);

  std::string GetString(const std::string& key) const;
  int GetInt(const std::string& key) const;
  double GetDouble(const std::string& key) const;
  bool GetBool(const std::string& key) const;
  std::vector<double> GetDoubleList(const std::string& key) const;
  std::vector<int> GetIntList(const std::string& key) const;

  // Applies "key=value" strings. Throws ConfigError on malformed entries.
  void ApplyOverrides(const std::vector<std::string>& overrides);

  // Every environment variable PREFIX + KEY where KEY is the dotted key
  // upper-cased with '.' replaced by "__" overrides that key, e.g.
  // FGTTS_MODEL__D_Z=16 sets model.d_z. Only keys already present are
  // looked up.
  void ApplyEnvironment(const std::string& prefix = "FGTTS_");

  // Throws ConfigError naming the first key that is absent in `schema`.
  void RejectUnknown(const Config& schema) const;

  // Values from `other` replace ours.
  void Merge(const Config& other);

  std::string Dump() const;
  void Save(const std::string& path) const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }
  bool operator==(const Config& other) const {
    return entries_ == other.entries_;
  }

 private:
  std::map<std::string, std::string> entries_;
};

std::string EnvironmentName(const std::string& key,
                            const std::string& prefix = "FGTTS_");

}  // namespace fgtts

#endif  // FGTTS_COMMON_CONFIG_H_
