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

#include "fgtts/common/config.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fgtts/common/error.h"
#include "fgtts/common/strings.h"

namespace fgtts {

Config Config::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return FromString(ss.str());
}

Config Config::FromString(const std::string& text) {
  Config config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    std::string key = Trim(trimmed.substr(0, eq));
    if (key.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key");
    }
    config.Set(key, Trim(trimmed.substr(eq + 1)));
  }
  return config;
}

void Config::Set(const std::string& key, const std::string& value) {
  entries_[key] = value;
}

bool Config::Has(const std::string& key) const {
  return entries_.count(key) > 0;
}

void Config::Erase(const std::string& key) { entries_.erase(key); }

std::string Config::GetString(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing config key '" + key + "'");
  return it->second;
}

int Config::GetInt(const std::string& key) const {
  std::string v = GetString(key);
  try {
    size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: " + v);
  }
}

double Config::GetDouble(const std::string& key) const {
  std::string v = GetString(key);
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: " + v);
  }
}

bool Config::GetBool(const std::string& key) const {
  std::string v = GetString(key);
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': not a boolean: " + v);
}

std::vector<double> Config::GetDoubleList(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : Split(GetString(key), ",")) {
    std::string t = Trim(item);
    if (t.empty()) continue;
    try {
      out.push_back(std::stod(t));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': bad list item " + t);
    }
  }
  return out;
}

std::vector<int> Config::GetIntList(const std::string& key) const {
  std::vector<int> out;
  for (const std::string& item : Split(GetString(key), ",")) {
    std::string t = Trim(item);
    if (t.empty()) continue;
    try {
      out.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw ConfigError("config key '" + key + "': bad list item " + t);
    }
  }
  return out;
}

void Config::ApplyOverrides(const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    size_t eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + o + "' is not key=value");
    }
    Set(Trim(o.substr(0, eq)), Trim(o.substr(eq + 1)));
  }
}

std::string EnvironmentName(const std::string& key, const std::string& prefix) {
  std::string name = prefix;
  for (char c : key) {
    if (c == '.') {
      name += "__";
    } else {
      name += static_cast<char>(::toupper(static_cast<unsigned char>(c)));
    }
  }
  return name;
}

void Config::ApplyEnvironment(const std::string& prefix) {
  for (auto& [key, value] : entries_) {
    const char* env = std::getenv(EnvironmentName(key, prefix).c_str());
    if (env != nullptr) value = env;
  }
}

void Config::RejectUnknown(const Config& schema) const {
  for (const auto& [key, value] : entries_) {
    if (!schema.Has(key)) throw ConfigError("unknown config key '" + key + "'");
  }
}

void Config::Merge(const Config& other) {
  for (const auto& [key, value] : other.entries_) entries_[key] = value;
}

std::string Config::Dump() const {
  std::ostringstream out;
  for (const auto& [key, value] : entries_) out << key << " = " << value << "\n";
  return out.str();
}

void Config::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config to '" + path + "'");
  out << Dump();
}

}  // namespace fgtts
