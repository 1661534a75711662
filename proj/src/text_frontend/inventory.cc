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

#include "fgtts/text_frontend/inventory.h"

#include <fstream>
#include <set>

#include "fgtts/common/error.h"
#include "fgtts/common/strings.h"

namespace fgtts::text {

TokenizeMode ParseTokenizeMode(const std::string& name) {
  if (name == "char" || name == "character") return TokenizeMode::kCharacter;
  if (name == "whitespace" || name == "phoneme") return TokenizeMode::kWhitespace;
  throw UsageError("unknown tokenize mode '" + name + "' (expected char or whitespace)");
}

std::string TokenizeModeName(TokenizeMode mode) {
  return mode == TokenizeMode::kCharacter ? "char" : "whitespace";
}

std::vector<std::string> Tokenize(const std::string& text, TokenizeMode mode) {
  if (mode == TokenizeMode::kWhitespace) return SplitWhitespace(text);
  std::vector<std::string> out;
  for (size_t i = 0; i < text.size();) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    len = std::min(len, text.size() - i);
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

SymbolInventory::SymbolInventory() {
  Add(kPadSymbol, kPadId);
  Add(kBosSymbol, kBosId);
  Add(kEosSymbol, kEosId);
}

void SymbolInventory::Add(const std::string& symbol, int id) {
  if (symbol_to_id_.count(symbol)) throw InvalidInput("duplicate symbol '" + symbol + "'");
  if (id < static_cast<int>(id_to_symbol_.size()) && !id_to_symbol_[id].empty()) {
    throw InvalidInput("duplicate symbol id " + std::to_string(id));
  }
  if (id >= static_cast<int>(id_to_symbol_.size())) id_to_symbol_.resize(id + 1);
  id_to_symbol_[id] = symbol;
  symbol_to_id_[symbol] = id;
}

SymbolInventory SymbolInventory::Build(const std::vector<std::string>& transcripts,
                                       TokenizeMode mode, bool with_unknown) {
  if (transcripts.empty()) throw InvalidInput("cannot build an inventory from an empty corpus");
  std::set<std::string> symbols;
  for (const auto& t : transcripts) {
    for (auto& s : Tokenize(t, mode)) symbols.insert(std::move(s));
  }
  if (with_unknown) symbols.insert(kUnkSymbol);
  SymbolInventory inv;
  int next = kFirstSymbolId;
  for (const auto& s : symbols) {
    if (s == kPadSymbol || s == kBosSymbol || s == kEosSymbol) continue;
    inv.Add(s, next++);
  }
  return inv;
}

SymbolInventory SymbolInventory::Build(const corpus::CorpusManifest& corpus,
                                       TokenizeMode mode, bool with_unknown) {
  std::vector<std::string> transcripts;
  for (const auto& u : corpus.utterances) transcripts.push_back(u.transcript);
  return Build(transcripts, mode, with_unknown);
}

void SymbolInventory::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  for (const auto& [symbol, id] : symbol_to_id_) out << symbol << '\t' << id << '\n';
  if (!out) throw InvalidInput("write failed for " + path);
}

SymbolInventory SymbolInventory::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  SymbolInventory inv;
  inv.symbol_to_id_.clear();
  inv.id_to_symbol_.clear();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos) throw InvalidInput(path + ": malformed line '" + line + "'");
    int id;
    try {
      id = std::stoi(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw InvalidInput(path + ": bad id in line '" + line + "'");
    }
    if (id < 0) throw InvalidInput(path + ": negative id");
    inv.Add(line.substr(0, tab), id);
  }
  auto check = [&](const char* s, int id) {
    auto it = inv.symbol_to_id_.find(s);
    if (it == inv.symbol_to_id_.end() || it->second != id) {
      throw InvalidInput(path + ": reserved symbol " + s + " must have id " + std::to_string(id));
    }
  };
  check(kPadSymbol, kPadId);
  check(kBosSymbol, kBosId);
  check(kEosSymbol, kEosId);
  for (size_t i = 0; i < inv.id_to_symbol_.size(); ++i) {
    if (inv.id_to_symbol_[i].empty()) throw InvalidInput(path + ": ids are not contiguous");
  }
  return inv;
}

std::optional<int> SymbolInventory::Find(const std::string& symbol) const {
  auto it = symbol_to_id_.find(symbol);
  if (it == symbol_to_id_.end()) return std::nullopt;
  return it->second;
}

const std::string& SymbolInventory::Symbol(int id) const {
  if (id < 0 || id >= size()) throw InvalidInput("symbol id " + std::to_string(id) + " out of range");
  return id_to_symbol_[id];
}

std::vector<int> SymbolInventory::Encode(const std::string& text,
                                         const EncodeOptions& options) const {
  std::vector<std::string> symbols = Tokenize(text, options.mode);
  if (symbols.empty()) throw EmptyText();
  std::vector<int> ids;
  if (options.add_bos) ids.push_back(kBosId);
  for (size_t i = 0; i < symbols.size(); ++i) {
    auto id = Find(symbols[i]);
    if (!id || *id < kFirstSymbolId) {
      if (options.allow_unknown && has_unknown()) {
        ids.push_back(symbol_to_id_.at(kUnkSymbol));
        continue;
      }
      throw UnknownSymbol(symbols[i], i);
    }
    ids.push_back(*id);
  }
  if (options.add_eos) ids.push_back(kEosId);
  return ids;
}

std::string SymbolInventory::Decode(const std::vector<int>& ids, TokenizeMode mode) const {
  std::vector<std::string> parts;
  for (int id : ids) {
    if (id < kFirstSymbolId) continue;
    parts.push_back(Symbol(id));
  }
  return Join(parts, mode == TokenizeMode::kCharacter ? "" : " ");
}

}  // namespace fgtts::text
