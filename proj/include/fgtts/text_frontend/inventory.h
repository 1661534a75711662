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

#ifndef FGTTS_TEXT_FRONTEND_INVENTORY_H_
#define FGTTS_TEXT_FRONTEND_INVENTORY_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fgtts/corpus/types.h"

namespace fgtts::text {

enum class TokenizeMode {
  kCharacter,   // one symbol per UTF-8 code point
  kWhitespace,  // whitespace-separated pseudo-phonemes
};

TokenizeMode ParseTokenizeMode(const std::string& name);
std::string TokenizeModeName(TokenizeMode mode);

inline constexpr int kPadId = 0;
inline constexpr int kBosId = 1;
inline constexpr int kEosId = 2;
inline constexpr int kFirstSymbolId = 3;
inline constexpr const char* kPadSymbol = "<pad>";
inline constexpr const char* kBosSymbol = "<bos>";
inline constexpr const char* kEosSymbol = "<eos>";
inline constexpr const char* kUnkSymbol = "<unk>";

std::vector<std::string> Tokenize(const std::string& text, TokenizeMode mode);

struct EncodeOptions {
  TokenizeMode mode = TokenizeMode::kCharacter;
  bool add_bos = false;
  bool add_eos = false;
  // Map unknown symbols to <unk> instead of failing. The inventory must have
  // been built with an <unk> entry.
  bool allow_unknown = false;
};

// Bijective symbol <-> id map with reserved ids pad=0, bos=1, eos=2.
class SymbolInventory {
 public:
  SymbolInventory();

  // Ordinary symbols get ids 3, 4, ... in sorted order. <unk>, when
  // requested, sorts with the rest.
  static SymbolInventory Build(const std::vector<std::string>& transcripts,
                               TokenizeMode mode, bool with_unknown = false);
  static SymbolInventory Build(const corpus::CorpusManifest& corpus,
                               TokenizeMode mode, bool with_unknown = false);

  // "symbol<TAB>id" lines sorted by symbol.
  void Save(const std::string& path) const;
  static SymbolInventory Load(const std::string& path);

  std::optional<int> Find(const std::string& symbol) const;
  const std::string& Symbol(int id) const;
  int size() const { return static_cast<int>(id_to_symbol_.size()); }
  bool has_unknown() const { return symbol_to_id_.count(kUnkSymbol) > 0; }

  std::vector<int> Encode(const std::string& text, const EncodeOptions& options) const;
  // Inverse of Encode on covered text; reserved ids are dropped.
  std::string Decode(const std::vector<int>& ids, TokenizeMode mode) const;

  bool operator==(const SymbolInventory& o) const {
    return symbol_to_id_ == o.symbol_to_id_;
  }

 private:
  void Add(const std::string& symbol, int id);

  std::map<std::string, int> symbol_to_id_;
  std::vector<std::string> id_to_symbol_;
};

}  // namespace fgtts::text

#endif  // FGTTS_TEXT_FRONTEND_INVENTORY_H_
