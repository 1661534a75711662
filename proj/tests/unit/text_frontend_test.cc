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

#include <gtest/gtest.h>

#include <filesystem>

#include "fgtts/common/error.h"
#include "fgtts/text_frontend/inventory.h"

namespace fgtts::text {
namespace {

TEST(InventoryTest, CharModeReservedPlusSorted) {
  SymbolInventory inv = SymbolInventory::Build({"ab", "ba"}, TokenizeMode::kCharacter);
  EXPECT_EQ(inv.size(), 5);
  EXPECT_EQ(inv.Find("a"), 3);
  EXPECT_EQ(inv.Find("b"), 4);
  EXPECT_EQ(inv.Find(kPadSymbol), 0);
  EXPECT_EQ(inv.Find(kBosSymbol), 1);
  EXPECT_EQ(inv.Find(kEosSymbol), 2);
}

TEST(InventoryTest, Deterministic) {
  std::vector<std::string> t{"hello world", "the cat"};
  EXPECT_TRUE(SymbolInventory::Build(t, TokenizeMode::kCharacter) ==
              SymbolInventory::Build(t, TokenizeMode::kCharacter));
}

TEST(InventoryTest, WhitespaceModeCountsPseudoPhonemes) {
  SymbolInventory inv = SymbolInventory::Build({"AH B"}, TokenizeMode::kWhitespace);
  EXPECT_EQ(inv.size(), 3 + 2);
  EXPECT_EQ(inv.Encode("AH B", {TokenizeMode::kWhitespace}), (std::vector<int>{3, 4}));
}

TEST(InventoryTest, EmptyCorpusRejected) {
  EXPECT_THROW(SymbolInventory::Build(std::vector<std::string>{}, TokenizeMode::kCharacter),
               InvalidInput);
}

TEST(EncodeTest, BasicAndBosEos) {
  SymbolInventory inv = SymbolInventory::Build({"ab"}, TokenizeMode::kCharacter);
  EXPECT_EQ(inv.Encode("ab", {}), (std::vector<int>{3, 4}));
  EncodeOptions o;
  o.add_bos = o.add_eos = true;
  EXPECT_EQ(inv.Encode("ab", o), (std::vector<int>{1, 3, 4, 2}));
  EXPECT_EQ(inv.Decode(inv.Encode("ab", o), TokenizeMode::kCharacter), "ab");
}

TEST(EncodeTest, EmptyTextAndUnknownSymbol) {
  SymbolInventory inv = SymbolInventory::Build({"ab"}, TokenizeMode::kCharacter);
  EXPECT_THROW(inv.Encode("", {}), EmptyText);
  EXPECT_THROW(inv.Encode("   ", {TokenizeMode::kWhitespace}), EmptyText);
  try {
    inv.Encode("abc", {});
    FAIL();
  } catch (const UnknownSymbol& e) {
    EXPECT_EQ(e.symbol(), "c");
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(EncodeTest, UnknownMappedWhenAllowed) {
  SymbolInventory inv = SymbolInventory::Build({"ab"}, TokenizeMode::kCharacter, true);
  EncodeOptions o;
  o.allow_unknown = true;
  std::vector<int> ids = inv.Encode("axb", o);
  EXPECT_EQ(inv.Symbol(ids[1]), kUnkSymbol);
  EXPECT_THROW(inv.Encode("axb", {}), UnknownSymbol);
}

TEST(EncodeTest, RoundTripOnCoveredText) {
  std::vector<std::string> texts{"the quick brown fox", "jumps over", "la\xc3\xa9t"};
  SymbolInventory inv = SymbolInventory::Build(texts, TokenizeMode::kCharacter);
  for (const auto& t : texts) {
    EXPECT_EQ(inv.Decode(inv.Encode(t, {}), TokenizeMode::kCharacter), t);
  }
  SymbolInventory w = SymbolInventory::Build(texts, TokenizeMode::kWhitespace);
  EXPECT_EQ(w.Decode(w.Encode("jumps over", {TokenizeMode::kWhitespace}),
                     TokenizeMode::kWhitespace),
            "jumps over");
}

TEST(InventoryTest, SaveLoadRoundTrip) {
  auto path = std::filesystem::temp_directory_path() / "fgtts_inventory_test.tsv";
  SymbolInventory inv = SymbolInventory::Build({"hello", "world"}, TokenizeMode::kCharacter);
  inv.Save(path.string());
  SymbolInventory back = SymbolInventory::Load(path.string());
  EXPECT_TRUE(back == inv);
  EXPECT_EQ(back.Encode("hello", {}), inv.Encode("hello", {}));
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace fgtts::text
