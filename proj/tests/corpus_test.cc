// Copyright 2026 The SynonymNet Authors.
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

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "synonymnet/corpus.h"
#include "synonymnet/error.h"
#include "synonymnet/rng.h"

namespace synonymnet {
namespace {

Corpus FromText(const std::string &corpus, const std::string &synsets, uint32_t min_count,
                IngestStats *stats = nullptr) {
  std::istringstream c(corpus), s(synsets);
  return Ingest(c, s, min_count, stats);
}

std::vector<TokenId> Iota(size_t n, TokenId first = 100) {
  std::vector<TokenId> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = first + static_cast<TokenId>(i);
  return v;
}

// Ten synsets of three entities, each entity on its own lines.
Corpus TenSynsets() {
  std::string corpus, synsets;
  for (int s = 0; s < 10; ++s) {
    for (int e = 0; e < 3; ++e) {
      const std::string name = "e" + std::to_string(s) + "_" + std::to_string(e);
      for (int k = 0; k < 5; ++k) corpus += "a " + name + " b" + std::to_string(k) + "\n";
      synsets += (e ? "\t" : "") + name;
    }
    synsets += "\n";
  }
  return FromText(corpus, synsets, 5);
}

TEST(Vocabulary, ReservedIds) {
  Vocabulary v;
  EXPECT_EQ(v.Id("<unk>"), Vocabulary::kUnk);
  EXPECT_EQ(v.Id("<pad>"), Vocabulary::kPad);
  EXPECT_EQ(v.Add("x"), 2);
  EXPECT_EQ(v.Add("x"), 2);
  EXPECT_EQ(v.Id("never"), Vocabulary::kUnk);
}

TEST(Ingest, MinCountDropsRareEntity) {
  std::string corpus;
  for (int i = 0; i < 4; ++i) corpus += "the x " + std::to_string(i) + "\n";
  for (int i = 0; i < 5; ++i) corpus += "the y " + std::to_string(i) + "\n";
  for (int i = 0; i < 5; ++i) corpus += "the z " + std::to_string(i) + "\n";
  IngestStats stats;
  const Corpus c = FromText(corpus, "x\ty\tz\n", 5, &stats);
  ASSERT_EQ(c.synsets.size(), 1u);
  EXPECT_EQ(c.synsets.synset(0).size(), 2u);
  EXPECT_FALSE(c.synsets.Contains(c.vocab.Id("x")));
  EXPECT_EQ(stats.entities_dropped, 1u);
  ASSERT_EQ(stats.warnings.size(), 1u);
  EXPECT_NE(stats.warnings[0].find("'x'"), std::string::npos);
}

TEST(Ingest, DuplicateLinesAndMissingEntities) {
  IngestStats stats;
  const Corpus c = FromText("a b\na b\n\nc d\n", "a\tq\n", 1, &stats);
  EXPECT_EQ(c.lines.size(), 2u);
  EXPECT_EQ(stats.duplicate_lines, 1u);
  EXPECT_EQ(stats.entities_dropped, 1u);
  EXPECT_EQ(c.OccurrencesOf(c.vocab.Id("a")).size(), 1u);
}

TEST(Ingest, EmptySynsetFile) {
  const Corpus c = FromText("a b c\n", "", 1);
  EXPECT_TRUE(c.synsets.empty());
  EXPECT_EQ(c.lines.size(), 1u);
}

TEST(Ingest, EntityInTwoSynsetsKeepsFirst) {
  const Corpus c = FromText("a b c\n", "a\tb\nb\tc\n", 1);
  EXPECT_EQ(*c.synsets.SynsetOf(c.vocab.Id("b")), 0u);
  EXPECT_TRUE(c.synsets.AreSynonyms(c.vocab.Id("a"), c.vocab.Id("b")));
  EXPECT_FALSE(c.synsets.AreSynonyms(c.vocab.Id("b"), c.vocab.Id("c")));
}

TEST(Window, ShortSentenceIsKeptWhole) {
  const auto line = Iota(7);
  const ContextWindow w = MakeWindow(line, 3, 50, 9);
  EXPECT_EQ(w.token_ids, line);
  EXPECT_EQ(w.entity_pos, 3u);
  EXPECT_EQ(w.source_line, 9u);
}

TEST(Window, LongSentenceShiftsInward) {
  const auto line = Iota(100);
  const ContextWindow w = MakeWindow(line, 90, 50, 0);
  ASSERT_EQ(w.token_ids.size(), 50u);
  EXPECT_EQ(w.entity_pos, 40u);
  EXPECT_EQ(w.token_ids.front(), line[50]);
  EXPECT_EQ(w.token_ids.back(), line[99]);
  const ContextWindow mid = MakeWindow(line, 60, 50, 0);
  EXPECT_EQ(mid.entity_pos, 24u);
}

// Every (length, position, T) against a direct rule: contiguous slice, entity
// kept, left context min(pos, floor((T-1)/2)) unless the right side is short.
TEST(WindowProperty, EnumerationOracle) {
  for (size_t len = 1; len <= 20; ++len) {
    const auto line = Iota(len);
    for (size_t t = 1; t <= 22; ++t) {
      for (size_t pos = 0; pos < len; ++pos) {
        const ContextWindow w = MakeWindow(line, pos, t, 0);
        const size_t want = std::min(len, t);
        ASSERT_EQ(w.token_ids.size(), want);
        ASSERT_EQ(w.token_ids[w.entity_pos], line[pos]);
        const size_t start = pos - w.entity_pos;
        for (size_t i = 0; i < want; ++i) ASSERT_EQ(w.token_ids[i], line[start + i]);
        if (len > t) {
          const size_t left = (t - 1) / 2, right = t - 1 - left;
          const size_t after = len - 1 - pos;
          size_t expect = std::min(pos, left);
          if (after < right) expect = t - 1 - after;  // right side short: extend left
          else if (pos < left) expect = pos;
          ASSERT_EQ(w.entity_pos, expect) << len << " " << t << " " << pos;
        }
      }
    }
  }
}

TEST(Window, InvalidArguments) {
  const auto line = Iota(3);
  EXPECT_THROW(MakeWindow(line, 3, 5, 0), DataError);
  EXPECT_THROW(MakeWindow(line, 0, 0, 0), UsageError);
}

TEST(Retrieve, WithoutReplacementWhenEnough) {
  const Corpus c = TenSynsets();
  const TokenId e = c.vocab.Id("e0_0");
  Rng rng(1);
  const auto ws = RetrieveContexts(c, e, 5, 50, rng);
  std::set<uint32_t> lines;
  for (const auto &w : ws) lines.insert(w.source_line);
  EXPECT_EQ(lines.size(), 5u);
}

TEST(Retrieve, WithReplacementWhenShort) {
  const Corpus c = TenSynsets();
  const TokenId e = c.vocab.Id("e0_0");
  Rng rng(2);
  const auto ws = RetrieveContexts(c, e, 12, 50, rng);
  EXPECT_EQ(ws.size(), 12u);
  for (const auto &w : ws) EXPECT_EQ(w.token_ids[w.entity_pos], e);
  EXPECT_THROW(RetrieveContexts(c, c.vocab.Id("a"), 1, 50, rng), DataError);
}

TEST(Pairs, RatioAndLabels) {
  Corpus c = TenSynsets();
  Rng rng(3);
  SplitSynsets(c.synsets, 0.2, 0.2, rng);
  const auto pairs = SamplePairs(c.synsets, 100, 1, rng);
  ASSERT_EQ(pairs.size(), 100u);
  size_t pos = 0;
  for (const auto &p : pairs) {
    EXPECT_EQ(p.label, c.synsets.AreSynonyms(p.e, p.k) ? 1 : 0);
    EXPECT_NE(p.e, p.k);
    EXPECT_EQ(c.synsets.split(*c.synsets.SynsetOf(p.e)), Split::kTrain);
    EXPECT_EQ(c.synsets.split(*c.synsets.SynsetOf(p.k)), Split::kTrain);
    pos += p.label;
  }
  EXPECT_EQ(pos, 50u);
  // Negatives share the anchor of the preceding positive.
  for (size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].label == 0 && pairs[i - 1].label == 1) EXPECT_EQ(pairs[i].e, pairs[i - 1].e);
  }
}

TEST(Pairs, TripletsAreWellFormed) {
  Corpus c = TenSynsets();
  Rng rng(4);
  SplitSynsets(c.synsets, 0.0, 0.3, rng);
  for (const auto &t : SampleTriplets(c.synsets, 200, rng)) {
    EXPECT_TRUE(c.synsets.AreSynonyms(t.anchor, t.positive));
    EXPECT_NE(t.anchor, t.positive);
    EXPECT_FALSE(c.synsets.AreSynonyms(t.anchor, t.negative));
  }
}

TEST(Pairs, PositivePairsAreOrderedWithinSynset) {
  const Corpus c = TenSynsets();
  // Unsplit store: everything is train.
  EXPECT_EQ(PositivePairs(c.synsets, Split::kTrain).size(), 10u * 6u);
}

TEST(Split, SizesDisjointAndReproducible) {
  Corpus a = TenSynsets(), b = TenSynsets();
  Rng r1(9), r2(9);
  SplitSynsets(a.synsets, 0.2, 0.2, r1);
  SplitSynsets(b.synsets, 0.2, 0.2, r2);
  EXPECT_EQ(a.synsets.SynsetsIn(Split::kTrain).size(), 6u);
  EXPECT_EQ(a.synsets.SynsetsIn(Split::kValid).size(), 2u);
  EXPECT_EQ(a.synsets.SynsetsIn(Split::kTest).size(), 2u);
  for (size_t i = 0; i < a.synsets.size(); ++i) EXPECT_EQ(a.synsets.split(i), b.synsets.split(i));
  std::set<TokenId> seen;
  for (Split s : {Split::kTrain, Split::kValid, Split::kTest}) {
    for (TokenId e : a.synsets.Entities(s)) EXPECT_TRUE(seen.insert(e).second);
  }
  EXPECT_EQ(seen.size(), 30u);
}

TEST(Split, RejectsBadFractions) {
  Corpus c = TenSynsets();
  Rng rng(1);
  EXPECT_THROW(SplitSynsets(c.synsets, 0.1, 0.0, rng), UsageError);
  EXPECT_THROW(SplitSynsets(c.synsets, 0.6, 0.5, rng), UsageError);
}

TEST(Index, RoundTrip) {
  Corpus c = TenSynsets();
  Rng rng(5);
  SplitSynsets(c.synsets, 0.2, 0.2, rng);
  const auto path = std::filesystem::temp_directory_path() / "synonymnet_index_test.bin";
  SaveIndex(c, path.string());
  const Corpus d = LoadIndex(path.string());
  std::filesystem::remove(path);
  ASSERT_EQ(d.vocab.size(), c.vocab.size());
  for (TokenId i = 0; i < static_cast<TokenId>(c.vocab.size()); ++i) {
    EXPECT_EQ(d.vocab.Token(i), c.vocab.Token(i));
  }
  EXPECT_EQ(d.lines, c.lines);
  EXPECT_EQ(d.min_count, c.min_count);
  ASSERT_EQ(d.synsets.size(), c.synsets.size());
  for (size_t i = 0; i < c.synsets.size(); ++i) {
    EXPECT_EQ(d.synsets.synset(i), c.synsets.synset(i));
    EXPECT_EQ(d.synsets.split(i), c.synsets.split(i));
  }
  for (TokenId e : c.synsets.AllEntities()) {
    EXPECT_EQ(d.OccurrencesOf(e).size(), c.OccurrencesOf(e).size());
  }
}

TEST(Index, MissingOrCorruptFile) {
  EXPECT_THROW(LoadIndex("/nonexistent/index.bin"), DataError);
  const auto path = std::filesystem::temp_directory_path() / "synonymnet_bad_index.bin";
  { std::ofstream(path) << "not an index"; }
  EXPECT_THROW(LoadIndex(path.string()), DataError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace synonymnet
