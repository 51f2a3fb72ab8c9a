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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "synonymnet/checkpoint.h"
#include "synonymnet/error.h"
#include "synonymnet/model.h"

namespace synonymnet {
namespace {

Model RandomModel(bool finetune) {
  TrainConfig c;
  c.d_ce = 6;
  c.contexts = 3;
  c.finetune_embeddings = finetune;
  c.margin = 0.3;
  Rng rng(11);
  std::normal_distribution<double> g(0, 1);
  Matrix pre(12, 5);
  for (double &v : pre.data()) v = g(rng);
  Model m = InitModel(c, pre, rng);
  m.params.leaky.vector(0, 2) = 0.1 + 1e-17;
  return m;
}

std::string Save(const Model &m) {
  std::ostringstream out;
  SaveCheckpoint(m, out);
  return out.str();
}

TEST(Checkpoint, RoundTripIsByteIdentical) {
  for (bool finetune : {false, true}) {
    Model m = RandomModel(finetune);
    const std::string first = Save(m);
    std::istringstream in(first);
    Model back = LoadCheckpoint(in);
    EXPECT_EQ(Save(back), first);
    EXPECT_EQ(FormatConfig(back.config), FormatConfig(m.config));
    auto a = m.params.All(), b = back.params.All();
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(a.size(), finetune ? 9u : 8u);
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(*a[i].value, *b[i].value) << a[i].name;
  }
}

TEST(Checkpoint, ScoresIdenticalAfterLoad) {
  const Model m = RandomModel(false);
  std::istringstream in(Save(m));
  const Model back = LoadCheckpoint(in);
  Rng rng(2);
  std::normal_distribution<double> g(0, 1);
  Matrix h(3, 6), q(4, 6);
  for (double &v : h.data()) v = g(rng);
  for (double &v : q.data()) v = g(rng);
  EXPECT_EQ(MatchEncoded(m, h, q).score, MatchEncoded(back, h, q).score);
}

TEST(Checkpoint, VersionMismatch) {
  std::string text = Save(RandomModel(false));
  text.replace(0, text.find('\n'), "synonymnet-checkpoint 99");
  std::istringstream in(text);
  try {
    LoadCheckpoint(in);
    FAIL() << "expected DataError";
  } catch (const DataError &e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, CorruptShapeNamesTheField) {
  std::string text = Save(RandomModel(false));
  const size_t at = text.find("param matcher.w_bm 6 6");
  ASSERT_NE(at, std::string::npos) << text.substr(0, 400);
  text.replace(at, 22, "param matcher.w_bm 6 5");
  std::istringstream in(text);
  try {
    LoadCheckpoint(in);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("w_bm"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, TruncatedAndMissingFile) {
  const std::string text = Save(RandomModel(false));
  std::istringstream in(text.substr(0, text.size() / 2));
  EXPECT_THROW(LoadCheckpoint(in), Error);
  EXPECT_THROW(LoadCheckpointFile("/nonexistent/model.ckpt"), DataError);
}

}  // namespace
}  // namespace synonymnet
