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

#ifndef SYNONYMNET_MODEL_H_
#define SYNONYMNET_MODEL_H_

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "synonymnet/corpus.h"
#include "synonymnet/encoder.h"
#include "synonymnet/matcher.h"
#include "synonymnet/rng.h"
#include "synonymnet/tape.h"

namespace synonymnet {

enum class Objective { kSiamese, kTriplet };
const char *ObjectiveName(Objective o);
Objective ParseObjective(const std::string &name);

// Training and architecture settings. Defaults are the large-corpus
// setting (P=20, T=50, d_ce=256, m=0.75, Adam, batch 16, lr 3e-4).
struct TrainConfig {
  size_t contexts = 20;   // P = Q, contexts sampled per entity
  size_t max_len = 50;    // T, maximum window length
  size_t d_ce = 256;      // context encoding size (both directions)
  double margin = 0.75;
  Objective objective = Objective::kTriplet;
  std::string optimizer = "adam";
  size_t batch_size = 16;
  double learning_rate = 3e-4;
  size_t epochs = 10;
  uint64_t seed = 1;
  EncoderKind encoder = EncoderKind::kAnchored;
  bool leaky = true;
  bool leaky_trainable = false;
  // Keeps W_BM symmetric so that H W G^T also equals the transposed form
  // G W H^T and an entity scores 1.0 against itself.
  bool symmetric_bm = true;
  bool finetune_embeddings = false;
  bool resample_contexts = true;  // fresh contexts every epoch
  double clip_norm = 5.0;         // global gradient norm; 0 disables
  size_t neg_ratio = 1;           // siamese negatives per positive
  size_t samples_per_epoch = 0;   // 0: one pass over the ordered positives
  double init_scale = 0.08;

  // Throws UsageError when an invariant is violated.
  void Validate() const;
};

// Sets one field from its key (the field name) and textual value.
void SetConfigValue(TrainConfig &config, const std::string &key,
                    const std::string &value);
// Flat "key=value" lines; '#' starts a comment. Unknown keys are errors.
void ApplyConfigText(TrainConfig &config, std::istream &in);
void ApplyConfigFile(TrainConfig &config, const std::string &path);
// Every field as "key=value\n", in declaration order.
std::string FormatConfig(const TrainConfig &config);

struct ModelParams {
  EncoderParams encoder;
  Matrix w_bm;
  LeakyUnit leaky;
  std::optional<Matrix> embeddings;  // present only when fine-tuned

  struct Named {
    std::string name;
    Matrix *value;
  };
  // Trainable parameters for `config`, in a fixed order.
  std::vector<Named> Trainable(const TrainConfig &config);
  // Every stored parameter (trainable or not), in a fixed order.
  std::vector<Named> All();
};

struct Model {
  TrainConfig config;
  ModelParams params;

  // Embedding table used by the encoder: the fine-tuned copy if present.
  const Matrix &EmbeddingMatrix(const Matrix &pretrained) const {
    return params.embeddings ? *params.embeddings : pretrained;
  }
};

Model InitModel(const TrainConfig &config, const Matrix &pretrained, Rng &rng);

// Model bound onto a tape.
struct ModelVars {
  EncoderVars encoder;
  Var w_bm;        // effective bilinear matrix (symmetrised if configured)
  Var leaky;       // invalid when the leaky unit is off
  Var embeddings;
  std::vector<Var> trainable;  // aligned with ModelParams::Trainable
};

ModelVars BindModel(Tape &tape, const Model &model, const Matrix &pretrained,
                    bool trainable);

// Bilinear matrix actually used for matching.
Matrix EffectiveBilinear(const Model &model);

// Encodes windows with the model's encoder (P x d_ce).
Matrix EncodeContexts(const Model &model, const Matrix &pretrained,
                      std::span<const ContextWindow> windows);

// Full match of two encoded context sets under the model.
MatchResult MatchEncoded(const Model &model, const Matrix &h, const Matrix &g);

}  // namespace synonymnet

#endif  // SYNONYMNET_MODEL_H_
