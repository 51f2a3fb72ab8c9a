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

#ifndef SYNONYMNET_TRAINER_H_
#define SYNONYMNET_TRAINER_H_

#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "synonymnet/corpus.h"
#include "synonymnet/embeddings.h"
#include "synonymnet/model.h"

namespace synonymnet {

// One training example. Triplets use (a, b, c) = (anchor, positive,
// negative); siamese pairs use (a, b) with `label`.
struct Sample {
  TokenId a = 0;
  TokenId b = 0;
  TokenId c = 0;
  int label = 0;
};

// Sampled context windows per entity for one epoch.
using ContextTable = std::unordered_map<TokenId, std::vector<ContextWindow>>;

// Draws `count` windows for every entity from stream (seed, name, entity).
ContextTable SampleContextTable(const Corpus &corpus, std::span<const TokenId> entities,
                                size_t count, size_t max_len, uint64_t seed,
                                const std::string &name);

// Loss of one sample recorded on `tape` against the bound model.
Var SampleLossOnTape(Tape &tape, const ModelVars &vars, const TrainConfig &config,
                     const ContextTable &contexts, const Sample &sample);

struct BatchGradient {
  double loss_sum = 0.0;       // summed over samples
  std::vector<Matrix> grads;   // summed, aligned with ModelParams::Trainable
};

// Per-sample gradients are computed on independent tapes (in parallel for
// ComputeBatchGradient) and reduced in sample order, so both functions
// return bitwise-identical results.
BatchGradient ComputeBatchGradient(const Model &model, const Matrix &pretrained,
                                   const ContextTable &contexts,
                                   std::span<const Sample> samples);
BatchGradient ComputeBatchGradientSerial(const Model &model, const Matrix &pretrained,
                                         const ContextTable &contexts,
                                         std::span<const Sample> samples);

struct EpochRecord {
  size_t epoch = 0;
  double train_loss = 0.0;  // mean sample loss over the epoch's batches
  double valid_auc = std::numeric_limits<double>::quiet_NaN();  // NaN: no valid split
};

struct TrainHistory {
  double initial_loss = 0.0;  // mean loss on the first epoch's samples before any step
  std::vector<EpochRecord> epochs;
  size_t best_epoch = 0;  // epoch whose parameters were kept
};

// "epoch\ttrain_loss\tvalid_auc" rows after an "initial_loss" line.
std::string FormatHistory(const TrainHistory &history);

struct TrainResult {
  Model model;
  TrainHistory history;
};

// Mini-batch training on the train split. Each epoch samples fresh contexts
// (unless resample_contexts is off) and fresh pairs or triplets, then
// steps the optimizer on the batch-mean gradient after global-norm
// clipping. With a valid split, the parameters of the epoch with the best
// validation AUC are returned; otherwise those of the last epoch. Throws
// NumericError on a non-finite loss.
TrainResult Train(const TrainConfig &config, const Corpus &corpus,
                  const Matrix &pretrained, std::ostream *log = nullptr);

// Number of samples drawn per epoch under `config`.
size_t SamplesPerEpoch(const TrainConfig &config, const SynsetStore &store);

// Bilinear embedding baseline x_u W x_v^T fitted with the siamese loss on
// train-split pairs. W starts at the identity.
Matrix TrainBaseline(const TrainConfig &config, const Corpus &corpus,
                     const EmbeddingTable &table);

}  // namespace synonymnet

#endif  // SYNONYMNET_TRAINER_H_
