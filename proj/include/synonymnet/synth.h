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

#ifndef SYNONYMNET_SYNTH_H_
#define SYNONYMNET_SYNTH_H_

#include <cstdint>
#include <ostream>
#include <string>

namespace synonymnet {

// Synthetic synonym task. Each cluster owns a block of signature tokens;
// an entity's sentences either draw each non-entity token from its
// cluster's signature (probability 1/2) or from a shared background pool,
// or, with probability `noise`, are background only.
//
// The vocabulary holds `vocab_size` tokens: the entities, then the
// remaining tokens split evenly between signature blocks and background.
// Embedding vectors have a semantic block (the first semantic_fraction of
// the dimensions) and a nuisance block. In the semantic block, signature and
// entity tokens sit around a random cluster centroid and background tokens
// are random; the nuisance block is random for every token.
struct SynthConfig {
  size_t clusters = 40;
  size_t entities_per_cluster = 3;
  size_t contexts_per_entity = 30;
  size_t vocab_size = 2000;
  double noise = 0.3;
  size_t embed_dim = 50;
  size_t min_sentence = 8;
  size_t max_sentence = 24;
  double entity_spread = 1.0;     // entity noise relative to centroid norm
  double signature_spread = 0.75; // signature token noise relative to centroid norm
  double semantic_fraction = 0.5;
  uint64_t seed = 1;

  void Validate() const;
};

struct SynthStats {
  size_t sentences = 0;
  size_t signature_per_cluster = 0;
  size_t background = 0;
};

// Writes corpus (one sentence per line), synsets (tab-separated) and
// embeddings (text word vectors with header).
SynthStats GenerateSynthetic(const SynthConfig &config, std::ostream &corpus,
                             std::ostream &synsets, std::ostream &embeddings);

// Same into "corpus.txt", "synsets.tsv" and "embeddings.txt" under `dir`.
SynthStats GenerateSyntheticFiles(const SynthConfig &config, const std::string &dir);

std::string EntityToken(size_t cluster, size_t index);

}  // namespace synonymnet

#endif  // SYNONYMNET_SYNTH_H_
