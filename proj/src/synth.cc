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

#include "synonymnet/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "synonymnet/error.h"
#include "synonymnet/rng.h"

namespace synonymnet {
namespace {

void WriteVector(std::ostream &out, const std::string &token, const std::vector<double> &v) {
  char buf[32];
  out << token;
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), " %.6f", x);
    out << buf;
  }
  out << '\n';
}

}  // namespace

std::string EntityToken(size_t cluster, size_t index) {
  return "ent" + std::to_string(cluster) + "_" + std::to_string(index);
}

void SynthConfig::Validate() const {
  if (clusters < 2) throw UsageError("synth: need at least 2 clusters");
  if (entities_per_cluster < 2) throw UsageError("synth: need at least 2 entities per cluster");
  if (contexts_per_entity < 1) throw UsageError("synth: contexts per entity must be >= 1");
  if (!(noise >= 0.0 && noise <= 1.0)) throw UsageError("synth: noise must be in [0, 1]");
  if (embed_dim < 2) throw UsageError("synth: embed_dim must be >= 2");
  if (!(semantic_fraction > 0.0 && semantic_fraction <= 1.0)) {
    throw UsageError("synth: semantic_fraction must be in (0, 1]");
  }
  if (min_sentence < 1 || max_sentence < min_sentence) {
    throw UsageError("synth: need 1 <= min_sentence <= max_sentence");
  }
  const size_t entities = clusters * entities_per_cluster;
  if (vocab_size < entities + 2 * clusters + 1) {
    throw UsageError("synth: vocab_size " + std::to_string(vocab_size) +
                     " is too small for " + std::to_string(entities) + " entities");
  }
}

SynthStats GenerateSynthetic(const SynthConfig &config, std::ostream &corpus,
                             std::ostream &synsets, std::ostream &embeddings) {
  config.Validate();
  const size_t n_ent = config.clusters * config.entities_per_cluster;
  const size_t rest = config.vocab_size - n_ent;
  SynthStats stats;
  stats.signature_per_cluster = (rest / 2) / config.clusters;
  stats.background = rest - stats.signature_per_cluster * config.clusters;

  Rng text = MakeStream(config.seed, "synth.text");
  Rng geo = MakeStream(config.seed, "synth.embeddings");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<size_t> length(config.min_sentence, config.max_sentence);

  auto sig = [](size_t c, size_t j) { return "s" + std::to_string(c) + "_" + std::to_string(j); };
  auto bg = [](size_t j) { return "w" + std::to_string(j); };

  for (size_t c = 0; c < config.clusters; ++c) {
    for (size_t e = 0; e < config.entities_per_cluster; ++e) {
      for (size_t s = 0; s < config.contexts_per_entity; ++s) {
        const bool informative = unit(text) >= config.noise;
        const size_t len = length(text);
        const size_t pos = UniformIndex(text, len);
        for (size_t t = 0; t < len; ++t) {
          if (t) corpus << ' ';
          if (t == pos) {
            corpus << EntityToken(c, e);
          } else if (informative && unit(text) < 0.5) {
            corpus << sig(c, UniformIndex(text, stats.signature_per_cluster));
          } else {
            corpus << bg(UniformIndex(text, stats.background));
          }
        }
        corpus << '\n';
        ++stats.sentences;
      }
      synsets << (e ? "\t" : "") << EntityToken(c, e);
    }
    synsets << '\n';
  }

  // Vectors are [semantic | nuisance]. Cluster structure lives in the
  // semantic block only; the nuisance block is the same noise for every token.
  const size_t d = config.embed_dim;
  const size_t ds = std::max<size_t>(1, static_cast<size_t>(std::lround(config.semantic_fraction * d)));
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
  // Unit-scale mixture: the centroid share of the squared norm is 1/(1+s^2).
  auto draw = [&](std::vector<double> &v, const std::vector<double> *center, double spread) {
    const double norm = center ? 1.0 / std::sqrt(1.0 + spread * spread) : 1.0;
    for (size_t i = 0; i < ds; ++i) {
      v[i] = norm * ((center ? (*center)[i] : 0.0) + (center ? spread : 1.0) * gauss(geo));
    }
    for (size_t i = ds; i < d; ++i) v[i] = gauss(geo);
  };
  embeddings << config.vocab_size << ' ' << d << '\n';
  std::vector<double> centroid(d, 0.0), v(d);
  for (size_t c = 0; c < config.clusters; ++c) {
    for (size_t i = 0; i < ds; ++i) centroid[i] = gauss(geo);
    for (size_t e = 0; e < config.entities_per_cluster; ++e) {
      draw(v, &centroid, config.entity_spread);
      WriteVector(embeddings, EntityToken(c, e), v);
    }
    for (size_t j = 0; j < stats.signature_per_cluster; ++j) {
      draw(v, &centroid, config.signature_spread);
      WriteVector(embeddings, sig(c, j), v);
    }
  }
  for (size_t j = 0; j < stats.background; ++j) {
    draw(v, nullptr, 1.0);
    WriteVector(embeddings, bg(j), v);
  }
  return stats;
}

SynthStats GenerateSyntheticFiles(const SynthConfig &config, const std::string &dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream corpus(base / "corpus.txt"), synsets(base / "synsets.tsv"),
      embeddings(base / "embeddings.txt");
  if (!corpus || !synsets || !embeddings) throw DataError("synth: cannot write into " + dir);
  return GenerateSynthetic(config, corpus, synsets, embeddings);
}

}  // namespace synonymnet
