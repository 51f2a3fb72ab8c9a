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

#include "synonymnet/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>

#include "synonymnet/error.h"
#include "synonymnet/eval.h"
#include "synonymnet/losses.h"
#include "synonymnet/optimizer.h"
#include "synonymnet/rng.h"

namespace synonymnet {
namespace {

struct SampleGrad {
  double loss = 0.0;
  std::vector<Matrix> grads;
};

const std::vector<ContextWindow> &ContextsOf(const ContextTable &contexts, TokenId e) {
  auto it = contexts.find(e);
  if (it == contexts.end()) {
    throw DataError("no sampled contexts for entity id " + std::to_string(e));
  }
  return it->second;
}

Var EncodeEntity(Tape &tape, const ModelVars &vars, const TrainConfig &config,
                 const ContextTable &contexts, TokenId e) {
  return EncodeBatchOnTape(tape, vars.encoder, vars.embeddings, ContextsOf(contexts, e),
                           config.encoder);
}

SampleGrad OneSample(const Model &model, const Matrix &pretrained,
                     const ContextTable &contexts, const Sample &sample, bool backward) {
  Tape tape;
  const ModelVars vars = BindModel(tape, model, pretrained, backward);
  const Var loss = SampleLossOnTape(tape, vars, model.config, contexts, sample);
  SampleGrad out;
  out.loss = tape.scalar(loss);
  if (!backward || !std::isfinite(out.loss)) return out;
  tape.Backward(loss);
  out.grads.reserve(vars.trainable.size());
  for (Var v : vars.trainable) out.grads.push_back(tape.grad(v));
  return out;
}

BatchGradient Reduce(std::vector<SampleGrad> &per_sample) {
  BatchGradient out;
  for (SampleGrad &s : per_sample) {
    out.loss_sum += s.loss;
    if (out.grads.empty()) {
      out.grads = std::move(s.grads);
      continue;
    }
    for (size_t k = 0; k < out.grads.size(); ++k) {
      auto dst = out.grads[k].data();
      auto src = s.grads[k].data();
      for (size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
  return out;
}

std::vector<SampleGrad> RunSamples(const Model &model, const Matrix &pretrained,
                                   const ContextTable &contexts,
                                   std::span<const Sample> samples, bool backward,
                                   bool parallel) {
  const long n = static_cast<long>(samples.size());
  std::vector<SampleGrad> out(samples.size());
  std::vector<std::exception_ptr> errors(samples.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < n; ++i) {
    try {
      out[i] = OneSample(model, pretrained, contexts, samples[i], backward);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string Real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<Sample> DrawSamples(const TrainConfig &config, const SynsetStore &store,
                                size_t n, Rng &rng) {
  std::vector<Sample> out;
  if (config.objective == Objective::kTriplet) {
    for (const auto &t : SampleTriplets(store, n, rng)) {
      out.push_back({t.anchor, t.positive, t.negative, 0});
    }
  } else {
    for (const auto &p : SamplePairs(store, n, config.neg_ratio, rng)) {
      out.push_back({p.e, p.k, 0, p.label});
    }
    std::shuffle(out.begin(), out.end(), rng);
  }
  return out;
}

std::string ParamNorms(Model &model) {
  std::ostringstream o;
  for (const auto &p : model.params.Trainable(model.config)) {
    double sq = 0.0;
    for (double v : p.value->data()) sq += v * v;
    o << ' ' << p.name << '=' << Real(std::sqrt(sq));
  }
  return o.str();
}

}  // namespace

ContextTable SampleContextTable(const Corpus &corpus, std::span<const TokenId> entities,
                                size_t count, size_t max_len, uint64_t seed,
                                const std::string &name) {
  ContextTable table;
  for (TokenId e : entities) {
    Rng rng = MakeStream(seed, name, static_cast<uint64_t>(e));
    table.emplace(e, RetrieveContexts(corpus, e, count, max_len, rng));
  }
  return table;
}

Var SampleLossOnTape(Tape &tape, const ModelVars &vars, const TrainConfig &config,
                     const ContextTable &contexts, const Sample &sample) {
  const Var h = EncodeEntity(tape, vars, config, contexts, sample.a);
  const Var g = EncodeEntity(tape, vars, config, contexts, sample.b);
  const Var s = MatchScoreOnTape(tape, h, g, vars.w_bm, vars.leaky);
  if (config.objective == Objective::kSiamese) {
    return SiameseLossOnTape(tape, s, sample.label, config.margin);
  }
  // The anchor's global context depends on its counterpart, so each side of
  // the triplet gets its own match.
  const Var gn = EncodeEntity(tape, vars, config, contexts, sample.c);
  const Var sn = MatchScoreOnTape(tape, h, gn, vars.w_bm, vars.leaky);
  return TripletLossOnTape(tape, s, sn, config.margin);
}

BatchGradient ComputeBatchGradient(const Model &model, const Matrix &pretrained,
                                   const ContextTable &contexts,
                                   std::span<const Sample> samples) {
  auto per = RunSamples(model, pretrained, contexts, samples, true, true);
  return Reduce(per);
}

BatchGradient ComputeBatchGradientSerial(const Model &model, const Matrix &pretrained,
                                         const ContextTable &contexts,
                                         std::span<const Sample> samples) {
  auto per = RunSamples(model, pretrained, contexts, samples, true, false);
  return Reduce(per);
}

size_t SamplesPerEpoch(const TrainConfig &config, const SynsetStore &store) {
  if (config.samples_per_epoch > 0) return config.samples_per_epoch;
  const size_t pos = PositivePairs(store, Split::kTrain).size();
  return config.objective == Objective::kSiamese ? pos * (1 + config.neg_ratio) : pos;
}

std::string FormatHistory(const TrainHistory &h) {
  std::ostringstream o;
  o << "initial_loss=" << Real(h.initial_loss) << '\n'
    << "best_epoch=" << h.best_epoch << '\n'
    << "epoch\ttrain_loss\tvalid_auc\n";
  for (const auto &e : h.epochs) {
    o << e.epoch << '\t' << Real(e.train_loss) << '\t'
      << (std::isnan(e.valid_auc) ? std::string("nan") : Real(e.valid_auc)) << '\n';
  }
  return o.str();
}

TrainResult Train(const TrainConfig &config, const Corpus &corpus,
                  const Matrix &pretrained, std::ostream *log) {
  config.Validate();
  const SynsetStore &store = corpus.synsets;
  const std::vector<TokenId> train_entities = store.Entities(Split::kTrain);
  if (train_entities.empty()) throw DataError("train split is empty");
  if (pretrained.rows() != corpus.vocab.size()) {
    throw ShapeError("embedding table has " + std::to_string(pretrained.rows()) +
                     " rows for a vocabulary of " + std::to_string(corpus.vocab.size()));
  }
  bool has_valid = false;
  {
    const EvalPairs vp = BuildEvalPairs(store, Split::kValid, config.seed);
    const auto pos = std::count(vp.labels.begin(), vp.labels.end(), 1);
    has_valid = pos > 0 && pos < static_cast<long>(vp.labels.size());
  }

  Rng init = MakeStream(config.seed, "train.init");
  TrainResult result{InitModel(config, pretrained, init), {}};
  Model &model = result.model;
  Optimizer opt(ParseOptimizerKind(config.optimizer), config.learning_rate);
  const size_t n = SamplesPerEpoch(config, store);

  Model best = model;
  double best_auc = -1.0;
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const size_t ctx_epoch = config.resample_contexts ? epoch : 1;
    const ContextTable contexts =
        SampleContextTable(corpus, train_entities, config.contexts, config.max_len,
                           config.seed, "train.contexts." + std::to_string(ctx_epoch));
    Rng srng = MakeStream(config.seed, "train.samples", epoch);
    const std::vector<Sample> samples = DrawSamples(config, store, n, srng);

    if (epoch == 1) {
      auto fwd = RunSamples(model, pretrained, contexts, samples, false, true);
      double s = 0.0;
      for (const auto &f : fwd) s += f.loss;
      result.history.initial_loss = s / static_cast<double>(samples.size());
    }

    double loss_sum = 0.0;
    size_t batch_index = 0;
    for (size_t begin = 0; begin < samples.size(); begin += config.batch_size, ++batch_index) {
      const size_t count = std::min(config.batch_size, samples.size() - begin);
      BatchGradient bg = ComputeBatchGradient(model, pretrained, contexts,
                                              std::span(samples).subspan(begin, count));
      if (!std::isfinite(bg.loss_sum)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index) + "; parameter norms:" +
                           ParamNorms(model));
      }
      loss_sum += bg.loss_sum;
      const double inv = 1.0 / static_cast<double>(count);
      for (Matrix &g : bg.grads) {
        for (double &v : g.data()) v *= inv;
      }
      const double norm = ClipGlobalNorm(bg.grads, config.clip_norm);
      if (!std::isfinite(norm)) {
        throw NumericError("non-finite gradient at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(batch_index) +
                           "; parameter norms:" + ParamNorms(model));
      }
      std::vector<Matrix *> ptrs;
      for (const auto &p : model.params.Trainable(model.config)) ptrs.push_back(p.value);
      opt.Step(ptrs, bg.grads);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(samples.size());
    if (has_valid) {
      rec.valid_auc = PairAuc(model, corpus, pretrained, Split::kValid, config.seed);
      if (rec.valid_auc > best_auc) {
        best_auc = rec.valid_auc;
        best = model;
        result.history.best_epoch = epoch;
      }
    }
    result.history.epochs.push_back(rec);
    if (log != nullptr) {
      *log << "epoch " << epoch << " train_loss=" << Real(rec.train_loss)
           << " valid_auc=" << (has_valid ? Real(rec.valid_auc) : std::string("nan")) << '\n';
    }
  }
  if (has_valid && result.history.best_epoch > 0) {
    model = std::move(best);
  } else {
    result.history.best_epoch = config.epochs;
  }
  return result;
}

Matrix TrainBaseline(const TrainConfig &config, const Corpus &corpus,
                     const EmbeddingTable &table) {
  config.Validate();
  const size_t d = table.dim();
  Matrix w = Matrix::Identity(d);
  Optimizer opt(ParseOptimizerKind(config.optimizer), config.learning_rate);
  TrainConfig pair_config = config;
  pair_config.objective = Objective::kSiamese;
  const size_t n = SamplesPerEpoch(pair_config, corpus.synsets);
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    Rng rng = MakeStream(config.seed, "baseline.samples", epoch);
    std::vector<TrainingPair> pairs = SamplePairs(corpus.synsets, n, config.neg_ratio, rng);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (size_t begin = 0; begin < pairs.size(); begin += config.batch_size) {
      const size_t count = std::min(config.batch_size, pairs.size() - begin);
      Matrix grad(d, d);
      for (size_t i = begin; i < begin + count; ++i) {
        Tape tape;
        const Var wv = tape.ParameterRef(w);
        const Var xu = tape.Constant(Matrix::RowVector(table.vector(pairs[i].e)));
        const Var xv = tape.Constant(Matrix::RowVector(table.vector(pairs[i].k)));
        const Var s = tape.MatMulTransB(tape.MatMul(xu, wv), xv);
        const Var loss = SiameseLossOnTape(tape, s, pairs[i].label, config.margin);
        if (!std::isfinite(tape.scalar(loss))) {
          throw NumericError("baseline: non-finite loss at epoch " + std::to_string(epoch));
        }
        tape.Backward(loss);
        const Matrix g = tape.grad(wv);
        for (size_t j = 0; j < grad.size(); ++j) grad[j] += g[j] / static_cast<double>(count);
      }
      std::vector<Matrix> grads{std::move(grad)};
      ClipGlobalNorm(grads, config.clip_norm);
      Matrix *ptr = &w;
      opt.Step(std::span(&ptr, 1), grads);
    }
  }
  return w;
}

}  // namespace synonymnet
