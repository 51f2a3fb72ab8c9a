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

#include "synonymnet/model_gradcheck.h"

#include <random>

#include "synonymnet/trainer.h"

namespace synonymnet {
namespace {

ContextWindow RandomWindow(TokenId entity, const GradCheckSetup &s, Rng &rng) {
  ContextWindow w;
  const size_t len = 1 + UniformIndex(rng, s.max_len);
  w.entity_pos = UniformIndex(rng, len);
  for (size_t t = 0; t < len; ++t) {
    w.token_ids.push_back(t == w.entity_pos
                              ? entity
                              : static_cast<TokenId>(2 + UniformIndex(rng, s.vocab - 2)));
  }
  return w;
}

}  // namespace

std::vector<ModelGradCase> RunModelGradCheck(const GradCheckSetup &s) {
  std::vector<ModelGradCase> out;
  for (Objective objective : {Objective::kTriplet, Objective::kSiamese}) {
    for (EncoderKind encoder : {EncoderKind::kAnchored, EncoderKind::kFull}) {
      for (bool leaky : {true, false}) {
        TrainConfig config;
        config.d_ce = s.d_ce;
        config.contexts = s.contexts;
        config.max_len = s.max_len;
        config.objective = objective;
        config.encoder = encoder;
        config.leaky = leaky;
        config.leaky_trainable = true;
        config.finetune_embeddings = true;
        config.init_scale = s.init_scale;
        config.margin = objective == Objective::kTriplet ? 2.5 : 0.05;

        Rng rng = MakeStream(s.seed, "gradcheck", out.size());
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Matrix table(s.vocab, s.embed_dim);
        for (double &v : table.data()) v = u(rng);
        Model model = InitModel(config, table, rng);
        for (double &v : model.params.leaky.vector.data()) v = s.init_scale * u(rng);

        const TokenId a = 2, b = 3, c = 4;
        ContextTable contexts;
        for (TokenId e : {a, b, c}) {
          for (size_t p = 0; p < s.contexts; ++p) contexts[e].push_back(RandomWindow(e, s, rng));
        }

        ParamSet params;
        for (const auto &p : model.params.All()) params.push_back({p.name, *p.value});
        const size_t hidden = config.d_ce / 2;
        LossBuilder build = [&, config, hidden](Tape &tape, std::span<const Var> v) {
          ModelVars vars;
          vars.encoder.forward = {v[0], v[1], v[2]};
          vars.encoder.backward = {v[3], v[4], v[5]};
          vars.encoder.hidden = hidden;
          vars.w_bm = tape.Symmetrize(v[6]);
          if (config.leaky) vars.leaky = v[7];
          vars.embeddings = v[8];
          if (config.objective == Objective::kTriplet) {
            return SampleLossOnTape(tape, vars, config, contexts, {a, b, c, 0});
          }
          Var pos = SampleLossOnTape(tape, vars, config, contexts, {a, b, 0, 1});
          Var neg = SampleLossOnTape(tape, vars, config, contexts, {a, c, 0, 0});
          return tape.Add(pos, neg);
        };
        ModelGradCase gc;
        gc.name = std::string(ObjectiveName(objective)) + "/" + EncoderKindName(encoder) + "/" +
                  (leaky ? "leaky" : "no-leaky");
        gc.loss = EvaluateLoss(build, params);
        gc.report = FiniteDiffCheck(build, params, s.eps);
        out.push_back(std::move(gc));
      }
    }
  }
  return out;
}

}  // namespace synonymnet
