// Copyright 2026 The visact Authors. All Rights Reserved.
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "visact/common/error.h"
#include "visact/common/rng.h"
#include "visact/nn/checkpoint.h"
#include "visact/nn/decode.h"
#include "visact/nn/gradcheck.h"
#include "visact/nn/graph.h"
#include "visact/nn/layers.h"
#include "visact/nn/optim.h"

namespace visact::nn {
namespace {

constexpr double kGradTol = 1e-4;

ParamId add_random(ParameterStore& s, const std::string& name, int r, int c, Rng& rng) {
  return s.add(name, r, c, Init::kNormal, rng, 1.0);
}

void expect_gradcheck(ParameterStore& s, const std::function<Var(Graph&)>& loss, uint64_t seed = 5) {
  Rng rng(seed);
  const auto res = gradcheck(s, loss, rng);
  EXPECT_LT(res.max_rel_err, kGradTol) << "worst " << res.worst;
  EXPECT_GT(res.probes, 0);
}

TEST(Graph, SumOfParameterHasUnitGradient) {
  ParameterStore s;
  Rng rng(1);
  const ParamId p = add_random(s, "p", 3, 4, rng);
  Graph g(&s);
  g.backward(sum(g.param(p)));
  for (double v : s.at(p).grad.values()) EXPECT_EQ(v, 1.0);
}

TEST(Graph, ZeroScaledLossHasZeroGradient) {
  ParameterStore s;
  Rng rng(1);
  const ParamId p = add_random(s, "p", 2, 2, rng);
  Graph g(&s);
  g.backward(scale(sum(g.param(p)), 0.0));
  for (double v : s.at(p).grad.values()) EXPECT_EQ(v, 0.0);
}

TEST(Graph, SecondBackwardIsRejected) {
  ParameterStore s;
  Rng rng(1);
  const ParamId p = add_random(s, "p", 2, 2, rng);
  Graph g(&s);
  const Var l = sum(g.param(p));
  g.backward(l);
  EXPECT_THROW(g.backward(l), GraphReuse);
}

TEST(Graph, NonFiniteValuesAreRejected) {
  Graph g;
  const Var x = g.constant(Tensor(1, 2, 1.0));
  EXPECT_THROW(scale(x, std::numeric_limits<double>::infinity()), NonFiniteValue);
  EXPECT_THROW(matmul(x, x), ShapeMismatch);
}

TEST(Gradcheck, Primitives) {
  ParameterStore s;
  Rng rng(3);
  const ParamId a = add_random(s, "a", 3, 4, rng);
  const ParamId b = add_random(s, "b", 4, 5, rng);
  const ParamId c = add_random(s, "c", 3, 5, rng);
  const ParamId row = add_random(s, "row", 1, 5, rng);
  const ParamId table = add_random(s, "table", 6, 5, rng);
  const std::vector<int> ids = {0, 3, 3, 5};
  const std::vector<int> picks = {1, -1, 4, 0, 2, 3, 2};
  expect_gradcheck(s, [&](Graph& g) {
    Var x = matmul(g.param(a), g.param(b));
    x = add(x, mul(g.param(c), g.param(c)));
    x = add_row(gelu(x), g.param(row));
    Var e = embed(g.param(table), ids);
    const Var parts[] = {x, scale(e, 0.5)};
    Var y = log_softmax(concat_rows(parts));
    return pick_sum(y, picks);
  });
}

TEST(Gradcheck, LayerNormAndAttention) {
  ParameterStore s;
  Rng rng(4);
  const ParamId x = add_random(s, "x", 4, 8, rng);
  const ParamId m = add_random(s, "m", 3, 8, rng);
  const LayerNorm ln = LayerNorm::make(s, "ln", 8);
  for (auto& v : s.at(ln.gain).value.values()) v = 1.0 + 0.3 * rng.normal();
  for (auto& v : s.at(ln.bias).value.values()) v = 0.3 * rng.normal();
  const ParamId w = add_random(s, "w", 8, 8, rng);
  for (bool causal : {false, true}) {
    expect_gradcheck(s, [&](Graph& g) {
      Var h = ln(g, g.param(x));
      Var q = matmul(h, g.param(w));
      Var self = attention(q, h, h, 2, causal);
      Var cross = attention(self, g.param(m), g.param(m), 4, false);
      return sum(mul(cross, cross));
    });
  }
}

TEST(Gradcheck, Blocks) {
  ModelConfig c;
  c.d_model = 8;
  c.n_heads = 2;
  c.ffn_mult = 2;
  c.dropout = 0.0;
  ParameterStore s;
  Rng rng(6);
  const ParamId x = add_random(s, "x", 4, 8, rng);
  const ParamId mem = add_random(s, "mem", 3, 8, rng);
  const Linear lin = Linear::make(s, "lin", 8, 8, rng);
  const MultiHeadAttention mha = MultiHeadAttention::make(s, "mha", 8, 2, rng);
  const FeedForward ff = FeedForward::make(s, "ff", 8, 16, rng);
  const EncoderLayer enc = EncoderLayer::make(s, "enc", c, rng);
  const DecoderLayer dec = DecoderLayer::make(s, "dec", c, rng);
  // Non-trivial layer-norm parameters.
  for (auto& p : s.all()) {
    if (p.name.find(".gain") != std::string::npos || p.name.find(".bias") != std::string::npos) {
      for (auto& v : p.value.values()) v += 0.2 * rng.normal();
    }
  }
  expect_gradcheck(s, [&](Graph& g) { return sum(gelu(lin(g, g.param(x)))); });
  expect_gradcheck(s, [&](Graph& g) { return sum(mha(g, g.param(x), g.param(mem), false)); });
  expect_gradcheck(s, [&](Graph& g) { return sum(ff(g, g.param(x))); });
  expect_gradcheck(s, [&](Graph& g) {
    Var h = enc(g, g.param(mem), 0.0);
    Var y = dec(g, g.param(x), h, 0.0);
    return sum(mul(y, y));
  });
}

TEST(Gradcheck, EncoderDecoderLoss) {
  ModelConfig c;
  c.d_model = 16;
  c.n_layers = 2;
  c.dropout = 0.0;
  c.max_seq = 10;
  ParameterStore s;
  Rng rng(7);
  const EncoderDecoder ed(s, "m", c, 9, rng);
  const ParamId src = add_random(s, "src", 5, 16, rng);
  const std::vector<int> prefix = {1, 4, 7, 5};
  const std::vector<int> target = {4, 7, 5, 2};
  expect_gradcheck(s, [&](Graph& g) {
    const Var mem = ed.encode(g, g.param(src));
    return scale(pick_sum(ed.log_probs(g, ed.decode_hidden(g, mem, prefix)), target), -1.0);
  });
}

class TinyModel : public ::testing::Test {
 protected:
  void SetUp() override {
    cfg.d_model = 16;
    cfg.n_heads = 4;
    cfg.dropout = 0.0;
    cfg.max_seq = 12;
    Rng rng(11);
    ed = EncoderDecoder(store, "m", cfg, 10, rng);
    src = store.add("src", 4, 16, Init::kNormal, rng, 1.0);
  }
  Tensor lp(const std::vector<int>& prefix) {
    Graph g(store);
    return ed.log_probs(g, ed.decode_hidden(g, ed.encode(g, g.param(src)), prefix)).value();
  }
  ModelConfig cfg;
  ParameterStore store;
  EncoderDecoder ed;
  ParamId src = -1;
};

TEST_F(TinyModel, RowsAreDistributions) {
  const Tensor t = lp({1, 3, 4, 5, 6});
  for (int r = 0; r < t.rows(); ++r) {
    double total = 0.0;
    for (double v : t.row(r)) {
      EXPECT_LE(v, 0.0);
      total += std::exp(v);
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
}

TEST_F(TinyModel, CausalPositionsIgnoreTheFuture) {
  const Tensor a = lp({1, 3, 4, 5, 6});
  const Tensor b = lp({1, 3, 4, 9, 7});
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < a.cols(); ++c) EXPECT_NEAR(a(r, c), b(r, c), 1e-12);
  }
  EXPECT_GT(std::abs(a(4, 0) - b(4, 0)), 0.0);
}

TEST(EncoderDecoder, ZeroOutputProjectionIsUniform) {
  ModelConfig c;
  c.d_model = 8;
  c.n_heads = 2;
  ParameterStore s;
  Rng rng(2);
  const EncoderDecoder ed(s, "m", c, 16, rng, true);
  const ParamId src = s.add("src", 3, 8, Init::kNormal, rng, 1.0);
  Graph g(s);
  const Tensor t = ed.log_probs(g, ed.decode_hidden(g, ed.encode(g, g.param(src)), std::vector<int>{1, 5})).value();
  for (double v : t.values()) EXPECT_NEAR(v, -std::log(16.0), 1e-12);
}

TEST(ModelConfig, Validation) {
  ModelConfig c;
  c.d_model = 10;
  c.n_heads = 4;
  EXPECT_THROW(c.validate(), Error);
  ModelConfig ok;
  nlohmann::ordered_json j;
  to_json(j, ok);
  ModelConfig back;
  from_json(j, back);
  EXPECT_EQ(back, ok);
}

TEST(Optimizer, SgdStep) {
  ParameterStore s;
  const ParamId p = s.add("p", Tensor(1, 1, 1.0));
  OptimizerConfig cfg;
  cfg.kind = OptimizerConfig::Kind::kSgd;
  cfg.learning_rate = 0.1;
  Optimizer opt(s, cfg);
  s.at(p).grad = Tensor(1, 1, 1.0);
  opt.step();
  EXPECT_DOUBLE_EQ(s.at(p).value.item(), 0.9);
  s.zero_grad();
  opt.step();
  EXPECT_DOUBLE_EQ(s.at(p).value.item(), 0.9);
}

TEST(Optimizer, AdamFirstStep) {
  ParameterStore s;
  const ParamId p = s.add("p", Tensor(1, 1, 0.5));
  OptimizerConfig cfg;  // Adam, lr 1e-3
  Optimizer opt(s, cfg);
  s.at(p).grad = Tensor(1, 1, 1.0);
  opt.step();
  // Bias-corrected moments after one step are g and g^2.
  const double m_hat = (1 - cfg.beta1) * 1.0 / (1 - cfg.beta1);
  const double v_hat = (1 - cfg.beta2) * 1.0 / (1 - cfg.beta2);
  const double expected = 0.5 - cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.eps);
  EXPECT_NEAR(s.at(p).value.item(), expected, 1e-15);
  EXPECT_NEAR(0.5 - s.at(p).value.item(), cfg.learning_rate, 1e-10);
}

TEST(Optimizer, ClipGradNorm) {
  ParameterStore s;
  const ParamId p = s.add("p", Tensor(1, 2, 0.0));
  s.at(p).grad = Tensor(1, 2, std::vector<double>{3.0, 4.0});
  EXPECT_DOUBLE_EQ(clip_grad_norm(s, 1.0), 5.0);
  EXPECT_NEAR(s.at(p).grad(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(s.at(p).grad(0, 1), 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(clip_grad_norm(s, 10.0), 1.0);
}

// Random autoregressive distribution over `v` tokens keyed by the prefix.
NextTokenFn random_model(uint64_t seed, int v, double sharpness) {
  return [=](std::span<const int> gen) {
    uint64_t h = seed;
    for (int t : gen) h = mix_seed(h, static_cast<uint64_t>(t) + 1);
    Rng rng(h);
    std::vector<double> logits(static_cast<size_t>(v));
    double mx = -1e300;
    for (auto& l : logits) {
      l = sharpness * rng.normal();
      mx = std::max(mx, l);
    }
    double z = 0.0;
    for (double l : logits) z += std::exp(l - mx);
    for (auto& l : logits) l = l - mx - std::log(z);
    return logits;
  };
}

double score(const NextTokenFn& f, const std::vector<int>& toks) {
  double lp = 0.0;
  for (size_t i = 0; i < toks.size(); ++i) lp += f(std::span<const int>(toks.data(), i))[static_cast<size_t>(toks[i])];
  return lp;
}

TEST(Decode, GreedyTiesGoToLowestId) {
  const NextTokenFn flat = [](std::span<const int> gen) {
    return std::vector<double>(4, gen.size() < 2 ? std::log(0.25) : std::log(0.25));
  };
  const auto h = decode(flat, DecodeConfig::greedy(3), 3);
  EXPECT_EQ(h.front().tokens, (std::vector<int>{0, 0, 0}));
}

TEST(Decode, DominantPathIsReturned) {
  const std::vector<int> path = {2, 1, 3, 0};
  const NextTokenFn f = [&](std::span<const int> gen) {
    std::vector<double> lp(5, std::log(0.01));
    lp[static_cast<size_t>(path[std::min(gen.size(), path.size() - 1)])] = std::log(0.96);
    return lp;
  };
  for (const auto& cfg : {DecodeConfig::greedy(8), DecodeConfig::beam_search(4, 8), DecodeConfig::sample(0.05, 3, 8)}) {
    const auto h = decode(f, cfg, 0);
    EXPECT_EQ(h.front().tokens, path);
    EXPECT_TRUE(h.front().finished);
    EXPECT_NEAR(h.front().logprob, score(f, path), 1e-12);
  }
}

TEST(Decode, BeamOneEqualsGreedyAndBeamIsMonotone) {
  for (uint64_t m = 0; m < 100; ++m) {
    const auto f = random_model(m, 5, 1.5);
    const int eos = 0;
    const auto g = decode(f, DecodeConfig::greedy(6), eos).front();
    const auto b1 = decode(f, DecodeConfig::beam_search(1, 6), eos);
    EXPECT_EQ(b1.front().tokens, g.tokens);
    EXPECT_NEAR(b1.front().logprob, g.logprob, 1e-12);
    EXPECT_NEAR(g.logprob, score(f, g.tokens), 1e-9);
    double prev = -1e300;
    for (int k : {1, 2, 4, 8}) {
      const auto hyps = decode(f, DecodeConfig::beam_search(k, 6), eos);
      for (size_t i = 1; i < hyps.size(); ++i) EXPECT_GE(hyps[i - 1].logprob, hyps[i].logprob);
      for (const auto& h : hyps) {
        EXPECT_TRUE(h.tokens.back() == eos || static_cast<int>(h.tokens.size()) == 6);
        EXPECT_NEAR(h.logprob, score(f, h.tokens), 1e-9);
      }
      EXPECT_GE(hyps.front().logprob, prev - 1e-12);
      prev = hyps.front().logprob;
    }
    EXPECT_GE(decode(f, DecodeConfig::beam_search(4, 6), eos).front().logprob, g.logprob - 1e-12);
  }
}

TEST(Decode, SamplingFollowsTheDistribution) {
  const std::vector<double> probs = {0.5, 0.3, 0.2};
  const NextTokenFn f = [&](std::span<const int>) {
    std::vector<double> lp;
    for (double p : probs) lp.push_back(std::log(p));
    return lp;
  };
  std::map<int, int> counts;
  const int n = 20000;
  for (int i = 0; i < n; ++i) counts[decode(f, DecodeConfig::sample(1.0, static_cast<uint64_t>(i), 1), 9).front().tokens[0]]++;
  for (int t = 0; t < 3; ++t) EXPECT_NEAR(counts[t] / static_cast<double>(n), probs[static_cast<size_t>(t)], 0.015);
  EXPECT_EQ(decode(f, DecodeConfig::sample(1.0, 5, 4), 9).front().tokens,
            decode(f, DecodeConfig::sample(1.0, 5, 4), 9).front().tokens);
  DecodeConfig bad = DecodeConfig::sample(0.0, 1);
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Checkpoint, RoundTripAndVerification) {
  const auto dir = std::filesystem::temp_directory_path() / "visact_ckpt_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "m.ckpt").string();
  ParameterStore a;
  Rng rng(9);
  a.add("w", 3, 4, Init::kNormal, rng);
  a.add("b", 1, 4, Init::kNormal, rng);
  save_checkpoint(path, a, CheckpointMeta{"toy", {{"x", 1}}, "hash-1"});
  ParameterStore b;
  Rng rng2(10);
  b.add("w", 3, 4, Init::kZeros, rng2);
  b.add("b", 1, 4, Init::kZeros, rng2);
  const auto meta = load_checkpoint(path, b, "hash-1");
  EXPECT_EQ(meta.kind, "toy");
  EXPECT_EQ(a.checksum(), b.checksum());
  EXPECT_THROW(load_checkpoint(path, b, "hash-2"), CheckpointError);
  ParameterStore c;
  c.add("w", 4, 3, Init::kZeros, rng2);
  c.add("b", 1, 4, Init::kZeros, rng2);
  EXPECT_THROW(load_checkpoint(path, c, "hash-1"), CheckpointError);
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << "garbage";
  }
  EXPECT_THROW(read_checkpoint_meta(path), CheckpointError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace visact::nn
