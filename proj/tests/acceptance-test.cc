// tests/acceptance-test.cc
//
// Copyright 2026  The TS-RNNT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits non-zero if any failed. Usage:
//   acceptance-test [--work-dir DIR] [--only 1,3,6] [--reuse]
// --reuse keeps simulated data and trained checkpoints from an earlier run
// with the same recipe (criterion 6 is the slow one).

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "base/error.h"
#include "base/parallel.h"
#include "cli/checkpoint.h"
#include "cli/commands.h"
#include "cli/decode.h"
#include "cli/train.h"
#include "decoding/search.h"
#include "encoder/attention-mask.h"
#include "numerics/log-math.h"
#include "simulate/recipe.h"
#include "streaming/benchmark.h"
#include "transducer/rnnt-loss.h"

namespace tsrnnt {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char *fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char *fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: loss vs brute force

// Log-sum over every monotone path, enumerated as the order in which the T
// blanks and U labels are emitted (last symbol blank).
double PathSum(const Tensor &lat, const std::vector<int32_t> &y, int32_t T) {
  const int32_t U = static_cast<int32_t>(y.size());
  std::vector<double> paths;
  std::vector<int32_t> seq;  // 0 blank, 1 label
  std::function<void(int32_t, int32_t)> rec = [&](int32_t blanks, int32_t labels) {
    if (blanks == T - 1 && labels == U) {
      double lp = 0.0;
      int32_t t = 0, u = 0;
      for (int32_t s : seq) {
        const int32_t row = t * (U + 1) + u;
        if (s) {
          lp += lat(row, y[u]);
          ++u;
        } else {
          lp += lat(row, 0);
          ++t;
        }
      }
      lp += lat(t * (U + 1) + u, 0);
      paths.push_back(lp);
      return;
    }
    if (blanks < T - 1) {
      seq.push_back(0);
      rec(blanks + 1, labels);
      seq.pop_back();
    }
    if (labels < U) {
      seq.push_back(1);
      rec(blanks, labels + 1);
      seq.pop_back();
    }
  };
  rec(0, 0);
  return LogSumExp(std::span<const double>(paths));
}

Outcome Criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  const double kLossTol = 1e-5, kGradTol = 1e-3;
  Rng rng(101);
  RnntLossOptions raw;
  raw.check_normalized = false;
  double worst_loss = 0.0, worst_grad = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int32_t T = rng.UniformInt(1, 4), U = rng.UniformInt(0, 4), K = rng.UniformInt(2, 4);
    Tensor lat = Tensor::Matrix(T * (U + 1), K);
    for (int32_t r = 0; r < lat.NumRows(); ++r) {
      std::vector<double> z(K);
      for (auto &v : z) v = 2.0 * rng.Normal();
      double lse = LogSumExp(std::span<const double>(z));
      for (int32_t k = 0; k < K; ++k) lat(r, k) = static_cast<float>(z[k] - lse);
    }
    std::vector<int32_t> y(U);
    for (auto &v : y) v = static_cast<int32_t>(rng.UniformInt(1, K - 1));
    RnntLossResult res = ComputeRnntLoss(lat, y, T);
    worst_loss = std::max(worst_loss, std::abs(res.loss + PathSum(lat, y, T)));
    for (int64_t i = 0; i < lat.NumElements(); ++i) {
      const float h = 1e-3f;
      Tensor p = lat, m = lat;
      p[i] += h;
      m[i] -= h;
      double fd = (ComputeRnntLoss(p, y, T, raw).loss - ComputeRnntLoss(m, y, T, raw).loss) /
                  (double(p[i]) - double(m[i]));
      worst_grad = std::max(worst_grad, std::abs(res.grad[i] - fd) / std::max(1.0, std::abs(fd)));
    }
  }
  double secs = Seconds(t0);
  return {worst_loss <= kLossTol && worst_grad <= kGradTol && secs < 60.0,
          Fmt("100 lattices: max |loss - path sum| %.2e (tol %.0e), max grad rel err %.2e "
              "(tol %.0e), %.1f s (limit 60)",
              worst_loss, kLossTol, worst_grad, kGradTol, secs)};
}

// ---- 2: end-to-end gradient

ModelConfig GradModel() {
  ModelConfig c;
  c.encoder.input_dim = 16;
  c.encoder.subsample_channels = 2;
  c.encoder.model_dim = 8;
  c.encoder.num_blocks = 2;
  c.encoder.num_heads = 2;
  c.encoder.ffn_dim = 12;
  c.encoder.conv_kernel = 3;
  c.encoder.fusion = "1";
  c.speaker_blocks = 1;
  c.vocab_size = 4;
  c.embed_dim = 6;
  c.pred_hidden = 5;
  c.pred_dim = 7;
  c.joint_dim = 6;
  return c;
}

Outcome Criterion2() {
  auto t0 = std::chrono::steady_clock::now();
  const double kTol = 1e-3;
  // float32 forward pass: a step much below 1e-3 is dominated by rounding.
  const float kEps = 3e-3f;
  Rng rng(202);
  double worst = 0.0;
  std::string worst_name;
  int64_t checked = 0;
  for (int input = 0; input < 10; ++input) {
    Model m(GradModel(), rng.NextU64());
    Tensor feats = Tensor::RandomNormal({static_cast<int32_t>(rng.UniformInt(24, 40)), 16},
                                        1.0f, &rng);
    Tensor enroll = Tensor::RandomNormal({static_cast<int32_t>(rng.UniformInt(20, 32)), 16},
                                         1.0f, &rng);
    std::vector<int32_t> y(rng.UniformInt(1, 4));
    for (auto &v : y) v = static_cast<int32_t>(rng.UniformInt(1, 4));
    auto value = [&]() {
      Tape tape(false);
      return static_cast<double>(m.Loss(tape, feats, &enroll, y).Value()[0]);
    };
    Tape tape(true);
    Var loss = m.Loss(tape, feats, &enroll, y);
    Gradients g = tape.Backward(loss);
    for (auto &[name, t] : m.MutableParams().MutableMap()) {
      const Tensor *gt = g.OfParam(t);
      for (int64_t i = 0; i < t.NumElements(); ++i) {  // every coordinate
        const float keep = t[i];
        t[i] = keep + kEps;
        double up = value();
        t[i] = keep - kEps;
        double down = value();
        t[i] = keep;
        double fd = (up - down) / (2.0 * kEps);
        double an = gt ? (*gt)[i] : 0.0;
        double err = std::abs(an - fd) / std::max(1.0, std::abs(an));
        ++checked;
        if (err > worst) {
          worst = err;
          worst_name = name;
        }
      }
    }
  }
  double secs = Seconds(t0);
  return {worst < kTol && secs < 300.0,
          Fmt("10 inputs, %lld coordinates: max rel err %.2e at %s (tol %.0e), %.1f s "
              "(limit 300)",
              static_cast<long long>(checked), worst, worst_name.c_str(), kTol, secs)};
}

// ---- shared toy audio

ToyCorpusConfig SmallCorpus() {
  ToyCorpusConfig c;
  c.num_speakers = 8;
  c.utts_per_speaker = 8;
  return c;
}

ModelConfig StreamingToy(const MaskRegime &regime, const std::string &fusion) {
  ModelConfig c;  // toy preset: D=64, 2 blocks
  c.encoder.regime = regime;
  c.encoder.fusion = fusion;
  return c;
}

Tensor RandomEmbedding(const Model &m, const ToyCorpus &corpus, int32_t utt) {
  return EnrollmentEmbedding(m, Fbank(), corpus.Render(utt));
}

// ---- trained models (criteria 3, 6, 7)

// Desk-scale recipe: vanilla RNNT on row (a), TS-RNNT on row (b) started
// from the vanilla weights, then short chunked fine-tunes of both for the
// streaming criteria.
struct MechanismRecipe {
  SimulationConfig sim;
  int64_t vanilla_steps = 3000;
  int64_t ts_steps = 5000;
  int64_t stream_steps = 1000;
  double peak_lr = 3e-3;
  int32_t warmup = 200;
  std::string stream_regime = "chunked:600ms";
};

MechanismRecipe Recipe() {
  MechanismRecipe r;
  r.sim.corpus.num_speakers = 240;
  r.sim.num_train_mixtures = 4000;
  r.sim.num_dev_mixtures = 0;
  return r;
}

std::string RecipeStamp(const MechanismRecipe &r) {
  std::ostringstream os;
  os << r.sim.corpus.num_speakers << " " << r.sim.corpus.utts_per_speaker << " "
     << r.sim.num_train_single << " " << r.sim.num_train_mixtures << " " << r.sim.eval_per_snr
     << " " << r.sim.seed << " " << r.vanilla_steps << " " << r.ts_steps << " "
     << r.stream_steps << " " << r.peak_lr << " " << r.warmup << " " << r.stream_regime << "\n";
  return os.str();
}

struct TrainedModels {
  Checkpoint vanilla, ts, vanilla_stream, ts_stream;
  fs::path data;
  double train_seconds = 0.0;
  bool ok = false;
};

TrainedModels &Models(const fs::path &work, bool reuse) {
  static TrainedModels models;
  if (models.ok) return models;
  MechanismRecipe r = Recipe();
  const fs::path data = work / "data";
  const fs::path stamp = work / "recipe.txt";
  const char *names[] = {"vanilla.ckpt", "ts.ckpt", "vanilla-stream.ckpt", "ts-stream.ckpt"};
  bool cached = reuse && fs::exists(stamp);
  for (const char *n : names) cached = cached && fs::exists(work / n);
  if (cached) {
    std::ifstream is(stamp);
    std::string text((std::istreambuf_iterator<char>(is)), {});
    cached = text.substr(0, text.find("seconds")) == RecipeStamp(r);
    if (cached) models.train_seconds = std::stod(text.substr(text.find("seconds") + 8));
  }
  if (!cached) {
    fs::remove_all(work);
    fs::create_directories(work);
    std::cerr << "simulating " << data << "\n";
    Simulate(r.sim, data.string());
    auto train = [&](const std::string &manifest, const std::string &fusion, int64_t steps,
                     const std::string &regime, const std::string &init, const char *out) {
      TrainConfig cfg;
      cfg.train_manifests = {(data / manifest).string()};
      cfg.model.encoder.fusion = fusion;
      if (!regime.empty()) cfg.model.encoder.regime = MaskRegime::Parse(regime);
      if (!init.empty()) cfg.init_from = (work / init).string();
      cfg.steps = steps;
      cfg.lr = {r.peak_lr, r.warmup};
      cfg.spec_augment = false;
      cfg.log_every = 500;
      std::cerr << "training " << out << "\n";
      TrainResult res = Train(cfg, &std::cerr);
      SaveCheckpoint(res.checkpoint, (work / out).string());
      models.train_seconds += res.seconds;
    };
    train("train_a.jsonl", "none", r.vanilla_steps, "", "", names[0]);
    train("train_b.jsonl", "1", r.ts_steps, "", names[0], names[1]);
    train("train_a.jsonl", "none", r.stream_steps, r.stream_regime, names[0], names[2]);
    train("train_b.jsonl", "1", r.stream_steps, r.stream_regime, names[1], names[3]);
    std::ofstream(stamp) << RecipeStamp(r) << "seconds " << models.train_seconds << "\n";
  }
  models.vanilla = LoadCheckpoint((work / names[0]).string());
  models.ts = LoadCheckpoint((work / names[1]).string());
  models.vanilla_stream = LoadCheckpoint((work / names[2]).string());
  models.ts_stream = LoadCheckpoint((work / names[3]).string());
  models.data = data;
  models.ok = true;
  return models;
}

// ---- 3: streaming equivalence

struct EvalItem {
  std::string id;
  Waveform audio, enrollment;
};

std::vector<EvalItem> EvalItems(const fs::path &manifest, size_t n) {
  std::vector<EvalItem> items;
  for (const ManifestRecord &rec : ReadManifest(manifest.string())) {
    if (items.size() == n) break;
    items.push_back({rec.id, ReadWave(ResolvePath(manifest.string(), rec.mixture_path)),
                     ReadWave(ResolvePath(manifest.string(), rec.enroll_path))});
  }
  return items;
}

Outcome Criterion3(const fs::path &work, bool reuse) {
  TrainedModels &models = Models(work, reuse);
  auto t0 = std::chrono::steady_clock::now();
  const double kTol = 1e-4;
  std::vector<EvalItem> items = EvalItems(models.data / "eval.jsonl", 50);
  std::ostringstream detail;
  bool ok = items.size() == 50;
  for (const char *regime_name : {"causal", "chunked:600ms"}) {
    Model m = PrepareModel(models.ts_stream.model, "", regime_name);
    const MaskRegime regime = m.Config().encoder.regime;
    double worst = 0.0;
    int32_t token_mismatch = 0, tokens_seen = 0;
    for (const EvalItem &it : items) {
      Tensor emb = EnrollmentEmbedding(m, Fbank(), it.enrollment);
      EquivalenceResult r = StreamingEquivalenceCheck(m, it.audio, &emb, regime,
                                                      SearchOptions{}, 1600);
      worst = std::max(worst, r.max_abs_dev);
      if (!r.tokens_equal) ++token_mismatch;
      tokens_seen += r.offline_tokens.size();
    }
    ok = ok && worst <= kTol && token_mismatch == 0;
    detail << regime.ToString() << ": max abs dev " << worst << ", token mismatches "
           << token_mismatch << "/" << items.size() << " (" << tokens_seen << " tokens); ";
  }
  double secs = Seconds(t0);
  ok = ok && secs < 300.0;
  detail << Fmt("tol %.0e, %.1f s (limit 300)", kTol, secs);
  return {ok, detail.str()};
}

// ---- 4: causality fuzzing

// Largest feature frame encoder frame s reads: the two stride-2 stages of the
// front end map output frame s to input frames 4s .. 4s+6.
int32_t LastFeatureFrame(const MaskRegime &r, int32_t s, int32_t num_enc) {
  int32_t last = s;
  if (r.kind == MaskRegime::Kind::kChunked) last = std::min((s / r.chunk + 1) * r.chunk - 1, num_enc - 1);
  return 4 * last + 6;
}

Outcome Criterion4() {
  Rng rng(404);
  ToyCorpus corpus(SmallCorpus());
  Fbank fbank;
  std::vector<MaskRegime> regimes = {MaskRegime::Causal(), MaskRegime::Causal(8),
                                     MaskRegime::Chunked(15), MaskRegime::Chunked(4, 8)};
  std::vector<Model> models;
  for (const MaskRegime &r : regimes) models.emplace_back(StreamingToy(r, "1"), 404);
  int32_t violations = 0;
  int64_t frames_checked = 0, frames_changed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t k = trial % regimes.size();
    const Model &m = models[k];
    Tensor feats = fbank.Compute(corpus.Render(rng.UniformInt(0, corpus.Utterances().size() - 1))).frames;
    Tensor emb = RandomEmbedding(m, corpus, rng.UniformInt(0, corpus.Utterances().size() - 1));
    const int32_t T = feats.NumRows();
    const int32_t cut = rng.UniformInt(7, T - 2);  // frames > cut are perturbed
    Tensor pert = feats;
    for (int32_t r = cut + 1; r < T; ++r) {
      for (int32_t d = 0; d < pert.NumCols(); ++d) pert(r, d) += 3.0f * rng.Normal();
    }
    Tensor a = OfflineEncode(m, feats, &emb, regimes[k]);
    Tensor b = OfflineEncode(m, pert, &emb, regimes[k]);
    for (int32_t s = 0; s < a.NumRows(); ++s) {
      bool same = std::equal(a.Row(s).begin(), a.Row(s).end(), b.Row(s).begin());
      if (LastFeatureFrame(regimes[k], s, a.NumRows()) <= cut) {
        ++frames_checked;
        if (!same) ++violations;
      } else if (!same) {
        ++frames_changed;
      }
    }
  }
  // frames_changed > 0 shows the perturbations reach the encoder at all.
  return {violations == 0 && frames_checked > 0 && frames_changed > 0,
          Fmt("100 suffix perturbations over causal, causal:left=8, chunked:15, "
              "chunked:4:left=8: %d of %lld valid frames changed (must be 0, bitwise); "
              "%lld later frames changed",
              violations, static_cast<long long>(frames_checked),
              static_cast<long long>(frames_changed))};
}

// ---- 5: ALSD vs exhaustive

class TableScorer : public TransducerScorer {
 public:
  TableScorer(int32_t T, int32_t K, uint64_t seed) : T_(T), K_(K), seed_(seed) {}
  int32_t NumClasses() const override { return K_; }
  int32_t NumFrames() const override { return T_; }
  void LogProbs(int32_t t, std::span<const int32_t> prefix, std::vector<double> *out) override {
    std::vector<int32_t> key(prefix.begin(), prefix.end());
    key.push_back(-1 - t);
    auto it = table_.find(key);
    if (it == table_.end()) {
      Rng rng(seed_ + 977 * table_.size());
      std::vector<double> z(K_);
      for (auto &v : z) v = 1.5 * rng.Normal();
      double lse = LogSumExp(std::span<const double>(z));
      for (auto &v : z) v -= lse;
      it = table_.emplace(key, z).first;
    }
    *out = it->second;
  }

 private:
  int32_t T_, K_;
  uint64_t seed_;
  std::map<std::vector<int32_t>, std::vector<double>> table_;
};

// log P(y) by a forward pass over (t, u), scores straight from the scorer.
double SequenceLogProb(TransducerScorer *s, const std::vector<int32_t> &y) {
  const int32_t T = s->NumFrames(), U = static_cast<int32_t>(y.size());
  std::vector<std::vector<double>> alpha(T, std::vector<double>(U + 1, kLogZero));
  std::vector<double> lp;
  alpha[0][0] = 0.0;
  double total = kLogZero;
  for (int32_t t = 0; t < T; ++t) {
    for (int32_t u = 0; u <= U; ++u) {
      if (alpha[t][u] == kLogZero) continue;
      s->LogProbs(t, std::span<const int32_t>(y.data(), u), &lp);
      if (u < U) alpha[t][u + 1] = LogAdd(alpha[t][u + 1], alpha[t][u] + lp[y[u]]);
      if (t + 1 < T) {
        alpha[t + 1][u] = LogAdd(alpha[t + 1][u], alpha[t][u] + lp[0]);
      } else if (u == U) {
        total = LogAdd(total, alpha[t][u] + lp[0]);
      }
    }
  }
  return total;
}

Outcome Criterion5() {
  auto t0 = std::chrono::steady_clock::now();
  Rng rng(505);
  int32_t agree = 0;
  double worst_score = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int32_t T = rng.UniformInt(1, 3), K = rng.UniformInt(2, 3);
    const int32_t u_max = 2 * T;
    TableScorer scorer(T, K, rng.NextU64());
    std::vector<int32_t> best_y, y;
    double best = kLogZero;
    std::function<void()> enumerate = [&]() {
      double lp = SequenceLogProb(&scorer, y);
      if (lp > best) {
        best = lp;
        best_y = y;
      }
      if (static_cast<int32_t>(y.size()) == u_max) return;
      for (int32_t k = 1; k < K; ++k) {
        y.push_back(k);
        enumerate();
        y.pop_back();
      }
    };
    enumerate();
    AlsdOptions opts;
    opts.beam = 1 << 20;  // never prunes at this size
    opts.u_max = u_max;
    NBest nb = AlsdBeamSearch(&scorer, opts);
    if (!nb.empty() && nb[0].tokens == best_y) ++agree;
    if (!nb.empty()) worst_score = std::max(worst_score, std::abs(nb[0].log_prob - best));
  }
  double secs = Seconds(t0);
  return {agree == 100 && secs < 120.0,
          Fmt("%d/100 instances (T<=3, K<=3) top-1 equal to exhaustive enumeration; "
              "max |score - oracle| %.2e; %.1f s (limit 120)",
              agree, worst_score, secs)};
}

// ---- 6: mechanism

Outcome Criterion6(const fs::path &work, bool reuse) {
  TrainedModels &m = Models(work, reuse);
  Fbank fbank;
  Dataset eval = LoadDataset({(m.data / "eval.jsonl").string()}, fbank, true);
  DecodeOptions opts;
  opts.threads = NumThreadsFromEnv();
  CerReport correct = DecodeDataset(m.ts.model, eval, opts);
  opts.enrollment = EnrollmentChoice::kInterferer;
  CerReport wrong = DecodeDataset(m.ts.model, eval, opts);
  Dataset eval_plain = LoadDataset({(m.data / "eval.jsonl").string()}, fbank, false);
  opts.enrollment = EnrollmentChoice::kTarget;
  CerReport vanilla = DecodeDataset(m.vanilla.model, eval_plain, opts);
  std::cerr << "vanilla\n" << vanilla.ToText() << "TS correct enrollment\n" << correct.ToText()
            << "TS wrong enrollment\n" << wrong.ToText();
  const double c = correct.average;
  bool a = vanilla.average >= 3.0 * c;
  bool b = wrong.average >= 2.0 * c;
  bool budget = m.train_seconds <= 1800.0;
  return {a && b && budget,
          Fmt("TER on %zu eval mixtures: vanilla %.1f%%, TS correct %.1f%%, TS wrong %.1f%%; "
              "(a) vanilla/correct %.2f (need >= 3) %s, (b) wrong/correct %.2f (need >= 2) %s; "
              "training %.0f s (limit 1800)",
              eval.examples.size(), 100 * vanilla.average, 100 * c, 100 * wrong.average,
              vanilla.average / std::max(c, 1e-12), a ? "ok" : "FAIL",
              wrong.average / std::max(c, 1e-12), b ? "ok" : "FAIL", m.train_seconds)};
}

// ---- 7 and 8: RTF parity and latency

PairedRtfReport *g_rtf = nullptr;

Outcome Criterion7(const fs::path &work, bool reuse) {
  TrainedModels &models = Models(work, reuse);
  const MaskRegime regime = MaskRegime::Parse("chunked:600ms");
  Model vanilla = PrepareModel(models.vanilla_stream.model, "", regime.ToString());
  Model ts = PrepareModel(models.ts_stream.model, "", regime.ToString());
  BenchmarkOptions opts;
  opts.repeats = 3;
  opts.warmup_utts = 2;
  std::vector<BenchmarkItem> items;
  for (EvalItem &it : EvalItems(models.data / "eval.jsonl", 60)) {
    items.push_back({it.id, std::move(it.audio), std::move(it.enrollment)});
  }
  static PairedRtfReport rep = RtfBenchmark(vanilla, "RNNT", ts, "TS-RNNT", items, regime, opts);
  g_rtf = &rep;
  std::cerr << rep.ToText();
  const bool parity = rep.ratio >= 0.95 && rep.ratio <= 1.05;
  const bool itemized = rep.a.embed_s == 0.0 && rep.b.embed_s > 0.0 &&
                        std::abs(rep.b.decode_s - (rep.b.feature_s + rep.b.encoder_s +
                                                   rep.b.search_s)) < 1e-9 * rep.b.decode_s + 1e-12 &&
                        rep.ToJson()["b"].contains("speaker_encoder_s");
  return {parity && itemized && items.size() >= 50,
          Fmt("%zu utterances x %d repeats: RTF RNNT %.4f, TS-RNNT %.4f, ratio %.3f (need "
              "0.95..1.05); speaker encoder %.2f s itemized, excluded from %.2f s decode",
              items.size(), opts.repeats, rep.a.rtf, rep.b.rtf, rep.ratio, rep.b.embed_s,
              rep.b.decode_s)};
}

Outcome Criterion8() {
  const MaskRegime chunked = MaskRegime::Parse("chunked:600ms");
  const MaskRegime causal = MaskRegime::Causal();
  // 600 ms chunk at 40 ms per encoder frame, plus 30 ms of front-end look-ahead.
  const double expect_chunked = 600.0 / 2 + 30.0, expect_causal = 30.0;
  double lc = AverageLatencyMs(chunked), la = AverageLatencyMs(causal);
  bool ok = chunked.chunk == 15 && lc == expect_chunked && la == expect_causal;
  std::string report_line;
  if (g_rtf) {
    ok = ok && g_rtf->b.avg_latency_ms == expect_chunked &&
         g_rtf->ToText().find("avg latency 330 ms") != std::string::npos;
    report_line = Fmt(", benchmark report says %.0f ms", g_rtf->b.avg_latency_ms);
  }
  return {ok, Fmt("chunked:600ms (%d frames) %.1f ms (expect %.0f), causal %.1f ms (expect "
                  "%.0f)%s",
                  chunked.chunk, lc, expect_chunked, la, expect_causal, report_line.c_str())};
}

// ---- 9: mixture levels

double PowerDb(const std::vector<float> &a, const std::vector<float> &b) {
  long double pa = 0, pb = 0;
  for (float v : a) pa += static_cast<long double>(v) * v;
  for (float v : b) pb += static_cast<long double>(v) * v;
  return static_cast<double>(10.0L * std::log10(pa / pb));
}

Outcome Criterion9() {
  const double kTol = 1e-6;
  SimulationConfig sc;
  sc.corpus.num_speakers = 30;
  sc.corpus.utts_per_speaker = 10;
  sc.num_dev_speakers = 2;
  sc.num_eval_speakers = 4;
  ToyCorpus corpus(sc.corpus);
  MixtureGenerator gen(&corpus, sc);
  Rng rng(909);
  double worst_sir = 0.0, worst_snr = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Rng r = rng.Fork(i);
    double snr = i % 2 ? std::nan("") : sc.eval_snr_grid[(i / 2) % sc.eval_snr_grid.size()];
    MixtureExample ex = gen.Generate(MixtureKind::kTwoSpeaker, gen.TrainSpeakers(), snr,
                                     "m" + std::to_string(i), &r);
    worst_sir = std::max(worst_sir, std::abs(PowerDb(ex.mix.target, ex.mix.interferer) -
                                             ex.record.sir_db));
    worst_snr = std::max(worst_snr, std::abs(PowerDb(ex.mix.target, ex.mix.noise) -
                                             ex.record.snr_db));
  }
  return {worst_sir <= kTol && worst_snr <= kTol,
          Fmt("1000 mixtures: max |SIR error| %.2e dB, max |SNR error| %.2e dB (tol %.0e)",
              worst_sir, worst_snr, kTol)};
}

// ---- 10: fusion identity and sweep

Outcome Criterion10() {
  bool identity = true;
  for (MaskRegime regime : {MaskRegime::Offline(), MaskRegime::Causal(), MaskRegime::Chunked(15)}) {
    for (const char *fusion : {"1", "mid", "all"}) {
      ModelConfig cfg = StreamingToy(regime, fusion);
      cfg.encoder.num_blocks = 4;
      cfg.encoder.fusion = ResolveFusionLayer(fusion, 4);
      Model ts(cfg, 1010);
      cfg.encoder.fusion = "none";
      Model vanilla(cfg, 1010);
      for (auto &[name, t] : vanilla.MutableParams().MutableMap()) t = ts.Params().Get(name);
      Rng rng(10);
      Tensor feats = Tensor::RandomNormal({120, 80}, 1.0f, &rng);
      Tape tape(false);
      Var ones = tape.Constant(Tensor::Matrix(1, ts.Config().encoder.model_dim, 1.0f));
      Tensor a = ts.EncodeFeatures(tape, feats, &ones).Value();
      Tensor b = vanilla.EncodeFeatures(tape, feats, nullptr).Value();
      identity = identity && a.Shape() == b.Shape() &&
                 std::equal(a.Values().begin(), a.Values().end(), b.Values().begin());
    }
  }

  // Sweep over one 4-block checkpoint on a small two-speaker set.
  fs::path dir = fs::temp_directory_path() / "tsrnnt-acceptance-sweep";
  fs::remove_all(dir);
  SimulationConfig sc;
  sc.corpus.num_speakers = 24;
  sc.corpus.utts_per_speaker = 12;
  sc.num_dev_speakers = 2;
  sc.num_eval_speakers = 6;
  sc.num_train_single = 0;
  sc.num_train_mixtures = 0;
  sc.num_dev_mixtures = 0;
  sc.eval_per_snr = 2;
  Simulate(sc, dir.string());
  ModelConfig cfg;
  cfg.encoder.num_blocks = 4;
  Checkpoint ck{Model(cfg, 11), 0, 11};
  SaveCheckpoint(ck, (dir / "model.ckpt").string());
  DecodeArgs args;
  args.checkpoint = (dir / "model.ckpt").string();
  args.manifests = {(dir / "eval.jsonl").string()};
  args.fusion_sweep = {"1", "mid", "all"};
  args.json_out = (dir / "sweep.json").string();
  args.opts.search.kind = SearchKind::kGreedy;
  std::ostringstream text;
  RunDecode(args, text);
  std::cerr << text.str();
  std::ifstream js(args.json_out);
  nlohmann::json j = nlohmann::json::parse(js);
  bool shape = j["rows"].size() == 3;
  std::vector<std::string> want = {"1", "2", "1-4"};
  for (size_t i = 0; shape && i < 3; ++i) {
    const auto &row = j["rows"][i];
    shape = row["cer_by_snr"].size() == sc.eval_snr_grid.size() && row.contains("average") &&
            row["label"].get<std::string>().find("(" + want[i] + ")") != std::string::npos;
  }
  const std::string table = text.str();
  int lines = std::count(table.begin(), table.end(), '\n');
  shape = shape && lines == 4;
  fs::remove_all(dir);
  return {identity && shape,
          Fmt("all-ones embedding bit-identical to the fusion-free encoder over 3 regimes x "
              "{1, mid, all}: %s; sweep table rows l=1 / mid (2) / all (1-4) with %zu SNR columns "
              "+ average: %s",
              identity ? "yes" : "NO", sc.eval_snr_grid.size(), shape ? "yes" : "NO")};
}

}  // namespace
}  // namespace tsrnnt

int main(int argc, char **argv) {
  using namespace tsrnnt;
  CLI::App app{"acceptance suite"};
  std::string work = "acceptance-work", only;
  bool reuse = false;
  app.add_option("--work-dir", work);
  app.add_option("--only", only, "comma list of criteria");
  app.add_flag("--reuse", reuse);
  CLI11_PARSE(app, argc, argv);

  std::set<int> selected;
  for (const std::string &s : SplitList(only)) selected.insert(std::stoi(s));
  const char *names[] = {"",
                         "rnnt loss vs brute force",
                         "end-to-end gradient check",
                         "streaming equivalence",
                         "causality fuzzing",
                         "ALSD vs exhaustive oracle",
                         "mechanism (correct vs wrong enrollment, vanilla)",
                         "RTF parity",
                         "latency accounting",
                         "mixture level exactness",
                         "fusion identity and layer sweep"};
  std::vector<std::function<Outcome()>> run = {
      nullptr,    Criterion1, Criterion2, [&] { return Criterion3(work, reuse); },
      Criterion4, Criterion5,
      [&] { return Criterion6(work, reuse); },
      [&] { return Criterion7(work, reuse); }, Criterion8, Criterion9, Criterion10};
  int failed = 0;
  std::vector<std::string> lines;
  for (int c = 1; c <= 10; ++c) {
    if (!selected.empty() && !selected.count(c)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run[c]();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::string head = Fmt("criterion %2d %s  %s (%.1f s)", c, o.pass ? "PASS" : "FAIL",
                           names[c], Seconds(t0));
    std::cout << head << ": " << o.detail << std::endl;
    lines.push_back(head);
    if (!o.pass) ++failed;
  }
  std::cout << "\nsummary\n";
  for (const auto &l : lines) std::cout << l << "\n";
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
