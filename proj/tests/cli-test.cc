// tests/cli-test.cc
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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <gtest/gtest.h>

#include "base/error.h"
#include "cli/checkpoint.h"
#include "cli/commands.h"
#include "cli/decode.h"
#include "cli/optimizer.h"
#include "cli/train.h"

namespace tsrnnt {
namespace {

namespace fs = std::filesystem;

ModelConfig Tiny(const std::string &fusion = "1") {
  ModelConfig c;
  c.encoder.input_dim = 16;
  c.encoder.subsample_channels = 2;
  c.encoder.model_dim = 8;
  c.encoder.num_blocks = 2;
  c.encoder.num_heads = 2;
  c.encoder.ffn_dim = 12;
  c.encoder.conv_kernel = 3;
  c.encoder.fusion = fusion;
  c.speaker_blocks = 1;
  c.vocab_size = 4;
  c.embed_dim = 6;
  c.pred_hidden = 5;
  c.pred_dim = 7;
  c.joint_dim = 6;
  return c;
}

std::string Bytes(const Checkpoint &c) {
  std::ostringstream os;
  SaveCheckpoint(c, os);
  return os.str();
}

ErrorCode LoadCode(const std::string &bytes, std::string *msg = nullptr) {
  std::istringstream is(bytes);
  try {
    LoadCheckpoint(is);
  } catch (const Error &e) {
    if (msg) *msg = e.what();
    return e.code();
  }
  return ErrorCode::kGeneric;
}

TEST(CheckpointTest, SaveLoadSaveIsByteIdentical) {
  Checkpoint c{Model(Tiny(), 3), 17, 5};
  Rng rng(1);
  c.model.SetFeatureStats(Tensor::RandomNormal({16}, 1.0f, &rng),
                          Tensor::RandomUniform({16}, 0.5f, 2.0f, &rng));
  std::string a = Bytes(c);
  std::istringstream is(a);
  Checkpoint d = LoadCheckpoint(is);
  EXPECT_EQ(d.step, 17u);
  EXPECT_EQ(d.seed, 5u);
  EXPECT_EQ(Bytes(d), a);
}

TEST(CheckpointTest, RoundTripPreservesDecoding) {
  Checkpoint c{Model(Tiny("none"), 4), 0, 0};
  std::istringstream is(Bytes(c));
  Checkpoint d = LoadCheckpoint(is);
  Rng rng(2);
  Tensor feats = Tensor::RandomNormal({60, 16}, 1.0f, &rng);
  SearchOptions s;
  std::vector<int32_t> t1, t2;
  NBest n1 = SearchEncoderOutput(c.model, OfflineEncode(c.model, feats, nullptr, {}), s, &t1);
  NBest n2 = SearchEncoderOutput(d.model, OfflineEncode(d.model, feats, nullptr, {}), s, &t2);
  EXPECT_EQ(t1, t2);
  ASSERT_EQ(n1.size(), n2.size());
  for (size_t i = 0; i < n1.size(); ++i) EXPECT_EQ(n1[i].log_prob, n2[i].log_prob);
}

TEST(CheckpointTest, CorruptMagic) {
  std::string b = Bytes({Model(Tiny(), 1), 0, 0});
  b[0] = 'X';
  std::string msg;
  EXPECT_EQ(LoadCode(b, &msg), ErrorCode::kNotACheckpoint);
  EXPECT_NE(msg.find("not a checkpoint"), std::string::npos);
  EXPECT_EQ(LoadCode(""), ErrorCode::kNotACheckpoint);
}

TEST(CheckpointTest, VersionMismatch) {
  std::string b = Bytes({Model(Tiny(), 1), 0, 0});
  b[8] = 9;
  EXPECT_EQ(LoadCode(b), ErrorCode::kVersionMismatch);
}

TEST(CheckpointTest, ShapeEditedConfig) {
  std::string b = Bytes({Model(Tiny(), 1), 0, 0});
  size_t pos = b.find("joint_dim=6");
  ASSERT_NE(pos, std::string::npos);
  b[pos + std::strlen("joint_dim=")] = '7';
  std::string msg;
  EXPECT_EQ(LoadCode(b, &msg), ErrorCode::kShapeMismatch);
  EXPECT_NE(msg.find("shape mismatch for tensor joint."), std::string::npos) << msg;
}

TEST(CheckpointTest, Truncated) {
  std::string b = Bytes({Model(Tiny(), 1), 0, 0});
  for (size_t cut : {size_t{10}, b.size() / 2, b.size() - 1}) {
    EXPECT_EQ(LoadCode(b.substr(0, cut)), ErrorCode::kTruncated) << cut;
  }
}

TEST(LrScheduleTest, WarmupThenInverseSqrt) {
  LrSchedule s{2e-3, 100};
  for (int64_t step : {1, 10, 50, 99}) EXPECT_DOUBLE_EQ(s.At(step), 2e-3 * step / 100.0);
  EXPECT_DOUBLE_EQ(s.At(100), 2e-3);
  EXPECT_DOUBLE_EQ(s.At(400), 1e-3);
  for (int64_t step = 100; step < 1000; ++step) EXPECT_GE(s.At(step), s.At(step + 1));
}

TEST(CerReportTest, AverageIsUtteranceWeightedBucketMean) {
  CerReport rep;
  Rng rng(3);
  for (int i = 0; i < 37; ++i) {
    UttResult u;
    u.snr_db = 5.0 * rng.UniformInt(0, 4);
    u.cer = rng.Uniform(0.0, 1.5);
    rep.Add(u);
  }
  double weighted = 0.0;
  int32_t n = 0;
  for (const auto &[snr, p] : rep.buckets) {
    weighted += p.second * (p.first / p.second);
    n += p.second;
  }
  EXPECT_EQ(n, 37);
  EXPECT_NEAR(rep.average, weighted / n, 1e-9);
  auto j = rep.ToJson();
  EXPECT_EQ(j["buckets"].size(), rep.buckets.size());
}

TEST(FusionLayerTest, Resolve) {
  EXPECT_EQ(ResolveFusionLayer("1", 5), "1");
  EXPECT_EQ(ResolveFusionLayer("mid", 5), "3");
  EXPECT_EQ(ResolveFusionLayer("mid", 4), "2");
  EXPECT_EQ(ResolveFusionLayer("all", 5), "1-5");
}

TEST(PrepareModelTest, Mismatches) {
  Model ts(Tiny(), 1), van(Tiny("none"), 1);
  EXPECT_THROW(PrepareModel(van, "1", ""), Error);
  EXPECT_THROW(PrepareModel(ts, "none", ""), Error);
  // offline-trained convolutions cannot run a streaming regime
  EXPECT_THROW(PrepareModel(ts, "", "causal"), Error);
  EXPECT_EQ(PrepareModel(ts, "all", "").Config().encoder.fusion, "1-2");
}

Dataset ToyData(int32_t n, bool ts, uint64_t seed) {
  Dataset d;
  Rng rng(seed);
  for (int32_t i = 0; i < n; ++i) {
    Example e;
    e.record.id = "u" + std::to_string(i);
    e.feats = Tensor::RandomNormal({static_cast<int32_t>(rng.UniformInt(30, 50)), 16}, 1.0f, &rng);
    e.record.transcript.resize(rng.UniformInt(1, 3));
    for (auto &t : e.record.transcript) t = static_cast<int32_t>(rng.UniformInt(1, 4));
    if (ts) {
      e.enroll_key = "spk" + std::to_string(i % 3);
      if (!d.enrollments.count(e.enroll_key)) {
        d.enrollments[e.enroll_key] = Tensor::RandomNormal({40, 16}, 1.0f, &rng);
      }
    }
    d.examples.push_back(std::move(e));
  }
  return d;
}

TrainConfig ToyTrainConfig(bool ts) {
  TrainConfig cfg;
  cfg.model = Tiny(ts ? "1" : "none");
  cfg.steps = 6;
  cfg.batch_size = 3;
  cfg.lr = {3e-3, 2};
  cfg.log_every = 0;
  return cfg;
}

TEST(TrainTest, SeedFixedRunsAreIdentical) {
  for (bool ts : {false, true}) {
    Dataset d = ToyData(8, ts, 4);
    TrainConfig cfg = ToyTrainConfig(ts);
    TrainResult a = Train(cfg, d, nullptr);
    TrainResult b = Train(cfg, d, nullptr);
    EXPECT_EQ(a.losses, b.losses);
    EXPECT_EQ(Bytes(a.checkpoint), Bytes(b.checkpoint));
    cfg.seed = 2;
    EXPECT_NE(Train(cfg, d, nullptr).losses, a.losses);
  }
}

TEST(TrainTest, LossDecreasesOnTinySet) {
  Dataset d = ToyData(4, true, 5);
  TrainConfig cfg = ToyTrainConfig(true);
  cfg.steps = 120;
  cfg.batch_size = 4;
  cfg.spec_augment = false;
  TrainResult r = Train(cfg, d, nullptr);
  EXPECT_LT(r.losses.back(), 0.5 * r.losses.front());
}

TEST(TrainConfigTest, KeyValues) {
  KeyValues kv = KeyValues::ParseString(
      "model.preset=toy\nfusion=all\nsteps=10\nbatch_size=2\nwarmup_steps=0\n"
      "train_manifests=a.jsonl,b.jsonl\n");
  TrainConfig c = TrainConfig::FromKeyValues(kv);
  EXPECT_EQ(c.steps, 10);
  EXPECT_EQ(c.train_manifests.size(), 2u);
  EXPECT_EQ(c.model.encoder.fusion, "all");
  TrainConfig back = TrainConfig::FromKeyValues(c.ToKeyValues());
  EXPECT_EQ(back.ToKeyValues().ToString(), c.ToKeyValues().ToString());

  kv.Set("stepz", "3");
  EXPECT_THROW(TrainConfig::FromKeyValues(kv), Error);
  KeyValues bad = KeyValues::ParseString("batch_size=0\n");
  EXPECT_THROW(TrainConfig::FromKeyValues(bad), Error);
  KeyValues neg = KeyValues::ParseString("warmup_steps=-1\n");
  EXPECT_THROW(TrainConfig::FromKeyValues(neg), Error);
}

TEST(TrainTest, NanLossAborts) {
  Dataset d = ToyData(3, false, 6);
  d.examples[1].feats(0, 0) = std::nanf("");
  TrainConfig cfg = ToyTrainConfig(false);
  cfg.spec_augment = false;
  cfg.out_dir = (fs::temp_directory_path() / "tsrnnt-nan").string();
  fs::remove_all(cfg.out_dir);
  try {
    Train(cfg, d, nullptr);
    FAIL() << "no error";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite) << e.what();
  }
  EXPECT_TRUE(fs::exists(fs::path(cfg.out_dir) / "nan_batch.txt"));
  fs::remove_all(cfg.out_dir);
}

SimulationConfig SmallSim() {
  KeyValues kv = KeyValues::ParseString(
      "corpus.num_speakers=24\ncorpus.utts_per_speaker=12\nnum_dev_speakers=3\n"
      "num_eval_speakers=4\nnum_train_single=4\nnum_train_mixtures=4\nnum_dev_mixtures=2\n"
      "eval_per_snr=2\n");
  return SimulationConfigFromKeyValues(kv);
}

std::string Slurp(const fs::path &p) {
  std::ifstream is(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

TEST(SimulateCommandTest, TableDirectoryAndDeterminism) {
  fs::path dir = fs::temp_directory_path() / "tsrnnt-sim";
  fs::remove_all(dir);
  SimulationConfig cfg = SmallSim();
  std::ostringstream out;
  SimulatedSets s = RunSimulate(cfg, dir.string(), false, out);
  EXPECT_NE(out.str().find("(a)"), std::string::npos);
  EXPECT_NE(out.str().find("(c)"), std::string::npos);
  EXPECT_EQ(s.eval.size(), 10u);
  std::string first = Slurp(dir / "eval.jsonl") + Slurp(dir / "train_b.jsonl");

  std::ostringstream o2;
  try {
    RunSimulate(cfg, dir.string(), false, o2);
    FAIL() << "non-empty dir accepted";
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kUsage);
  }
  RunSimulate(cfg, dir.string(), true, o2);
  EXPECT_EQ(Slurp(dir / "eval.jsonl") + Slurp(dir / "train_b.jsonl"), first);
  fs::remove_all(dir);
}

TEST(SimulateCommandTest, SnrGridGivesBuckets) {
  KeyValues kv = KeyValues::ParseString("eval_snr_grid=0,5,10,15,20\n");
  EXPECT_EQ(SimulationConfigFromKeyValues(kv).eval_snr_grid.size(), 5u);
  EXPECT_THROW(ParseDoubleList("0,x"), Error);
  KeyValues typo = KeyValues::ParseString("num_spekers=3\n");
  EXPECT_THROW(SimulationConfigFromKeyValues(typo), Error);
}

TEST(EvalCerTest, HypothesisFileRoundTrip) {
  fs::path dir = fs::temp_directory_path() / "tsrnnt-evalcer";
  fs::create_directories(dir);
  Manifest m(3);
  for (int i = 0; i < 3; ++i) {
    m[i].id = "x" + std::to_string(i);
    m[i].mixture_path = "none.wav";
    m[i].transcript = {1, 2, 3};
    m[i].snr_db = 5.0 * i;
  }
  WriteManifest(m, (dir / "m.jsonl").string());
  CerReport rep;
  UttResult a{"x0", 0, {1, 2, 3}, {1, 2, 3}, 0.0}, b{"x1", 5, {1, 2, 3}, {}, 1.0},
      c{"x2", 10, {1, 2, 3}, {1, 3}, 1.0 / 3};
  rep.Add(a);
  rep.Add(b);
  rep.Add(c);
  WriteHypotheses(rep, (dir / "hyp.txt").string());
  CerReport ev = EvalCer((dir / "m.jsonl").string(), (dir / "hyp.txt").string());
  ASSERT_EQ(ev.utts.size(), 3u);
  EXPECT_NEAR(ev.average, 4.0 / 9, 1e-12);
  {
    std::ofstream os(dir / "short.txt");
    os << "x0\t1 2 3\n";
  }
  EXPECT_THROW(EvalCer((dir / "m.jsonl").string(), (dir / "short.txt").string()), Error);
  fs::remove_all(dir);
}

TEST(OracleCommandTest, Passes) {
  OracleTestReport r = RunOracleTests(20, 9);
  EXPECT_TRUE(r.Passed(1e-5, 1e-3)) << r.ToText();
}

}  // namespace
}  // namespace tsrnnt
