// tests/simulate-test.cc
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

#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "base/error.h"
#include "gtest/gtest.h"
#include "simulate/manifest.h"
#include "simulate/mix.h"
#include "simulate/recipe.h"
#include "simulate/toy-corpus.h"

namespace tsrnnt {
namespace {

ToyCorpusConfig SmallCorpus() {
  ToyCorpusConfig c;
  c.num_speakers = 12;
  c.utts_per_speaker = 10;
  return c;
}

Waveform RandomWave(int64_t n, Rng *rng) {
  Waveform w;
  w.samples.resize(n);
  for (float &v : w.samples) v = static_cast<float>(0.1 * rng->Normal());
  return w;
}

TEST(MixTest, IdenticalInterfererAtZeroDbHasUnitScale) {
  Rng rng(1);
  Waveform t = RandomWave(4000, &rng);
  MixResult r = Mix(t, &t, nullptr, 0.0, 0.0, 1.0, &rng);
  EXPECT_EQ(r.interferer_scale, 1.0);
  EXPECT_EQ(r.interferer, t.samples);
}

TEST(MixTest, MinusFiveDbSir) {
  Rng rng(2);
  Waveform t = RandomWave(3000, &rng), i = RandomWave(2000, &rng);
  MixResult r = Mix(t, &i, nullptr, -5.0, 0.0, 1.0, &rng);
  EXPECT_NEAR(MeanPower(r.interferer) / MeanPower(r.target), std::pow(10.0, 0.5), 1e-6);
}

TEST(MixTest, RemeasuredLevelsAreExactAndMixingIsLinear) {
  ToyCorpus corpus(SmallCorpus());
  Rng rng(3);
  double worst = 0.0, worst_lin = 0.0;
  for (int n = 0; n < 200; ++n) {
    int32_t a = rng.UniformInt(0, corpus.Utterances().size() - 1);
    int32_t b = rng.UniformInt(0, corpus.Utterances().size() - 1);
    Waveform t = corpus.Render(a), i = corpus.Render(b);
    Waveform noise = LowPassNoise(500 + rng.UniformInt(0, 5000), &rng);
    double sir = rng.Uniform(-5, 5), snr = rng.Uniform(0, 20);
    MixResult r = Mix(t, &i, &noise, sir, snr, 0.89, &rng);
    worst = std::max(worst, std::fabs(PowerRatioDb(r.target, r.interferer) - sir));
    worst = std::max(worst, std::fabs(PowerRatioDb(r.target, r.noise) - snr));
    for (size_t k = 0; k < t.samples.size(); ++k) {
      double d = r.mixture.samples[k] - (static_cast<double>(r.target[k]) +
                                         r.interferer[k] + r.noise[k]);
      worst_lin = std::max(worst_lin, std::fabs(d));
    }
    EXPECT_NEAR(r.overlap, 0.89, 1.0 / t.samples.size());
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_LT(worst_lin, 1e-7);
}

TEST(MixTest, ZeroPowerIsAnError) {
  Rng rng(4);
  Waveform t = RandomWave(100, &rng), z;
  z.samples.assign(100, 0.0f);
  EXPECT_THROW(Mix(z, &t, nullptr, 0, 0, 1.0, &rng), Error);
  EXPECT_THROW(Mix(t, &z, nullptr, 0, 0, 1.0, &rng), Error);
  EXPECT_THROW(Mix(t, nullptr, &z, 0, 0, 1.0, &rng), Error);
}

TEST(SdrTest, Examples) {
  Rng rng(5);
  Waveform s = RandomWave(1000, &rng);
  EXPECT_EQ(Sdr(s.samples, s.samples), 60.0);
  std::vector<float> neg(s.samples);
  for (float &v : neg) v = -v;
  EXPECT_NEAR(Sdr(s.samples, neg), -10.0 * std::log10(4.0), 1e-9);
  // e with |e|^2 = |s|^2 / 100: e = s / 10
  std::vector<float> est(s.samples);
  for (float &v : est) v *= 1.1f;
  EXPECT_NEAR(Sdr(s.samples, est), 20.0, 1e-4);
  for (double g : {0.5, 0.9, 2.0}) {
    std::vector<float> e(s.samples);
    for (float &v : e) v = static_cast<float>(v * g);
    EXPECT_NEAR(Sdr(s.samples, e), -10.0 * std::log10((1 - g) * (1 - g)), 1e-4) << g;
  }
  std::vector<float> zero(1000, 0.0f);
  EXPECT_THROW(Sdr(zero, s.samples), Error);
}

TEST(ToyCorpusTest, SegmentsDependOnSpeakerAndTokenOnly) {
  ToyCorpus corpus(SmallCorpus());
  EXPECT_NE(corpus.RenderSegment(0, 3), corpus.RenderSegment(1, 3));
  EXPECT_NE(corpus.Speakers()[0].f0_hz, corpus.Speakers()[1].f0_hz);
  // find two utterances of speaker 0 sharing a token and compare segments
  const auto &utts = corpus.UtterancesOf(0);
  std::map<int32_t, std::vector<float>> seen;
  int32_t compared = 0;
  for (int32_t id : utts) {
    const ToyUtterance &u = corpus.Utterance(id);
    Waveform w = corpus.Render(u);
    for (size_t k = 0; k < u.tokens.size(); ++k) {
      int64_t start = u.lead_samples + k * ToyCorpus::kTokenSamples;
      std::vector<float> seg(w.samples.begin() + start,
                             w.samples.begin() + start + ToyCorpus::kTokenSamples);
      auto [it, inserted] = seen.emplace(u.tokens[k], seg);
      if (!inserted) {
        EXPECT_EQ(it->second, seg);
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 0);
}

TEST(ToyCorpusTest, TokenPatternsAreDistinctShapes) {
  for (int32_t a = 1; a <= 16; ++a) {
    for (int32_t b = a + 1; b <= 16; ++b) {
      EXPECT_NE(ToyCorpus::TokenLevels(a), ToyCorpus::TokenLevels(b));
    }
  }
}

TEST(ToyCorpusTest, MatchedFilterRecoversTranscripts) {
  ToyCorpus corpus(SmallCorpus());
  for (const ToyUtterance &u : corpus.Utterances()) {
    EXPECT_EQ(corpus.MatchedFilterDecode(corpus.Render(u), u.speaker, u.lead_samples),
              u.tokens);
  }
}

TEST(ToyCorpusTest, RejectsDegenerateConfigs) {
  ToyCorpusConfig c = SmallCorpus();
  c.vocab_size = 1;
  EXPECT_THROW(ToyCorpus{c}, Error);
  c = SmallCorpus();
  c.num_speakers = 1;
  EXPECT_THROW(ToyCorpus{c}, Error);
}

TEST(ManifestTest, RoundTrip) {
  Manifest m(3);
  for (int i = 0; i < 3; ++i) {
    m[i].id = "utt" + std::to_string(i);
    m[i].mixture_path = "wav/x.wav";
    m[i].enroll_path = "wav/e.wav";
    m[i].transcript = {1, 2, 3 + i};
    m[i].speaker_id = i;
    m[i].sir_db = -4.123456789012345 + i;
    m[i].snr_db = 0.1 * i;
    m[i].overlap = 0.89;
  }
  m[1].interferer_speaker_id = 7;
  m[1].interferer_transcript = {4};
  std::string path = testing::TempDir() + "/manifest.jsonl";
  WriteManifest(m, path);
  EXPECT_EQ(ReadManifest(path), m);
}

TEST(RecipeTest, SetsAreDisjointAndEvalGridIsBalanced) {
  SimulationConfig cfg;
  cfg.corpus = SmallCorpus();
  cfg.num_dev_speakers = 2;
  cfg.num_eval_speakers = 4;
  cfg.num_train_single = 6;
  cfg.num_train_mixtures = 8;
  cfg.num_dev_mixtures = 3;
  cfg.eval_per_snr = 4;
  cfg.min_formant_separation = 0.0;
  std::string dir = testing::TempDir() + "/sim";
  std::filesystem::remove_all(dir);
  SimulatedSets sets = Simulate(cfg, dir);
  std::set<int32_t> train(sets.train_speakers.begin(), sets.train_speakers.end());
  for (int32_t s : sets.eval_speakers) EXPECT_FALSE(train.count(s));
  for (int32_t s : sets.dev_speakers) EXPECT_FALSE(train.count(s));
  for (const auto &r : sets.train_b) {
    EXPECT_TRUE(train.count(r.speaker_id));
    EXPECT_TRUE(train.count(r.interferer_speaker_id));
    EXPECT_NE(r.speaker_id, r.interferer_speaker_id);
    EXPECT_GE(r.sir_db, -5.0);
    EXPECT_LE(r.sir_db, 5.0);
  }
  for (const auto &r : sets.train_a) EXPECT_EQ(r.interferer_speaker_id, -1);
  std::map<double, int> buckets;
  for (const auto &r : sets.eval) buckets[r.snr_db]++;
  ASSERT_EQ(buckets.size(), 5u);
  for (auto [snr, n] : buckets) EXPECT_EQ(n, 4) << snr;
  EXPECT_EQ(ReadManifest(dir + "/eval.jsonl"), sets.eval);
  for (const auto &r : sets.eval) {
    EXPECT_TRUE(std::filesystem::exists(ResolvePath(dir + "/eval.jsonl", r.mixture_path)));
    EXPECT_TRUE(std::filesystem::exists(ResolvePath(dir + "/eval.jsonl", r.enroll_path)));
  }
}

TEST(RecipeTest, SingleSpeakerRowHasOneComponent) {
  ToyCorpus corpus(SmallCorpus());
  SimulationConfig cfg;
  cfg.corpus = SmallCorpus();
  cfg.num_dev_speakers = 2;
  cfg.num_eval_speakers = 2;
  MixtureGenerator gen(&corpus, cfg);
  Rng rng(9);
  MixtureExample ex = gen.Generate(MixtureKind::kSingle, gen.TrainSpeakers(), 10.0, "x", &rng);
  for (float v : ex.mix.interferer) ASSERT_EQ(v, 0.0f);
  EXPECT_NEAR(PowerRatioDb(ex.mix.target, ex.mix.noise), 10.0, 1e-6);
  // enrollment never reuses the target utterance
  int32_t first_reserved = gen.NumTargetUtts();
  const auto &utts = corpus.UtterancesOf(ex.record.speaker_id);
  EXPECT_LT(std::find(utts.begin(), utts.end(), ex.target_utt) - utts.begin(), first_reserved);
}

TEST(RecipeTest, InsufficientSpeakersIsAnError) {
  ToyCorpusConfig c = SmallCorpus();
  c.num_speakers = 5;
  ToyCorpus corpus(c);
  SimulationConfig cfg;
  cfg.corpus = c;
  cfg.num_dev_speakers = 2;
  cfg.num_eval_speakers = 2;
  EXPECT_THROW(MixtureGenerator(&corpus, cfg), Error);
}

}  // namespace
}  // namespace tsrnnt
