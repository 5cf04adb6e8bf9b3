// simulate/recipe.cc
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

#include "simulate/recipe.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "base/error.h"

namespace tsrnnt {

MixtureGenerator::MixtureGenerator(const ToyCorpus *corpus,
                                   const SimulationConfig &config)
    : corpus_(corpus), config_(config) {
  const ToyCorpusConfig &cc = corpus->Config();
  int32_t reserved = config.enroll_utts * config.enrollments_per_speaker;
  num_target_utts_ = cc.utts_per_speaker - reserved;
  if (config.enroll_utts < 1 || config.enrollments_per_speaker < 1 ||
      num_target_utts_ < 1) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage)
        << "need more than " << reserved << " utterances per speaker";
  }
  int32_t held_out = config.num_dev_speakers + config.num_eval_speakers;
  if (config.num_dev_speakers < 2 || config.num_eval_speakers < 2 ||
      cc.num_speakers - held_out < 2) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage)
        << "insufficient speakers for a disjoint split: " << cc.num_speakers
        << " total, " << config.num_dev_speakers << " dev, "
        << config.num_eval_speakers << " eval (each split needs >= 2)";
  }
  std::vector<int32_t> order(cc.num_speakers);
  for (int32_t i = 0; i < cc.num_speakers; ++i) order[i] = i;
  Rng rng = Rng(config.seed).Fork(101);
  for (int32_t i = cc.num_speakers - 1; i > 0; --i) {
    std::swap(order[i], order[rng.UniformInt(0, i)]);
  }
  dev_.assign(order.begin(), order.begin() + config.num_dev_speakers);
  eval_.assign(order.begin() + config.num_dev_speakers, order.begin() + held_out);
  train_.assign(order.begin() + held_out, order.end());
}

Waveform MixtureGenerator::Enrollment(int32_t speaker, int32_t j) const {
  const std::vector<int32_t> &utts = corpus_->UtterancesOf(speaker);
  Waveform w;
  for (int32_t k = 0; k < config_.enroll_utts; ++k) {
    int32_t idx = num_target_utts_ + j * config_.enroll_utts + k;
    Waveform part = corpus_->Render(utts.at(idx));
    w.samples.insert(w.samples.end(), part.samples.begin(), part.samples.end());
  }
  return w;
}

std::string MixtureGenerator::EnrollmentName(int32_t speaker, int32_t j) const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "wav/enroll-s%03d-%d.wav", speaker, j);
  return buf;
}

MixtureExample MixtureGenerator::Generate(MixtureKind kind,
                                          const std::vector<int32_t> &speakers,
                                          double snr_db, const std::string &id,
                                          Rng *rng) const {
  const auto &spk = corpus_->Speakers();
  MixtureExample ex;
  int32_t target_spk = speakers.at(rng->UniformInt(0, speakers.size() - 1));
  ex.target_utt = corpus_->UtterancesOf(target_spk)[rng->UniformInt(0, num_target_utts_ - 1)];
  ex.enroll_index = static_cast<int32_t>(rng->UniformInt(0, config_.enrollments_per_speaker - 1));
  if (std::isnan(snr_db)) snr_db = rng->Uniform(config_.min_snr_db, config_.max_snr_db);
  double sir_db = 0.0;
  Waveform target = corpus_->Render(ex.target_utt);
  Waveform noise = LowPassNoise(target.NumSamples(), rng);

  ManifestRecord &rec = ex.record;
  rec.id = id;
  rec.mixture_path = "wav/" + id + ".wav";
  rec.enroll_path = EnrollmentName(target_spk, ex.enroll_index);
  rec.transcript = corpus_->Utterance(ex.target_utt).tokens;
  rec.speaker_id = target_spk;

  if (kind == MixtureKind::kTwoSpeaker) {
    std::vector<int32_t> candidates;
    for (int32_t s : speakers) {
      if (s != target_spk &&
          std::fabs(std::log(spk[s].formant_hz / spk[target_spk].formant_hz)) >=
              config_.min_formant_separation) {
        candidates.push_back(s);
      }
    }
    if (candidates.empty()) {
      TSRNNT_ERR_CODE(ErrorCode::kData)
          << "no interferer for speaker " << target_spk
          << " satisfies the formant separation " << config_.min_formant_separation;
    }
    int32_t other = candidates[rng->UniformInt(0, candidates.size() - 1)];
    ex.interferer_utt = corpus_->UtterancesOf(other)[rng->UniformInt(0, num_target_utts_ - 1)];
    ex.interferer_enroll_index =
        static_cast<int32_t>(rng->UniformInt(0, config_.enrollments_per_speaker - 1));
    sir_db = rng->Uniform(config_.min_sir_db, config_.max_sir_db);
    Waveform interferer = corpus_->Render(ex.interferer_utt);
    ex.mix = Mix(target, &interferer, &noise, sir_db, snr_db, config_.overlap, rng);
    rec.interferer_speaker_id = other;
    rec.interferer_enroll_path = EnrollmentName(other, ex.interferer_enroll_index);
    rec.interferer_transcript = corpus_->Utterance(ex.interferer_utt).tokens;
  } else {
    ex.mix = Mix(target, nullptr, &noise, 0.0, snr_db, 1.0, rng);
  }
  rec.sir_db = ex.mix.sir_db;
  rec.snr_db = ex.mix.snr_db;
  rec.overlap = ex.mix.overlap;
  return ex;
}

namespace {

std::string SetId(const char *set, int32_t i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%06d", set, i);
  return buf;
}

}  // namespace

SimulatedSets Simulate(const SimulationConfig &config, const std::string &out_dir) {
  ToyCorpus corpus(config.corpus);
  MixtureGenerator gen(&corpus, config);
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(out_dir) / "wav");

  SimulatedSets sets;
  sets.train_speakers = gen.TrainSpeakers();
  sets.dev_speakers = gen.DevSpeakers();
  sets.eval_speakers = gen.EvalSpeakers();

  auto emit = [&](const MixtureExample &ex, Manifest *out) {
    WriteWave(ex.mix.mixture, (fs::path(out_dir) / ex.record.mixture_path).string());
    out->push_back(ex.record);
  };
  Rng root(config.seed);
  const double kDraw = std::nan("");
  Rng rng_a = root.Fork(1);
  for (int32_t i = 0; i < config.num_train_single; ++i) {
    Rng r = rng_a.Fork(i);
    emit(gen.Generate(MixtureKind::kSingle, sets.train_speakers, kDraw,
                      SetId("train_a", i), &r), &sets.train_a);
  }
  Rng rng_b = root.Fork(2);
  for (int32_t i = 0; i < config.num_train_mixtures; ++i) {
    Rng r = rng_b.Fork(i);
    emit(gen.Generate(MixtureKind::kTwoSpeaker, sets.train_speakers, kDraw,
                      SetId("train_b", i), &r), &sets.train_b);
  }
  Rng rng_dev = root.Fork(3);
  for (int32_t i = 0; i < config.num_dev_mixtures; ++i) {
    Rng r = rng_dev.Fork(i);
    emit(gen.Generate(MixtureKind::kTwoSpeaker, sets.dev_speakers, kDraw,
                      SetId("dev", i), &r), &sets.dev);
  }
  Rng rng_eval = root.Fork(4);
  int32_t n = 0;
  for (double snr : config.eval_snr_grid) {
    for (int32_t i = 0; i < config.eval_per_snr; ++i, ++n) {
      Rng r = rng_eval.Fork(n);
      emit(gen.Generate(MixtureKind::kTwoSpeaker, sets.eval_speakers, snr,
                        SetId("eval", n), &r), &sets.eval);
    }
  }
  for (int32_t s = 0; s < config.corpus.num_speakers; ++s) {
    for (int32_t j = 0; j < config.enrollments_per_speaker; ++j) {
      WriteWave(gen.Enrollment(s, j), (fs::path(out_dir) / gen.EnrollmentName(s, j)).string());
    }
  }
  WriteManifest(sets.train_a, (fs::path(out_dir) / "train_a.jsonl").string());
  WriteManifest(sets.train_b, (fs::path(out_dir) / "train_b.jsonl").string());
  WriteManifest(sets.dev, (fs::path(out_dir) / "dev.jsonl").string());
  WriteManifest(sets.eval, (fs::path(out_dir) / "eval.jsonl").string());
  return sets;
}

}  // namespace tsrnnt
