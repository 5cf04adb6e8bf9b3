// simulate/recipe.h
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

#ifndef TSRNNT_SIMULATE_RECIPE_H_
#define TSRNNT_SIMULATE_RECIPE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "simulate/manifest.h"
#include "simulate/mix.h"
#include "simulate/toy-corpus.h"

namespace tsrnnt {

struct SimulationConfig {
  ToyCorpusConfig corpus;
  int32_t num_dev_speakers = 6;
  int32_t num_eval_speakers = 10;
  int32_t num_train_single = 2000;    // row (a): one speaker + noise
  int32_t num_train_mixtures = 2000;  // row (b): two speakers + noise
  int32_t num_dev_mixtures = 100;
  int32_t eval_per_snr = 20;          // row (c), per SNR bucket
  std::vector<double> eval_snr_grid = {0, 5, 10, 15, 20};
  double min_sir_db = -5.0, max_sir_db = 5.0;
  double min_snr_db = 0.0, max_snr_db = 20.0;
  double overlap = 0.89;
  // Minimum |ln(formant_target / formant_interferer)| when pairing speakers.
  double min_formant_separation = 0.35;
  int32_t enroll_utts = 3;
  int32_t enrollments_per_speaker = 2;
  uint64_t seed = 1;
};

enum class MixtureKind { kSingle, kTwoSpeaker };

struct MixtureExample {
  ManifestRecord record;
  MixResult mix;
  int32_t target_utt = -1;
  int32_t interferer_utt = -1;
  int32_t enroll_index = 0;
  int32_t interferer_enroll_index = 0;
};

// Draws examples from a toy corpus restricted to a speaker subset. The last
// enroll_utts * enrollments_per_speaker utterances of every speaker are kept
// for enrollments; targets and interferers never use them.
class MixtureGenerator {
 public:
  MixtureGenerator(const ToyCorpus *corpus, const SimulationConfig &config);

  // Speakers are shuffled with the config seed and split into
  // train / dev / eval. Throws if there are too few for a disjoint split.
  const std::vector<int32_t> &TrainSpeakers() const { return train_; }
  const std::vector<int32_t> &DevSpeakers() const { return dev_; }
  const std::vector<int32_t> &EvalSpeakers() const { return eval_; }

  // `snr_db` NaN means "draw uniformly from the configured range".
  MixtureExample Generate(MixtureKind kind, const std::vector<int32_t> &speakers,
                          double snr_db, const std::string &id, Rng *rng) const;

  // Concatenation of the speaker's j-th enrollment utterances.
  Waveform Enrollment(int32_t speaker, int32_t j) const;
  std::string EnrollmentName(int32_t speaker, int32_t j) const;
  int32_t NumTargetUtts() const { return num_target_utts_; }

 private:
  const ToyCorpus *corpus_;
  SimulationConfig config_;
  int32_t num_target_utts_;
  std::vector<int32_t> train_, dev_, eval_;
};

struct SimulatedSets {
  Manifest train_a, train_b, dev, eval;
  std::vector<int32_t> train_speakers, dev_speakers, eval_speakers;
};

// Renders everything under out_dir: wav/*.wav plus train_a.jsonl,
// train_b.jsonl, dev.jsonl and eval.jsonl (paths relative to out_dir).
SimulatedSets Simulate(const SimulationConfig &config, const std::string &out_dir);

}  // namespace tsrnnt

#endif  // TSRNNT_SIMULATE_RECIPE_H_
