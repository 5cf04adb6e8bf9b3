// decoding/search.h
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

#ifndef TSRNNT_DECODING_SEARCH_H_
#define TSRNNT_DECODING_SEARCH_H_

#include <cstdint>
#include <map>
#include <vector>

#include "decoding/scorer.h"

namespace tsrnnt {

struct Hypothesis {
  std::vector<int32_t> tokens;
  double log_prob = 0.0;
  int32_t t = 0;  // next frame to consume; prediction state is keyed by tokens
};

struct NBestEntry {
  std::vector<int32_t> tokens;
  double log_prob = 0.0;
};
// Best first; ties go to the shorter, then lexicographically smaller sequence.
using NBest = std::vector<NBestEntry>;

// Ordering used everywhere a ranking is needed.
bool BetterHypothesis(double score_a, const std::vector<int32_t> &a, double score_b,
                      const std::vector<int32_t> &b);

// ---- greedy

struct GreedyOptions {
  int32_t max_symbols_per_frame = 10;
};

// Incremental greedy search. Advance() consumes every frame the scorer has.
class GreedySearch {
 public:
  GreedySearch(TransducerScorer *scorer, const GreedyOptions &opts = {});
  void Advance();
  const std::vector<int32_t> &Tokens() const { return tokens_; }
  double LogProb() const { return log_prob_; }  // of the greedy path
  int32_t FramesConsumed() const { return t_; }

 private:
  TransducerScorer *scorer_;
  GreedyOptions opts_;
  std::vector<int32_t> tokens_;
  double log_prob_ = 0.0;
  int32_t t_ = 0;
};

std::vector<int32_t> GreedyDecode(TransducerScorer *scorer, const GreedyOptions &opts = {});

// ---- alignment-length synchronous beam search

enum class MergeMode { kLogSum, kMax };

struct AlsdOptions {
  int32_t beam = 8;
  // Upper bound on the output length; negative means 2 * T.
  int32_t u_max = -1;
  MergeMode merge = MergeMode::kLogSum;
  int32_t nbest = 0;  // entries returned; 0 means beam
};

// Hypotheses at step i all satisfy t + len(tokens) = i. Each step expands
// every live hypothesis by blank (t + 1) and by every token (same t), merges
// equal prefixes and keeps the best `beam`. Blank from the last frame ends a
// hypothesis.
//
// Works incrementally: Advance() runs as many steps as the available frames
// allow, Finalize() declares the scorer's current frame count final. The
// steps taken are exactly those of a one-shot run, so the result does not
// depend on how frames were delivered.
class AlsdSearch {
 public:
  AlsdSearch(TransducerScorer *scorer, const AlsdOptions &opts = {});

  void Advance();
  NBest Finalize();

  // Longest prefix shared by every live hypothesis. Never shrinks.
  std::vector<int32_t> CommittedPrefix() const;
  const std::vector<Hypothesis> &Beam() const { return beam_; }
  int32_t Step() const { return step_; }

 private:
  bool CanStep(bool final) const;
  void RunStep(int32_t num_frames);
  void Combine(double *into, double score) const;

  TransducerScorer *scorer_;
  AlsdOptions opts_;
  std::vector<Hypothesis> beam_;
  std::map<std::vector<int32_t>, double> finished_;
  int32_t step_ = 0;
  bool finalized_ = false;
};

NBest AlsdBeamSearch(TransducerScorer *scorer, const AlsdOptions &opts = {});

// ---- exhaustive oracle

// Scores every sequence of up to u_max tokens by its exact marginal over
// alignments (the negated transducer loss) and ranks them all. Throws when
// more than `max_sequences` sequences would be scored.
NBest ExhaustiveOracle(TransducerScorer *scorer, int32_t u_max,
                       int64_t max_sequences = 1000000);

}  // namespace tsrnnt

#endif  // TSRNNT_DECODING_SEARCH_H_
