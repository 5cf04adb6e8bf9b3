// decoding/search.cc
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

#include "decoding/search.h"

#include <algorithm>
#include <climits>
#include <cmath>

#include "base/error.h"
#include "numerics/log-math.h"
#include "transducer/rnnt-loss.h"

namespace tsrnnt {

bool BetterHypothesis(double score_a, const std::vector<int32_t> &a, double score_b,
                      const std::vector<int32_t> &b) {
  if (score_a != score_b) return score_a > score_b;
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

namespace {

void SortNBest(NBest *n) {
  std::sort(n->begin(), n->end(), [](const NBestEntry &x, const NBestEntry &y) {
    return BetterHypothesis(x.log_prob, x.tokens, y.log_prob, y.tokens);
  });
}

}  // namespace

GreedySearch::GreedySearch(TransducerScorer *scorer, const GreedyOptions &opts)
    : scorer_(scorer), opts_(opts) {
  if (opts.max_symbols_per_frame < 1) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "max_symbols_per_frame must be >= 1";
  }
}

void GreedySearch::Advance() {
  std::vector<double> lp;
  for (; t_ < scorer_->NumFrames(); ++t_) {
    for (int32_t n = 0;; ++n) {
      scorer_->LogProbs(t_, tokens_, &lp);
      int32_t best = kBlank;
      for (int32_t k = 1; k < static_cast<int32_t>(lp.size()); ++k) {
        if (lp[k] > lp[best]) best = k;
      }
      // At the cap the frame is closed with blank whatever it scores.
      if (best == kBlank || n == opts_.max_symbols_per_frame) {
        log_prob_ += lp[kBlank];
        break;
      }
      log_prob_ += lp[best];
      tokens_.push_back(best);
    }
  }
}

std::vector<int32_t> GreedyDecode(TransducerScorer *scorer, const GreedyOptions &opts) {
  if (scorer->NumFrames() < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "no frames to decode";
  GreedySearch g(scorer, opts);
  g.Advance();
  return g.Tokens();
}

AlsdSearch::AlsdSearch(TransducerScorer *scorer, const AlsdOptions &opts)
    : scorer_(scorer), opts_(opts) {
  if (opts.beam < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "beam must be >= 1";
  if (opts.nbest < 0) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "nbest must be >= 0";
  beam_.push_back(Hypothesis{});
}

void AlsdSearch::Combine(double *into, double score) const {
  *into = opts_.merge == MergeMode::kLogSum ? LogAdd(*into, score) : std::max(*into, score);
}

bool AlsdSearch::CanStep(bool final) const {
  if (beam_.empty()) return false;
  if (final) return true;
  const int32_t avail = scorer_->NumFrames();
  for (const Hypothesis &h : beam_) {
    // The frame count is not final yet, so no hypothesis may take the
    // closing blank: keep one frame in reserve.
    if (h.t + 1 >= avail) return false;
    // With the automatic bound u_max = 2T and T >= avail, the label
    // extension is only decidable once 2 * avail exceeds the length.
    if (opts_.u_max < 0 && static_cast<int32_t>(h.tokens.size()) >= 2 * avail) return false;
  }
  return true;
}

void AlsdSearch::RunStep(int32_t num_frames) {
  // num_frames < 0: total unknown, CanStep already vetted the length bound.
  int32_t u_max = opts_.u_max;
  if (u_max < 0) u_max = num_frames < 0 ? INT32_MAX : 2 * num_frames;
  std::map<std::vector<int32_t>, double> expanded;  // all at t = step + 1 - len
  std::vector<double> lp;
  for (const Hypothesis &h : beam_) {
    scorer_->LogProbs(h.t, h.tokens, &lp);
    double blank = h.log_prob + lp[kBlank];
    if (blank == kLogZero) {
      // impossible path, dropped
    } else if (h.t + 1 == num_frames) {
      auto [it, fresh] = finished_.emplace(h.tokens, blank);
      if (!fresh) Combine(&it->second, blank);
    } else {
      auto [it, fresh] = expanded.emplace(h.tokens, blank);
      if (!fresh) Combine(&it->second, blank);
    }
    if (static_cast<int32_t>(h.tokens.size()) < u_max) {
      std::vector<int32_t> ext = h.tokens;
      ext.push_back(0);
      for (int32_t k = 1; k < static_cast<int32_t>(lp.size()); ++k) {
        ext.back() = k;
        double s = h.log_prob + lp[k];
        if (s == kLogZero) continue;
        auto [it, fresh] = expanded.emplace(ext, s);
        if (!fresh) Combine(&it->second, s);
      }
    }
  }
  ++step_;
  std::vector<Hypothesis> next;
  next.reserve(expanded.size());
  for (auto &[tokens, score] : expanded) {
    Hypothesis h;
    h.t = step_ - static_cast<int32_t>(tokens.size());
    h.tokens = tokens;
    h.log_prob = score;
    next.push_back(std::move(h));
  }
  auto better = [](const Hypothesis &a, const Hypothesis &b) {
    return BetterHypothesis(a.log_prob, a.tokens, b.log_prob, b.tokens);
  };
  if (static_cast<int32_t>(next.size()) > opts_.beam) {
    std::partial_sort(next.begin(), next.begin() + opts_.beam, next.end(), better);
    next.resize(opts_.beam);
  } else {
    std::sort(next.begin(), next.end(), better);
  }
  beam_ = std::move(next);
}

void AlsdSearch::Advance() {
  if (finalized_) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "search already finalized";
  while (CanStep(false)) RunStep(-1);
}

NBest AlsdSearch::Finalize() {
  if (finalized_) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "search already finalized";
  const int32_t T = scorer_->NumFrames();
  if (T < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "no frames to decode";
  finalized_ = true;
  while (CanStep(true)) RunStep(T);
  NBest out;
  for (auto &[tokens, score] : finished_) out.push_back({tokens, score});
  SortNBest(&out);
  size_t keep = opts_.nbest > 0 ? opts_.nbest : opts_.beam;
  if (out.size() > keep) out.resize(keep);
  return out;
}

std::vector<int32_t> AlsdSearch::CommittedPrefix() const {
  if (beam_.empty()) return {};
  std::vector<int32_t> p = beam_[0].tokens;
  for (const Hypothesis &h : beam_) {
    size_t n = 0;
    while (n < p.size() && n < h.tokens.size() && p[n] == h.tokens[n]) ++n;
    p.resize(n);
  }
  return p;
}

NBest AlsdBeamSearch(TransducerScorer *scorer, const AlsdOptions &opts) {
  AlsdSearch s(scorer, opts);
  return s.Finalize();
}

NBest ExhaustiveOracle(TransducerScorer *scorer, int32_t u_max, int64_t max_sequences) {
  const int32_t T = scorer->NumFrames(), K = scorer->NumClasses();
  if (T < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "no frames to decode";
  if (u_max < 0) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "u_max must be >= 0";
  int64_t count = 0, layer = 1;
  for (int32_t u = 0; u <= u_max; ++u) {
    count += layer;
    if (count > max_sequences) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage)
          << "oracle would score more than " << max_sequences << " sequences";
    }
    layer *= K - 1;
  }
  NBest out;
  std::vector<int32_t> y;
  std::vector<double> lp;
  // depth-first over sequences in lexicographic order
  auto score = [&]() {
    const int32_t U = static_cast<int32_t>(y.size());
    Tensor lattice = Tensor::Matrix(T * (U + 1), K);
    for (int32_t t = 0; t < T; ++t) {
      for (int32_t u = 0; u <= U; ++u) {
        scorer->LogProbs(t, std::span<const int32_t>(y).first(u), &lp);
        for (int32_t k = 0; k < K; ++k) lattice(t * (U + 1) + u, k) = static_cast<float>(lp[k]);
      }
    }
    out.push_back({y, -ComputeRnntLoss(lattice, y, T).loss});
  };
  std::vector<int32_t> next_token = {1};
  score();
  while (true) {
    if (static_cast<int32_t>(y.size()) < u_max && next_token.back() < K) {
      y.push_back(next_token.back());
      next_token.back()++;
      next_token.push_back(1);
      score();
    } else {
      next_token.pop_back();
      if (y.empty()) break;
      y.pop_back();
    }
  }
  SortNBest(&out);
  return out;
}

}  // namespace tsrnnt
