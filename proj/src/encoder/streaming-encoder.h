// encoder/streaming-encoder.h
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

#ifndef TSRNNT_ENCODER_STREAMING_ENCODER_H_
#define TSRNNT_ENCODER_STREAMING_ENCODER_H_

#include <cstdint>
#include <vector>

#include "encoder/encoder.h"

namespace tsrnnt {

// Incremental version of Encode() for the Causal and Chunked regimes. Every
// encoder frame is computed from exactly the inputs the full-sequence pass
// uses, in the same order, so the outputs match Encode() bit for bit.
//
// Encoder frame s needs feature frames up to 4s+6. In the Causal regime a
// frame is pushed through the blocks as soon as the subsampler produces it;
// in the Chunked regime frames wait until their chunk is complete.
class StreamingEncoder {
 public:
  // `embedding` is [1 x D] and required iff cfg.TargetSpeaker(). Both
  // pointers must outlive the encoder.
  StreamingEncoder(const ParamSet *params, const std::string &prefix,
                   const EncoderConfig &cfg, const Tensor *embedding);

  // Takes normalised feature rows; returns the encoder frames that became
  // final ([n x D], n may be 0).
  Tensor Accept(const Tensor &feats);
  // Pads the end of the sequence and flushes everything.
  Tensor Finalize();

  int32_t NumFeatureFrames() const { return num_feats_; }
  int32_t NumFramesOut() const { return frames_out_; }
  // Encoder frames computed by the subsampler but held back (Chunked).
  int32_t NumPending() const { return pending_.Empty() ? 0 : pending_.NumRows(); }

  const BlockCache &Cache(int32_t block) const { return caches_.at(block); }
  BlockCache *MutableCache(int32_t block) { return &caches_.at(block); }
  // Largest number of rows held in any buffer so far (memory-bound tests).
  int32_t PeakBufferedRows() const { return peak_rows_; }

 private:
  // Runs the subsampler as far as the buffered features allow.
  void RunSubsampler(bool final);
  // Pushes rows through the Conformer blocks.
  Tensor RunBlocks(const Tensor &frames);
  Tensor Drain(bool final);
  void TrackPeak();

  const ParamSet *params_;
  std::string prefix_;
  EncoderConfig cfg_;
  const Tensor *embedding_;
  std::vector<bool> fuse_after_;
  std::vector<BlockCache> caches_;
  bool finalized_ = false;

  int32_t num_feats_ = 0;
  // Each buffer holds consecutive rows starting at global index *_base_.
  Tensor feat_buf_;
  int32_t feat_base_ = -1;
  Tensor conv1_buf_;
  int32_t conv1_base_ = 0;
  Tensor pool1_buf_;
  int32_t pool1_base_ = -1;
  int32_t num_pool1_ = 0;
  Tensor conv2_buf_;
  int32_t conv2_base_ = 0;
  int32_t num_sub_ = 0;  // encoder frames produced by the subsampler

  Tensor pending_;  // subsampled frames not yet through the blocks
  int32_t frames_out_ = 0;
  int32_t peak_rows_ = 0;
};

}  // namespace tsrnnt

#endif  // TSRNNT_ENCODER_STREAMING_ENCODER_H_
