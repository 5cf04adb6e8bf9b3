// cli/train.cc
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

#include "cli/train.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "base/error.h"

namespace tsrnnt {

ModelConfig ModelPreset(const std::string &name) {
  ModelConfig c;
  if (name == "toy") return c;
  if (name == "large") {
    c.encoder.subsample_channels = 32;
    c.encoder.model_dim = 512;
    c.encoder.num_blocks = 17;
    c.encoder.num_heads = 8;
    c.encoder.ffn_dim = 2048;
    c.encoder.conv_kernel = 15;
    c.speaker_blocks = 6;
    c.embed_dim = 640;
    c.pred_hidden = 768;
    c.pred_dim = 640;
    c.joint_dim = 640;
    return c;
  }
  TSRNNT_ERR_CODE(ErrorCode::kUsage) << "unknown model preset '" << name << "'";
}

void TrainConfig::Check() const {
  model.Check();
  if (batch_size < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "batch_size must be >= 1";
  if (lr.warmup < 0) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "warmup_steps must be >= 0";
  if (steps < 1 && epochs < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "nothing to train";
  if (!(lr.peak > 0)) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "peak_lr must be positive";
}

namespace {

std::vector<std::string> SplitList(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

TrainConfig TrainConfig::FromKeyValues(const KeyValues &kv) {
  TrainConfig c;
  KeyValues model_kv = ModelPreset(kv.Get("model.preset", "toy")).ToKeyValues();
  for (const auto &[key, value] : kv.Items()) {
    if (key.rfind("model.", 0) == 0 && key != "model.preset") model_kv.Set(key.substr(6), value);
  }
  if (kv.Has("fusion")) model_kv.Set("encoder.fusion", kv.Get("fusion"));
  if (kv.Has("regime")) model_kv.Set("encoder.regime", kv.Get("regime"));
  c.model = ModelConfig::FromKeyValues(model_kv);
  for (const std::string &k : model_kv.UnusedKeys()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "unknown model key '" << k << "'";
  }
  c.train_manifests = SplitList(kv.Get("train_manifests", ""));
  c.adam.beta1 = kv.GetDouble("adam_beta1", c.adam.beta1);
  c.adam.beta2 = kv.GetDouble("adam_beta2", c.adam.beta2);
  c.adam.eps = kv.GetDouble("adam_eps", c.adam.eps);
  c.adam.grad_clip = kv.GetDouble("grad_clip", c.adam.grad_clip);
  c.lr.warmup = kv.GetInt("warmup_steps", static_cast<int32_t>(c.lr.warmup));
  c.lr.peak = kv.GetDouble("peak_lr", c.lr.peak);
  c.steps = kv.GetInt("steps", static_cast<int32_t>(c.steps));
  c.epochs = kv.GetInt("epochs", c.epochs);
  c.batch_size = kv.GetInt("batch_size", c.batch_size);
  c.seed = static_cast<uint64_t>(kv.GetInt("seed", static_cast<int32_t>(c.seed)));
  c.spec_augment = kv.GetBool("spec_augment", c.spec_augment);
  c.specaug.num_freq_masks = kv.GetInt("specaug.freq_masks", c.specaug.num_freq_masks);
  c.specaug.max_freq_width = kv.GetInt("specaug.freq_width", c.specaug.max_freq_width);
  c.specaug.num_time_masks = kv.GetInt("specaug.time_masks", c.specaug.num_time_masks);
  c.specaug.max_time_width = kv.GetInt("specaug.time_width", c.specaug.max_time_width);
  c.log_every = kv.GetInt("log_every", c.log_every);
  c.checkpoint_every = kv.GetInt("checkpoint_every", c.checkpoint_every);
  c.out_dir = kv.Get("out_dir", "");
  c.init_from = kv.Get("init_from", "");
  for (const auto &[key, value] : kv.Items()) {
    if (key.rfind("model.", 0) == 0) continue;
    static const std::vector<std::string> known = {
        "train_manifests", "fusion", "regime", "adam_beta1", "adam_beta2", "adam_eps",
        "grad_clip", "warmup_steps", "peak_lr", "steps", "epochs", "batch_size", "seed",
        "spec_augment", "specaug.freq_masks", "specaug.freq_width", "specaug.time_masks",
        "specaug.time_width", "log_every", "checkpoint_every", "out_dir", "init_from"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage) << "unknown training key '" << key << "'";
    }
  }
  c.Check();
  return c;
}

KeyValues TrainConfig::ToKeyValues() const {
  KeyValues kv;
  const KeyValues mkv = model.ToKeyValues();
  for (const auto &[key, value] : mkv.Items()) kv.Set("model." + key, value);
  std::string list;
  for (const auto &m : train_manifests) list += (list.empty() ? "" : ",") + m;
  kv.Set("train_manifests", list);
  auto num = [](double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  };
  kv.Set("adam_beta1", num(adam.beta1));
  kv.Set("adam_beta2", num(adam.beta2));
  kv.Set("adam_eps", num(adam.eps));
  kv.Set("grad_clip", num(adam.grad_clip));
  kv.Set("warmup_steps", std::to_string(lr.warmup));
  kv.Set("peak_lr", num(lr.peak));
  kv.Set("steps", std::to_string(steps));
  kv.Set("epochs", std::to_string(epochs));
  kv.Set("batch_size", std::to_string(batch_size));
  kv.Set("seed", std::to_string(seed));
  kv.Set("spec_augment", spec_augment ? "true" : "false");
  kv.Set("specaug.freq_masks", std::to_string(specaug.num_freq_masks));
  kv.Set("specaug.freq_width", std::to_string(specaug.max_freq_width));
  kv.Set("specaug.time_masks", std::to_string(specaug.num_time_masks));
  kv.Set("specaug.time_width", std::to_string(specaug.max_time_width));
  kv.Set("log_every", std::to_string(log_every));
  kv.Set("checkpoint_every", std::to_string(checkpoint_every));
  kv.Set("out_dir", out_dir);
  kv.Set("init_from", init_from);
  return kv;
}

namespace {

void Shuffle(std::vector<int32_t> *v, Rng *rng) {
  for (size_t i = v->size(); i > 1; --i) std::swap((*v)[i - 1], (*v)[rng->UniformInt(i)]);
}

}  // namespace

TrainResult Train(const TrainConfig &cfg, const Dataset &data, std::ostream *log) {
  cfg.Check();
  if (data.examples.empty()) TSRNNT_ERR_CODE(ErrorCode::kData) << "no training examples";
  auto start_time = std::chrono::steady_clock::now();
  TrainResult res;
  Checkpoint &ck = res.checkpoint;
  ck.seed = cfg.seed;
  if (!cfg.init_from.empty()) {
    Checkpoint init = LoadCheckpoint(cfg.init_from);
    ck.model = Model(cfg.model, cfg.seed);
    // Parameters shared with the initial model are copied; the config here
    // may change the regime (e.g. offline -> streaming).
    for (auto &[name, t] : ck.model.MutableParams().MutableMap()) {
      if (init.model.Params().Has(name)) {
        const Tensor &src = init.model.Params().Get(name);
        if (!src.SameShape(t)) {
          TSRNNT_ERR_CODE(ErrorCode::kShapeMismatch) << "shape mismatch for tensor " << name;
        }
        t = src;
      }
    }
    if (init.model.Params().Has("feat.mean")) {
      ck.model.SetFeatureStats(init.model.Params().Get("feat.mean"),
                               init.model.Params().Get("feat.inv_std"));
    }
  } else {
    ck.model = Model(cfg.model, cfg.seed);
  }
  if (!ck.model.Params().Has("feat.mean")) {
    Tensor mean, inv_std;
    FeatureStats(data, &mean, &inv_std);
    ck.model.SetFeatureStats(mean, inv_std);
  }
  SpecAugmentPolicy policy = cfg.specaug;
  {
    // masked cells land on the average feature value
    const Tensor &mean = ck.model.Params().Get("feat.mean");
    double m = 0.0;
    for (float v : mean.Values()) m += v;
    policy.mask_value = static_cast<float>(m / mean.NumElements());
  }
  const bool ts = ck.model.Config().TargetSpeaker();
  const int32_t n = static_cast<int32_t>(data.examples.size());
  const int64_t total_steps =
      cfg.epochs > 0 ? (static_cast<int64_t>(cfg.epochs) * n + cfg.batch_size - 1) / cfg.batch_size
                     : cfg.steps;
  Rng rng(cfg.seed ^ 0x5eed);
  Rng aug_rng = rng.Fork(7);
  std::vector<int32_t> order(n);
  for (int32_t i = 0; i < n; ++i) order[i] = i;
  Shuffle(&order, &rng);
  size_t pos = 0;
  Adam adam(cfg.adam);
  ParamSet &params = ck.model.MutableParams();
  if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);
  double window_loss = 0.0;
  int32_t window_n = 0;
  for (int64_t step = 1; step <= total_steps; ++step) {
    std::map<std::string, Tensor> grads;
    double batch_loss = 0.0;
    std::vector<std::string> ids;
    for (int32_t b = 0; b < cfg.batch_size; ++b) {
      if (pos == order.size()) {
        Shuffle(&order, &rng);
        pos = 0;
      }
      const Example &ex = data.examples[order[pos++]];
      ids.push_back(ex.record.id);
      FeatureSeq feats;
      feats.frames = ex.feats;
      if (cfg.spec_augment) feats = SpecAugment(feats, policy, &aug_rng);
      Tape tape(true);
      const Tensor *enroll = ts ? &data.Enrollment(ex.enroll_key) : nullptr;
      auto abort_step = [&](const std::string &what) {
        std::ostringstream dump;
        for (const auto &id : ids) dump << id << "\n";
        if (!cfg.out_dir.empty()) {
          std::ofstream(cfg.out_dir + "/nan_batch.txt") << "step " << step << "\n" << dump.str();
        }
        TSRNNT_ERR_CODE(ErrorCode::kNonFinite)
            << what << " at step " << step << " on utterance " << ex.record.id
            << "; batch ids: " << dump.str();
      };
      Var loss;
      double value = 0.0;
      try {
        loss = ck.model.Loss(tape, feats.frames, enroll, ex.record.transcript);
        value = loss.Value()[0];
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kNonFinite) throw;
        abort_step(e.what());
      }
      if (!std::isfinite(value)) abort_step("non-finite loss");
      batch_loss += value;
      Gradients g = tape.Backward(loss);
      for (const auto &[name, t] : params.Map()) {
        if (const Tensor *gp = g.OfParam(t)) {
          auto [it, fresh] = grads.try_emplace(name, *gp);
          if (!fresh) it->second.AddScaled(*gp);
        }
      }
    }
    const float inv = 1.0f / cfg.batch_size;
    for (auto &[name, g] : grads) {
      for (float &v : g.Values()) v *= inv;
    }
    batch_loss /= cfg.batch_size;
    res.losses.push_back(batch_loss);
    const double lr = cfg.lr.At(step);
    const double norm = adam.Step(&params, grads, lr);
    ck.step = static_cast<uint64_t>(step);
    window_loss += batch_loss;
    ++window_n;
    if (log && (step % std::max(cfg.log_every, 1) == 0 || step == total_steps)) {
      double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                  start_time).count();
      char line[200];
      std::snprintf(line, sizeof(line), "step %lld/%lld loss %.4f lr %.3g grad_norm %.3g time %.1fs",
                    static_cast<long long>(step), static_cast<long long>(total_steps),
                    window_loss / window_n, lr, norm, secs);
      *log << line << std::endl;
      window_loss = 0.0;
      window_n = 0;
    }
    if (!cfg.out_dir.empty() && cfg.checkpoint_every > 0 && step % cfg.checkpoint_every == 0) {
      SaveCheckpoint(ck, cfg.out_dir + "/step" + std::to_string(step) + ".ckpt");
    }
  }
  if (!cfg.out_dir.empty()) {
    SaveCheckpoint(ck, cfg.out_dir + "/final.ckpt");
    std::ofstream losses(cfg.out_dir + "/loss.txt");
    for (size_t i = 0; i < res.losses.size(); ++i) losses << i + 1 << " " << res.losses[i] << "\n";
    std::ofstream(cfg.out_dir + "/train.conf") << cfg.ToKeyValues().ToString();
  }
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return res;
}

TrainResult Train(const TrainConfig &cfg, std::ostream *log) {
  if (cfg.train_manifests.empty()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "train_manifests is empty";
  }
  Fbank fbank(FbankOptions{.num_mels = cfg.model.encoder.input_dim});
  Dataset data = LoadDataset(cfg.train_manifests, fbank, cfg.model.TargetSpeaker());
  return Train(cfg, data, log);
}

}  // namespace tsrnnt
