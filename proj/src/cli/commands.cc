// cli/commands.cc
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

#include "cli/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "base/error.h"
#include "cli/checkpoint.h"
#include "decoding/cer.h"
#include "decoding/scorer.h"
#include "decoding/search.h"
#include "frontend/wave-io.h"
#include "numerics/grad-check.h"
#include "numerics/log-math.h"
#include "transducer/rnnt-loss.h"

namespace tsrnnt {

namespace fs = std::filesystem;

std::vector<std::string> SplitList(const std::string &text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::vector<double> ParseDoubleList(const std::string &text) {
  std::vector<double> out;
  for (const std::string &s : SplitList(text)) {
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception &) {
      pos = 0;
    }
    if (pos != s.size()) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "not a number: '" << s << "'";
    out.push_back(v);
  }
  if (out.empty()) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "empty list '" << text << "'";
  return out;
}

SimulationConfig SimulationConfigFromKeyValues(const KeyValues &kv) {
  SimulationConfig c;
  ToyCorpusConfig &k = c.corpus;
  k.num_speakers = kv.GetInt("corpus.num_speakers", k.num_speakers);
  k.utts_per_speaker = kv.GetInt("corpus.utts_per_speaker", k.utts_per_speaker);
  k.vocab_size = kv.GetInt("corpus.vocab_size", k.vocab_size);
  k.min_tokens = kv.GetInt("corpus.min_tokens", k.min_tokens);
  k.max_tokens = kv.GetInt("corpus.max_tokens", k.max_tokens);
  k.min_f0_hz = kv.GetDouble("corpus.min_f0_hz", k.min_f0_hz);
  k.max_f0_hz = kv.GetDouble("corpus.max_f0_hz", k.max_f0_hz);
  k.min_formant_hz = kv.GetDouble("corpus.min_formant_hz", k.min_formant_hz);
  k.max_formant_hz = kv.GetDouble("corpus.max_formant_hz", k.max_formant_hz);
  k.formant_width = kv.GetDouble("corpus.formant_width", k.formant_width);
  k.rms_level = kv.GetDouble("corpus.rms_level", k.rms_level);
  k.seed = kv.GetInt("corpus.seed", static_cast<int32_t>(k.seed));
  c.num_dev_speakers = kv.GetInt("num_dev_speakers", c.num_dev_speakers);
  c.num_eval_speakers = kv.GetInt("num_eval_speakers", c.num_eval_speakers);
  c.num_train_single = kv.GetInt("num_train_single", c.num_train_single);
  c.num_train_mixtures = kv.GetInt("num_train_mixtures", c.num_train_mixtures);
  c.num_dev_mixtures = kv.GetInt("num_dev_mixtures", c.num_dev_mixtures);
  c.eval_per_snr = kv.GetInt("eval_per_snr", c.eval_per_snr);
  if (kv.Has("eval_snr_grid")) c.eval_snr_grid = ParseDoubleList(kv.Get("eval_snr_grid"));
  c.min_sir_db = kv.GetDouble("min_sir_db", c.min_sir_db);
  c.max_sir_db = kv.GetDouble("max_sir_db", c.max_sir_db);
  c.min_snr_db = kv.GetDouble("min_snr_db", c.min_snr_db);
  c.max_snr_db = kv.GetDouble("max_snr_db", c.max_snr_db);
  c.overlap = kv.GetDouble("overlap", c.overlap);
  c.min_formant_separation = kv.GetDouble("min_formant_separation", c.min_formant_separation);
  c.enroll_utts = kv.GetInt("enroll_utts", c.enroll_utts);
  c.enrollments_per_speaker = kv.GetInt("enrollments_per_speaker", c.enrollments_per_speaker);
  c.seed = kv.GetInt("seed", static_cast<int32_t>(c.seed));
  std::vector<std::string> unused = kv.UnusedKeys();
  if (!unused.empty()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "unknown simulation key '" << unused[0] << "'";
  }
  if (c.eval_per_snr < 1 || c.num_train_single < 0 || c.num_train_mixtures < 0 ||
      c.num_dev_mixtures < 0) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "set sizes must be non-negative (eval_per_snr >= 1)";
  }
  c.corpus.Check();
  return c;
}

namespace {

std::string Range(double lo, double hi) {
  char buf[64];
  if (lo == hi) {
    std::snprintf(buf, sizeof(buf), "%g", lo);
  } else {
    std::snprintf(buf, sizeof(buf), "%g - %g", lo, hi);
  }
  return buf;
}

std::string Grid(const std::vector<double> &g) {
  std::ostringstream os;
  for (size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i];
  return os.str();
}

}  // namespace

std::string SimulationSummary(const SimulatedSets &sets, const SimulationConfig &c) {
  std::ostringstream os;
  char line[256];
  const char *fmt = "%-4s %-28s %-22s %-10s %-12s %-20s %s\n";
  std::snprintf(line, sizeof(line), fmt, "", "dataset", "mixture type", "SIR [dB]", "SNR [dB]",
                "#speakers (tr/dev)", "#mixtures (tr/dev)");
  os << line;
  std::string spk = std::to_string(sets.train_speakers.size()) + " / " +
                    std::to_string(sets.dev_speakers.size());
  std::string snr = Range(c.min_snr_db, c.max_snr_db);
  std::string sir = Range(c.min_sir_db, c.max_sir_db);
  std::snprintf(line, sizeof(line), fmt, "(a)", "training data for ASR", "1 speaker and noise",
                "-", snr.c_str(), spk.c_str(),
                (std::to_string(sets.train_a.size()) + " / -").c_str());
  os << line;
  std::snprintf(line, sizeof(line), fmt, "(b)", "training data for TS-RNNT",
                "2 speakers and noise", sir.c_str(), snr.c_str(), spk.c_str(),
                (std::to_string(sets.train_b.size()) + " / " + std::to_string(sets.dev.size()))
                    .c_str());
  os << line;
  std::string eval_n = std::to_string(sets.eval.size()) + " (" +
                       std::to_string(c.eval_per_snr) + " per SNR)";
  std::snprintf(line, sizeof(line), fmt, "(c)", "evaluation data", "2 speakers and noise",
                sir.c_str(), Grid(c.eval_snr_grid).c_str(),
                std::to_string(sets.eval_speakers.size()).c_str(), eval_n.c_str());
  os << line;
  return os.str();
}

SimulatedSets RunSimulate(const SimulationConfig &config, const std::string &out_dir,
                          bool force, std::ostream &out) {
  if (out_dir.empty()) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "no output directory";
  if (fs::exists(out_dir)) {
    if (!fs::is_directory(out_dir)) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage) << out_dir << " exists and is not a directory";
    }
    if (!fs::is_empty(out_dir)) {
      if (!force) {
        TSRNNT_ERR_CODE(ErrorCode::kUsage)
            << out_dir << " is not empty (use --force to overwrite)";
      }
      fs::remove_all(out_dir);
    }
  }
  SimulatedSets sets = Simulate(config, out_dir);
  out << SimulationSummary(sets, config);
  return sets;
}

SearchOptions MakeSearchOptions(const std::string &kind, int32_t beam) {
  SearchOptions s;
  if (kind == "greedy") {
    s.kind = SearchKind::kGreedy;
  } else if (kind == "alsd") {
    s.kind = SearchKind::kAlsd;
  } else {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "unknown search '" << kind << "' (greedy|alsd)";
  }
  if (beam < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "beam must be >= 1";
  s.alsd.beam = beam;
  return s;
}

namespace {

void WriteJson(const nlohmann::ordered_json &j, const std::string &path, std::ostream &out) {
  if (path.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(path);
  if (!os) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot write " << path;
  os << j.dump(2) << "\n";
}

std::string Tokens(const std::vector<int32_t> &t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << t[i];
  return os.str();
}

}  // namespace

void RunDecode(const DecodeArgs &args, std::ostream &out) {
  if (args.manifests.empty()) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "no manifest";
  Checkpoint ckpt = LoadCheckpoint(args.checkpoint);
  Fbank fbank;
  Dataset data = LoadDataset(args.manifests, fbank, ckpt.model.Config().TargetSpeaker());
  if (data.examples.empty()) TSRNNT_ERR_CODE(ErrorCode::kData) << "manifest is empty";
  if (!args.fusion_sweep.empty()) {
    FusionSweep sweep = RunFusionSweep(ckpt.model, data, args.fusion_sweep, args.opts);
    out << sweep.ToText();
    WriteJson(sweep.ToJson(), args.json_out, out);
    return;
  }
  CerReport rep = DecodeDataset(ckpt.model, data, args.opts);
  rep.label = args.checkpoint;
  out << rep.ToText();
  if (!args.hyp_out.empty()) WriteHypotheses(rep, args.hyp_out);
  WriteJson(rep.ToJson(), args.json_out, out);
}

void RunStreamDecode(const StreamDecodeArgs &args, std::ostream &out) {
  Checkpoint ckpt = LoadCheckpoint(args.checkpoint);
  Model model = PrepareModel(ckpt.model, "", args.regime);
  const MaskRegime regime = model.Config().encoder.regime;
  if (!regime.Streaming()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "stream-decode needs a causal or chunked regime";
  }
  Fbank fbank;
  Manifest manifest = ReadManifest(args.manifest);
  if (manifest.empty()) TSRNNT_ERR_CODE(ErrorCode::kData) << "manifest is empty";
  const int64_t push = std::max<int64_t>(1, std::llround(args.push_ms * 16.0));
  CerReport rep;
  rep.label = args.checkpoint + " streaming " + regime.ToString();
  double worst = 0.0;
  int32_t n = 0;
  for (const ManifestRecord &rec : manifest) {
    if (args.max_utts > 0 && n++ >= args.max_utts) break;
    Waveform wave = ReadWave(ResolvePath(args.manifest, rec.mixture_path));
    Tensor emb;
    const Tensor *pe = nullptr;
    if (model.Config().TargetSpeaker()) {
      if (rec.enroll_path.empty()) {
        TSRNNT_ERR_CODE(ErrorCode::kData) << "record " << rec.id << " has no enrollment";
      }
      emb = EnrollmentEmbedding(model, fbank, ReadWave(ResolvePath(args.manifest, rec.enroll_path)));
      pe = &emb;
    }
    out << rec.id << ":";
    SessionHook hook = [&](Session *s, int32_t) {
      out << " [" << Tokens(s->Emitted()) << "]";
    };
    UttResult u;
    u.id = rec.id;
    u.snr_db = rec.snr_db;
    u.reference = rec.transcript;
    if (args.check) {
      EquivalenceResult eq =
          StreamingEquivalenceCheck(model, wave, pe, regime, args.search, push, hook);
      worst = std::max(worst, eq.max_abs_dev);
      if (!eq.tokens_equal || eq.max_abs_dev > 1e-4) {
        out << "\n";
        TSRNNT_ERR_CODE(ErrorCode::kData)
            << rec.id << ": streaming deviates from the full-utterance forward (max abs "
            << eq.max_abs_dev << ", tokens " << (eq.tokens_equal ? "equal" : "differ") << ")";
      }
      u.hypothesis = eq.streaming_tokens;
    } else {
      u.hypothesis = StreamUtterance(model, pe, regime, wave, args.search, push, hook).tokens;
    }
    u.cer = Cer(u.reference, u.hypothesis);
    out << " -> " << Tokens(u.hypothesis) << "\n";
    rep.Add(std::move(u));
  }
  out << rep.ToText();
  if (args.check) out << "max |streaming - full| over encoder outputs: " << worst << "\n";
  if (!args.hyp_out.empty()) WriteHypotheses(rep, args.hyp_out);
}

PairedRtfReport RunBenchmark(const BenchmarkArgs &args, std::ostream &out) {
  Checkpoint ts = LoadCheckpoint(args.ts_checkpoint);
  Checkpoint van = LoadCheckpoint(args.vanilla_checkpoint);
  if (!ts.model.Config().TargetSpeaker()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << args.ts_checkpoint << " is not a target-speaker model";
  }
  Model a = PrepareModel(van.model, "", args.regime);
  Model b = PrepareModel(ts.model, "", args.regime);
  Manifest manifest = ReadManifest(args.manifest);
  std::vector<BenchmarkItem> items;
  for (const ManifestRecord &rec : manifest) {
    if (args.max_utts > 0 && static_cast<int32_t>(items.size()) >= args.max_utts) break;
    BenchmarkItem it;
    it.id = rec.id;
    it.audio = ReadWave(ResolvePath(args.manifest, rec.mixture_path));
    if (rec.enroll_path.empty()) {
      TSRNNT_ERR_CODE(ErrorCode::kData) << "record " << rec.id << " has no enrollment";
    }
    it.enrollment = ReadWave(ResolvePath(args.manifest, rec.enroll_path));
    items.push_back(std::move(it));
  }
  PairedRtfReport rep = RtfBenchmark(a, "RNNT", b, "TS-RNNT", items,
                                     b.Config().encoder.regime, args.opts);
  out << rep.ToText();
  if (!args.json_out.empty()) WriteJson(rep.ToJson(), args.json_out, out);
  return rep;
}

void WriteHypotheses(const CerReport &report, const std::string &path) {
  std::ofstream os(path);
  if (!os) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot write " << path;
  for (const UttResult &u : report.utts) os << u.id << "\t" << Tokens(u.hypothesis) << "\n";
}

std::map<std::string, std::vector<int32_t>> ReadHypotheses(const std::string &path) {
  std::ifstream is(path);
  if (!is) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot read " << path;
  std::map<std::string, std::vector<int32_t>> out;
  std::string line;
  int32_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    std::string id = line.substr(0, tab);
    std::vector<int32_t> toks;
    if (tab != std::string::npos) {
      std::istringstream ts(line.substr(tab + 1));
      std::string w;
      while (ts >> w) {
        size_t pos = 0;
        int v = -1;
        try {
          v = std::stoi(w, &pos);
        } catch (const std::exception &) {
          pos = 0;
        }
        if (pos != w.size() || v < 1) {
          TSRNNT_ERR_CODE(ErrorCode::kData) << path << ":" << lineno << ": bad token '" << w << "'";
        }
        toks.push_back(v);
      }
    }
    if (!out.emplace(id, std::move(toks)).second) {
      TSRNNT_ERR_CODE(ErrorCode::kData) << path << ": duplicate id " << id;
    }
  }
  return out;
}

CerReport EvalCer(const std::string &manifest, const std::string &hyp_path) {
  auto hyps = ReadHypotheses(hyp_path);
  CerReport rep;
  rep.label = hyp_path;
  for (const ManifestRecord &rec : ReadManifest(manifest)) {
    auto it = hyps.find(rec.id);
    if (it == hyps.end()) TSRNNT_ERR_CODE(ErrorCode::kData) << "no hypothesis for " << rec.id;
    UttResult u;
    u.id = rec.id;
    u.snr_db = rec.snr_db;
    u.reference = rec.transcript;
    u.hypothesis = it->second;
    u.cer = Cer(u.reference, u.hypothesis);
    rep.Add(std::move(u));
  }
  if (rep.utts.empty()) TSRNNT_ERR_CODE(ErrorCode::kData) << "manifest is empty";
  return rep;
}

// ---- oracle-test

namespace {

Tensor NormalizedLattice(int32_t rows, int32_t K, Rng *rng) {
  Tensor lat = Tensor::Matrix(rows, K);
  std::vector<double> z(K);
  for (int32_t r = 0; r < rows; ++r) {
    for (auto &v : z) v = 2.0 * rng->Normal();
    double lse = LogSumExp(std::span<const double>(z));
    for (int32_t k = 0; k < K; ++k) lat(r, k) = static_cast<float>(z[k] - lse);
  }
  return lat;
}

// Enumerates alignments as bitmasks over T+U-1 free slots (the last symbol is
// always blank): bit set = label.
double AlignmentSum(const Tensor &lat, const std::vector<int32_t> &y, int32_t T) {
  const int32_t U = static_cast<int32_t>(y.size());
  const int32_t slots = T - 1 + U;
  std::vector<double> terms;
  for (uint32_t mask = 0; mask < (1u << slots); ++mask) {
    if (__builtin_popcount(mask) != U) continue;
    int32_t t = 0, u = 0;
    double lp = 0.0;
    for (int32_t s = 0; s < slots; ++s) {
      const int32_t row = t * (U + 1) + u;
      if (mask >> s & 1) {
        lp += lat(row, y[u++]);
      } else {
        lp += lat(row, 0);
        ++t;
      }
    }
    lp += lat(t * (U + 1) + u, 0);
    terms.push_back(lp);
  }
  return LogSumExp(std::span<const double>(terms));
}

class HashScorer : public TransducerScorer {
 public:
  HashScorer(int32_t T, int32_t K, uint64_t salt) : T_(T), K_(K), salt_(salt) {}
  int32_t NumClasses() const override { return K_; }
  int32_t NumFrames() const override { return T_; }
  void LogProbs(int32_t t, std::span<const int32_t> prefix, std::vector<double> *out) override {
    uint64_t h = salt_ ^ (static_cast<uint64_t>(t) * 0x9E3779B97F4A7C15ULL);
    for (int32_t p : prefix) h = (h ^ static_cast<uint64_t>(p + 1)) * 0x100000001B3ULL;
    Rng rng(h);
    std::vector<float> z(K_);
    for (auto &v : z) v = static_cast<float>(2.0 * rng.Normal());
    float lse = LogSumExp(std::span<const float>(z));
    out->resize(K_);
    for (int32_t k = 0; k < K_; ++k) (*out)[k] = z[k] - lse;
  }

 private:
  int32_t T_, K_;
  uint64_t salt_;
};

}  // namespace

bool OracleTestReport::Passed(double loss_tol, double grad_tol) const {
  return max_loss_dev <= loss_tol && max_grad_rel_err <= grad_tol &&
         search_agree == search_trials;
}

std::string OracleTestReport::ToText() const {
  std::ostringstream os;
  os << "rnnt loss: " << loss_trials << " lattices, max |dp - alignment sum| " << max_loss_dev
     << ", max grad rel err " << max_grad_rel_err << "\n";
  os << "alsd: " << search_agree << "/" << search_trials
     << " top-1 equal to exhaustive enumeration\n";
  return os.str();
}

OracleTestReport RunOracleTests(int32_t trials, uint64_t seed) {
  OracleTestReport rep;
  Rng rng(seed);
  RnntLossOptions raw;
  raw.check_normalized = false;
  for (int32_t i = 0; i < trials; ++i) {
    const int32_t T = rng.UniformInt(1, 4), U = rng.UniformInt(0, 4), K = rng.UniformInt(2, 4);
    Tensor lat = NormalizedLattice(T * (U + 1), K, &rng);
    std::vector<int32_t> y(U);
    for (auto &v : y) v = static_cast<int32_t>(rng.UniformInt(1, K - 1));
    RnntLossResult r = ComputeRnntLoss(lat, y, T);
    rep.max_loss_dev = std::max(rep.max_loss_dev, std::abs(r.loss + AlignmentSum(lat, y, T)));
    for (int64_t j = 0; j < lat.NumElements(); ++j) {
      Tensor p = lat, m = lat;
      p[j] += 1e-3f;
      m[j] -= 1e-3f;
      double fd = (ComputeRnntLoss(p, y, T, raw).loss - ComputeRnntLoss(m, y, T, raw).loss) /
                  (double(p[j]) - double(m[j]));
      double g = r.grad[j];
      rep.max_grad_rel_err =
          std::max(rep.max_grad_rel_err, std::abs(g - fd) / std::max(1.0, std::abs(g)));
    }
    ++rep.loss_trials;

    const int32_t st = rng.UniformInt(1, 3), sk = rng.UniformInt(2, 3);
    const int32_t u_max = 2 * st;
    HashScorer scorer(st, sk, rng.NextU64());
    NBest oracle = ExhaustiveOracle(&scorer, u_max);
    AlsdOptions opts;
    opts.beam = 1 << 16;
    opts.u_max = u_max;
    NBest alsd = AlsdBeamSearch(&scorer, opts);
    ++rep.search_trials;
    if (!alsd.empty() && !oracle.empty() && alsd[0].tokens == oracle[0].tokens) {
      ++rep.search_agree;
    }
  }
  return rep;
}

// ---- gradcheck

std::string GradCheckReport::ToText() const {
  std::ostringstream os;
  for (size_t i = 0; i < worst_per_input.size(); ++i) {
    os << "input " << i << ": max rel err " << worst_per_input[i] << "\n";
  }
  os << "worst " << worst << " (" << worst_param << ")\n";
  return os.str();
}

GradCheckReport RunModelGradCheck(int32_t inputs, uint64_t seed, int32_t coords_per_param,
                                  double eps) {
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
  GradCheckReport rep;
  Rng rng(seed);
  for (int32_t i = 0; i < inputs; ++i) {
    Model m(c, rng.NextU64());
    const int32_t frames = rng.UniformInt(24, 40);
    Tensor feats = Tensor::RandomNormal({frames, 16}, 1.0f, &rng);
    Tensor enroll = Tensor::RandomNormal({static_cast<int32_t>(rng.UniformInt(20, 32)), 16},
                                         1.0f, &rng);
    std::vector<int32_t> y(rng.UniformInt(1, 4));
    for (auto &v : y) v = static_cast<int32_t>(rng.UniformInt(1, c.vocab_size));
    auto loss = [&](Tape &tape) { return m.Loss(tape, feats, &enroll, y); };
    GradCheckOptions opts;
    opts.eps = eps;
    opts.max_coordinates = coords_per_param;
    opts.seed = rng.NextU64();
    double worst = 0.0;
    for (auto &[name, t] : m.MutableParams().MutableMap()) {
      if (name.rfind("feat.", 0) == 0) continue;
      double err = GradCheckParam(loss, &t, opts);
      if (err > rep.worst) {
        rep.worst = err;
        rep.worst_param = name;
      }
      worst = std::max(worst, err);
    }
    rep.worst_per_input.push_back(worst);
  }
  return rep;
}

}  // namespace tsrnnt
