// cli/decode.cc
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

#include "cli/decode.h"

#include <cstdio>
#include <sstream>

#include "base/error.h"
#include "base/parallel.h"
#include "decoding/cer.h"
#include "streaming/benchmark.h"

namespace tsrnnt {

void CerReport::Add(UttResult u) {
  auto &b = buckets[u.snr_db];
  b.first += u.cer;
  b.second += 1;
  utts.push_back(std::move(u));
  double sum = 0.0;
  for (const UttResult &x : utts) sum += x.cer;
  average = sum / utts.size();
}

nlohmann::ordered_json CerReport::ToJson() const {
  nlohmann::ordered_json j;
  j["label"] = label;
  j["metric"] = "token error rate";
  auto &b = j["buckets"] = nlohmann::ordered_json::array();
  for (const auto &[snr, p] : buckets) {
    b.push_back({{"snr_db", snr}, {"num_utts", p.second}, {"cer", p.first / p.second}});
  }
  j["average"] = average;
  j["num_utts"] = utts.size();
  auto &u = j["utts"] = nlohmann::ordered_json::array();
  for (const UttResult &x : utts) {
    u.push_back({{"id", x.id}, {"snr_db", x.snr_db}, {"ref", x.reference},
                 {"hyp", x.hypothesis}, {"cer", x.cer}});
  }
  return j;
}

std::string CerReport::ToText() const {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof(line), "%-10s %7s %12s\n", "SNR [dB]", "#utts", "TER [%]");
  os << line;
  for (const auto &[snr, p] : buckets) {
    std::snprintf(line, sizeof(line), "%-10g %7d %12.1f\n", snr, p.second,
                  100.0 * p.first / p.second);
    os << line;
  }
  std::snprintf(line, sizeof(line), "%-10s %7zu %12.1f\n", "avg", utts.size(), 100.0 * average);
  os << line;
  return os.str();
}

std::string ResolveFusionLayer(const std::string &spec, int32_t num_blocks) {
  if (spec == "mid") return std::to_string((num_blocks + 1) / 2);
  if (spec == "all") return "1-" + std::to_string(num_blocks);
  return spec;
}

Model PrepareModel(const Model &trained, const std::string &fusion, const std::string &regime) {
  Model m = trained;
  EncoderConfig &enc = m.MutableConfig().encoder;
  if (!fusion.empty()) {
    std::string f = ResolveFusionLayer(fusion, enc.num_blocks);
    if ((f == "none") != !trained.Config().TargetSpeaker()) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage)
          << "fusion '" << fusion << "' does not fit a "
          << (trained.Config().TargetSpeaker() ? "target-speaker" : "vanilla") << " checkpoint";
    }
    enc.fusion = f;
  }
  if (!regime.empty()) {
    MaskRegime r = MaskRegime::Parse(regime);
    if (r.Streaming() != trained.Config().encoder.regime.Streaming()) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage)
          << "regime " << r.ToString() << " does not match the checkpoint's "
          << trained.Config().encoder.regime.ToString()
          << " (convolutions were trained " << (trained.Config().encoder.CausalConv() ? "causal" : "non-causal")
          << ")";
    }
    enc.regime = r;
  }
  m.Config().Check();
  return m;
}

CerReport DecodeDataset(const Model &model, const Dataset &data, const DecodeOptions &opts) {
  Model m = PrepareModel(model, opts.fusion, opts.regime);
  const MaskRegime regime = m.Config().encoder.regime;
  std::vector<UttResult> results(data.examples.size());
  ParallelFor(data.examples.size(), opts.threads, [&](int64_t i) {
    const Example &ex = data.examples[i];
    Tensor emb;
    const Tensor *pe = nullptr;
    if (m.Config().TargetSpeaker()) {
      const std::string &key = opts.enrollment == EnrollmentChoice::kTarget
                                   ? ex.enroll_key
                                   : ex.interferer_enroll_key;
      if (key.empty()) {
        TSRNNT_ERR_CODE(ErrorCode::kData) << "record " << ex.record.id << " has no "
                                          << (opts.enrollment == EnrollmentChoice::kTarget
                                                  ? "enrollment" : "interferer enrollment");
      }
      Tape tape(false);
      emb = m.SpeakerEmbedding(tape, data.Enrollment(key)).Value();
      pe = &emb;
    }
    UttResult &u = results[i];
    u.id = ex.record.id;
    u.snr_db = ex.record.snr_db;
    u.reference = ex.record.transcript;
    SearchEncoderOutput(m, OfflineEncode(m, ex.feats, pe, regime), opts.search, &u.hypothesis);
    u.cer = Cer(u.reference, u.hypothesis);
  });
  CerReport rep;
  for (auto &u : results) rep.Add(std::move(u));
  return rep;
}

FusionSweep RunFusionSweep(const Model &trained, const Dataset &data,
                           const std::vector<std::string> &layers, const DecodeOptions &opts) {
  FusionSweep sweep;
  for (const std::string &l : layers) {
    DecodeOptions o = opts;
    o.fusion = l;
    CerReport r = DecodeDataset(trained, data, o);
    r.label = l + " (" + ResolveFusionLayer(l, trained.Config().encoder.num_blocks) + ")";
    sweep.layers.push_back(l);
    sweep.reports.push_back(std::move(r));
  }
  return sweep;
}

nlohmann::ordered_json FusionSweep::ToJson() const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (size_t i = 0; i < reports.size(); ++i) {
    nlohmann::ordered_json row;
    row["fusion_layer"] = layers[i];
    row["label"] = reports[i].label;
    for (const auto &[snr, p] : reports[i].buckets) {
      row["cer_by_snr"][std::to_string(static_cast<int>(snr))] = p.first / p.second;
    }
    row["average"] = reports[i].average;
    rows.push_back(row);
  }
  return {{"metric", "token error rate"}, {"rows", rows}};
}

std::string FusionSweep::ToText() const {
  std::ostringstream os;
  if (reports.empty()) return "";
  char cell[64];
  std::snprintf(cell, sizeof(cell), "%-16s", "fusion layer l");
  os << cell;
  for (const auto &[snr, p] : reports[0].buckets) {
    std::snprintf(cell, sizeof(cell), " %7g", snr);
    os << cell;
  }
  os << "     avg   (TER %, columns are SNR dB)\n";
  for (const CerReport &r : reports) {
    std::snprintf(cell, sizeof(cell), "%-16s", r.label.c_str());
    os << cell;
    for (const auto &[snr, p] : r.buckets) {
      std::snprintf(cell, sizeof(cell), " %7.1f", 100.0 * p.first / p.second);
      os << cell;
    }
    std::snprintf(cell, sizeof(cell), " %7.1f\n", 100.0 * r.average);
    os << cell;
  }
  return os.str();
}

}  // namespace tsrnnt
