// tools/tsrnnt.cc
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

// Command-line front end: simulate, train, decode, stream-decode, benchmark,
// eval-cer, gradcheck, oracle-test. Exit status 0 ok, 1 usage, 2 data/model.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "base/error.h"
#include "base/parallel.h"
#include "cli/commands.h"
#include "cli/train.h"

using namespace tsrnnt;

namespace {

// "key=value" overrides given after the config file.
KeyValues LoadConfig(const std::string &path, const std::vector<std::string> &overrides) {
  KeyValues kv = path.empty() ? KeyValues() : KeyValues::ParseFile(path);
  for (const std::string &o : overrides) {
    size_t eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage) << "override '" << o << "' is not key=value";
    }
    kv.Set(o.substr(0, eq), o.substr(eq + 1));
  }
  return kv;
}

struct SearchFlags {
  std::string kind = "alsd";
  int32_t beam = 8;
  void Add(CLI::App *app) {
    app->add_option("--search", kind, "greedy or alsd")->capture_default_str();
    app->add_option("--beam", beam, "ALSD beam size")->capture_default_str();
  }
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Target-speaker RNN transducer toolkit"};
  app.require_subcommand(1);

  // simulate
  auto *sim = app.add_subcommand("simulate", "render the toy corpus and mixture sets");
  std::string sim_out, sim_config, snr_grid;
  std::vector<std::string> sim_set;
  bool force = false;
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->add_option("--config", sim_config, "key=value config file");
  sim->add_option("--set", sim_set, "key=value override (repeatable)");
  sim->add_option("--snr-grid", snr_grid, "evaluation SNRs, e.g. 0,5,10,15,20");
  sim->add_flag("--force", force, "overwrite a non-empty output directory");

  // train
  auto *train = app.add_subcommand("train", "train a model");
  std::string train_config, init_from, out_dir;
  std::vector<std::string> train_set;
  train->add_option("--config", train_config, "key=value config file");
  train->add_option("--set", train_set, "key=value override (repeatable)");
  train->add_option("--init-from", init_from, "start from this checkpoint");
  train->add_option("--out-dir", out_dir, "where checkpoints and logs go");

  // decode
  auto *dec = app.add_subcommand("decode", "decode a manifest and report TER per SNR");
  DecodeArgs dargs;
  SearchFlags dsearch;
  std::string enrollment = "target", sweep;
  dec->add_option("--checkpoint", dargs.checkpoint)->required();
  dec->add_option("--manifest", dargs.manifests)->required();
  dec->add_option("--regime", dargs.opts.regime, "mask regime override");
  dec->add_option("--fusion-layer", dargs.opts.fusion, "fusion override: 1, mid, all, 1-3, ...");
  dec->add_option("--fusion-sweep", sweep, "comma list of fusion layers, e.g. 1,mid,all");
  dec->add_option("--enrollment", enrollment, "target or interferer")->capture_default_str();
  dec->add_option("--json", dargs.json_out, "write the JSON report here");
  dec->add_option("--hyp-out", dargs.hyp_out, "write hypotheses here");
  dsearch.Add(dec);

  // stream-decode
  auto *sdec = app.add_subcommand("stream-decode", "decode a manifest incrementally");
  StreamDecodeArgs sargs;
  SearchFlags ssearch;
  sdec->add_option("--checkpoint", sargs.checkpoint)->required();
  sdec->add_option("--manifest", sargs.manifest)->required();
  sdec->add_option("--regime", sargs.regime);
  sdec->add_option("--push-ms", sargs.push_ms, "audio per push")->capture_default_str();
  sdec->add_option("--max-utts", sargs.max_utts);
  sdec->add_option("--hyp-out", sargs.hyp_out);
  sdec->add_flag("--check", sargs.check, "compare against the full-utterance forward");
  ssearch.Add(sdec);

  // benchmark
  auto *bench = app.add_subcommand("benchmark", "paired real-time-factor benchmark");
  BenchmarkArgs bargs;
  SearchFlags bsearch;
  bench->add_option("--ts-checkpoint", bargs.ts_checkpoint)->required();
  bench->add_option("--vanilla-checkpoint", bargs.vanilla_checkpoint)->required();
  bench->add_option("--manifest", bargs.manifest)->required();
  bench->add_option("--regime", bargs.regime);
  bench->add_option("--max-utts", bargs.max_utts);
  bench->add_option("--repeats", bargs.opts.repeats)->capture_default_str();
  bench->add_option("--json", bargs.json_out);
  bsearch.Add(bench);

  // eval-cer
  auto *evc = app.add_subcommand("eval-cer", "score a hypothesis file against a manifest");
  std::string ev_manifest, ev_hyp, ev_json;
  evc->add_option("--manifest", ev_manifest)->required();
  evc->add_option("--hyp", ev_hyp, "lines of <id><TAB><tokens>")->required();
  evc->add_option("--json", ev_json);

  // gradcheck
  auto *gc = app.add_subcommand("gradcheck", "finite-difference check of the full graph");
  int32_t gc_inputs = 10, gc_coords = 6;
  uint64_t gc_seed = 1;
  double gc_eps = 3e-3, gc_tol = 1e-3;
  gc->add_option("--inputs", gc_inputs)->capture_default_str();
  gc->add_option("--coords", gc_coords, "coordinates per parameter")->capture_default_str();
  gc->add_option("--seed", gc_seed)->capture_default_str();
  gc->add_option("--eps", gc_eps)->capture_default_str();
  gc->add_option("--tol", gc_tol)->capture_default_str();

  // oracle-test
  auto *ot = app.add_subcommand("oracle-test", "loss and search against brute force");
  int32_t ot_trials = 100;
  uint64_t ot_seed = 1;
  ot->add_option("--trials", ot_trials)->capture_default_str();
  ot->add_option("--seed", ot_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    const int32_t threads = NumThreadsFromEnv();
    if (sim->parsed()) {
      KeyValues kv = LoadConfig(sim_config, sim_set);
      if (!snr_grid.empty()) kv.Set("eval_snr_grid", snr_grid);
      RunSimulate(SimulationConfigFromKeyValues(kv), sim_out, force, std::cout);
    } else if (train->parsed()) {
      KeyValues kv = LoadConfig(train_config, train_set);
      if (!init_from.empty()) kv.Set("init_from", init_from);
      if (!out_dir.empty()) kv.Set("out_dir", out_dir);
      TrainResult r = Train(TrainConfig::FromKeyValues(kv), &std::cerr);
      std::cout << "trained " << r.checkpoint.step << " steps in " << r.seconds << " s\n";
    } else if (dec->parsed()) {
      dargs.opts.search = MakeSearchOptions(dsearch.kind, dsearch.beam);
      dargs.opts.threads = threads;
      if (enrollment == "target") {
        dargs.opts.enrollment = EnrollmentChoice::kTarget;
      } else if (enrollment == "interferer") {
        dargs.opts.enrollment = EnrollmentChoice::kInterferer;
      } else {
        TSRNNT_ERR_CODE(ErrorCode::kUsage) << "--enrollment must be target or interferer";
      }
      if (!sweep.empty()) dargs.fusion_sweep = SplitList(sweep);
      RunDecode(dargs, std::cout);
    } else if (sdec->parsed()) {
      sargs.search = MakeSearchOptions(ssearch.kind, ssearch.beam);
      RunStreamDecode(sargs, std::cout);
    } else if (bench->parsed()) {
      bargs.opts.search = MakeSearchOptions(bsearch.kind, bsearch.beam);
      RunBenchmark(bargs, std::cout);
    } else if (evc->parsed()) {
      CerReport rep = EvalCer(ev_manifest, ev_hyp);
      std::cout << rep.ToText();
      if (!ev_json.empty()) {
        std::ofstream os(ev_json);
        os << rep.ToJson().dump(2) << "\n";
      }
    } else if (gc->parsed()) {
      GradCheckReport rep = RunModelGradCheck(gc_inputs, gc_seed, gc_coords, gc_eps);
      std::cout << rep.ToText();
      if (rep.worst >= gc_tol) {
        std::cerr << "gradient check failed: " << rep.worst << " >= " << gc_tol << "\n";
        return 2;
      }
    } else if (ot->parsed()) {
      OracleTestReport rep = RunOracleTests(ot_trials, ot_seed);
      std::cout << rep.ToText();
      if (!rep.Passed(1e-5, 1e-3)) {
        std::cerr << "oracle test failed\n";
        return 2;
      }
    }
  } catch (const Error &e) {
    std::cerr << "error (" << ErrorCodeName(e.code()) << "): " << e.what() << "\n";
    return e.code() == ErrorCode::kUsage ? 1 : 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
