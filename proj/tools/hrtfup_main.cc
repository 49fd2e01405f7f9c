// Copyright 2026 The hrtfup Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hrtfup command line: data preparation, training, interpolation, sweeps.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hrtfup/dataset.h"
#include "hrtfup/error.h"
#include "hrtfup/eval.h"
#include "hrtfup/interpolator.h"
#include "hrtfup/trainer.h"

namespace hrtfup {
namespace {

namespace fs = std::filesystem;

struct DataOptions {
  std::string data;
  std::string splits;
  std::string split = "test";
};

void AddDataOptions(CLI::App* cmd, DataOptions& o, bool with_split) {
  cmd->add_option("--data,--bundle", o.data, "HRIR bundle (.hrirb) or prepared set (.hrtfs)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--splits", o.splits, "directory with train.txt, val.txt, test.txt");
  if (with_split) {
    cmd->add_option("--split", o.split, "subjects to use")
        ->check(CLI::IsMember({"train", "val", "test", "all"}));
  }
}

SplitSpec SplitsFor(const HrtfSet& set, const std::string& dir) {
  return dir.empty() ? DefaultSplit(set.subjects) : ReadSplits(dir);
}

HrtfSet LoadSplit(const DataOptions& o) {
  HrtfSet set = LoadHrtfSet(o.data);
  if (o.split == "all") return set;
  const SplitSpec split = SplitsFor(set, o.splits);
  const auto& ids = o.split == "train" ? split.train : o.split == "val" ? split.val : split.test;
  return set.SelectSubjects(ids);
}

struct MethodOptions {
  std::vector<std::string> methods = {"RP6U"};
  std::string checkpoint;
  double lambda = 1e-6;
  int n_max = 19;
  bool balanced = false;
  bool no_truncation = false;
};

void AddMethodOptions(CLI::App* cmd, MethodOptions& o) {
  cmd->add_option("--method", o.methods,
                  "RP6U, RP6B, RP7U, RP7B, rlr, autoencoder or passthrough")
      ->delimiter(',');
  cmd->add_option("--checkpoint", o.checkpoint, "trained model, for autoencoder");
  cmd->add_option("--lambda", o.lambda, "ridge weight for --method rlr");
  cmd->add_option("--nmax", o.n_max, "maximum order for --method rlr");
  cmd->add_flag("--balanced", o.balanced, "rlr: order sqrt(B') - 1");
  cmd->add_flag("--no-truncation", o.no_truncation, "rlr: constant order at every frequency");
}

std::vector<std::unique_ptr<Interpolator>> MakeMethods(const MethodOptions& o) {
  std::vector<std::unique_ptr<Interpolator>> out;
  for (const std::string& m : o.methods) {
    if (m == "rlr") {
      rlr::RlrConfig cfg;
      cfg.lambda = o.lambda;
      cfg.n_max = o.n_max;
      cfg.frequency_dependent_truncation = !o.no_truncation;
      cfg.Validate();
      out.push_back(std::make_unique<RlrInterpolator>("rlr", cfg, o.balanced));
      continue;
    }
    eval::ExperimentSpec spec;
    spec.methods = {m};
    if (!o.checkpoint.empty()) spec.checkpoint = o.checkpoint;
    for (auto& i : eval::MakeInterpolators(spec)) out.push_back(std::move(i));
  }
  return out;
}

std::vector<const Interpolator*> Pointers(const std::vector<std::unique_ptr<Interpolator>>& owned) {
  std::vector<const Interpolator*> out;
  for (const auto& m : owned) out.push_back(m.get());
  return out;
}

void WriteText(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw Error(ErrorCode::kIoError, "cannot write " + path);
}

// ---- synth

struct SynthOptions {
  std::string out;
  std::size_t subjects = 10;
  std::size_t positions = 440;
  int order = 6;
  std::uint64_t seed = 1;
  bool as_set = false;
};

void RunSynth(const SynthOptions& o) {
  SyntheticSpec spec;
  spec.subjects = o.subjects;
  spec.positions = o.positions;
  spec.bins = kNumBins;
  spec.bin_spacing_hz = kTrainingSampleRate / kFftLength;
  spec.field_order = o.order;
  spec.seed = o.seed;
  if (o.as_set) {
    WriteHrtfSet(MakeSyntheticHrtfSet(spec), o.out);
  } else {
    WriteBundle(MakeSyntheticBundle(spec), o.out);
  }
  std::printf("wrote %zu subjects x %zu positions to %s\n", o.subjects, o.positions, o.out.c_str());
}

// ---- prepare

struct PrepareOptions {
  std::string bundle;
  std::string out;
  std::string splits;
};

void RunPrepare(const PrepareOptions& o) {
  const HrtfSet set = LoadHrtfSet(o.bundle);
  WriteHrtfSet(set, o.out);
  std::printf("wrote %s: %zu subjects, %zu positions, %zu bins\n", o.out.c_str(), set.num_subjects(),
              set.num_positions(), set.num_bins());
  if (!o.splits.empty()) {
    const SplitSpec split = DefaultSplit(set.subjects);
    WriteSplits(split, o.splits);
    std::printf("wrote splits to %s: %zu train, %zu val, %zu test\n", o.splits.c_str(), split.train.size(),
                split.val.size(), split.test.size());
  }
}

// ---- train

struct TrainOptions {
  DataOptions data;
  std::string checkpoint;
  std::string resume;
  std::string log;
  train::TrainConfig cfg;
  ae::ModelConfig model;
};

void RunTrain(TrainOptions& o) {
  const HrtfSet all = LoadHrtfSet(o.data.data);
  const SplitSpec split = SplitsFor(all, o.data.splits);
  const HrtfSet train_set = all.SelectSubjects(split.train);
  const HrtfSet val_set = all.SelectSubjects(split.val);
  o.model.io_dim = kNumChannels * all.num_bins();
  o.cfg.checkpoint_path = o.checkpoint;
  if (!o.resume.empty()) o.cfg.resume_from = o.resume;
  o.cfg.on_epoch = [](const train::EpochLog& e) {
    std::printf("epoch %d  lsd %.4f  cosdist %.4f  total %.4f  val_lsd %.4f\n", e.epoch, e.lsd, e.cos_dist,
                e.total, e.val_lsd);
    std::fflush(stdout);
  };
  const train::TrainResult r = train::Train(train_set, val_set, o.model, o.cfg);
  const train::EpochLog& best = r.log.best();
  std::printf("best epoch %d, val LSD %.4f dB; checkpoint %s\n", best.epoch, best.val_lsd, o.checkpoint.c_str());
  if (!o.log.empty()) WriteText(r.log.ToCsv(), o.log);
}

// ---- interp

struct InterpOptions {
  DataOptions data;
  MethodOptions method;
  std::size_t b_prime = 100;
  std::string designs = DefaultDesignDir().string();
  std::string out;
};

void RunInterp(const InterpOptions& o) {
  const HrtfSet set = LoadSplit(o.data);
  const auto owned = MakeMethods(o.method);
  if (owned.size() != 1) throw Error(ErrorCode::kInvalidArgument, "interp takes exactly one --method");
  const Interpolator& m = *owned.front();
  const std::vector<std::size_t> measured = TdesignSubsample(set.positions, o.b_prime, o.designs);
  std::vector<std::size_t> targets(set.num_positions());
  for (std::size_t i = 0; i < targets.size(); ++i) targets[i] = i;
  const LogMagnitudes est = m.Interpolate(set, measured, targets);
  const std::vector<double> per_subject = LsdPerSubject(est, set.log_magnitudes);
  for (std::size_t s = 0; s < set.num_subjects(); ++s) {
    std::printf("%s  %s  B'=%zu  LSD %.4f dB\n", m.Name().c_str(), set.subjects[s].c_str(), o.b_prime,
                per_subject[s]);
  }
  std::printf("%s  mean  B'=%zu  LSD %.4f dB\n", m.Name().c_str(), o.b_prime,
              Lsd(est, set.log_magnitudes));
  if (!o.out.empty()) {
    std::ostringstream csv;
    csv << "subject,position,channel,frequency_hz,log10_magnitude\n";
    csv.precision(17);
    for (std::size_t s = 0; s < est.subjects(); ++s) {
      for (std::size_t b = 0; b < est.positions(); ++b) {
        for (std::size_t ch = 0; ch < est.channels(); ++ch) {
          for (std::size_t l = 0; l < est.bins(); ++l) {
            csv << set.subjects[s] << ',' << b << ',' << ch << ',' << set.Frequency(l) << ','
                << est(s, b, ch, l) << '\n';
          }
        }
      }
    }
    WriteText(csv.str(), o.out);
  }
}

// ---- sweep

struct SweepOptions {
  DataOptions data;
  std::string config;
  std::vector<std::string> methods;
  std::vector<std::size_t> b_primes;
  std::string checkpoint;
  std::string designs;
  std::string out = "sweep";
};

void RunSweep(const SweepOptions& o) {
  eval::ExperimentSpec spec;
  if (!o.config.empty()) {
    std::ifstream f(o.config);
    if (!f) throw Error(ErrorCode::kIoError, "cannot read " + o.config);
    std::stringstream text;
    text << f.rdbuf();
    spec = eval::ExperimentSpec::Parse(text.str());
  }
  if (!o.methods.empty()) spec.methods = o.methods;
  if (!o.b_primes.empty()) spec.b_primes = o.b_primes;
  if (!o.checkpoint.empty()) spec.checkpoint = o.checkpoint;
  if (!o.designs.empty()) spec.design_dir = o.designs;
  if (!spec.out) spec.out = o.out;
  spec.Validate();

  const HrtfSet test = LoadSplit(o.data);
  const auto owned = eval::MakeInterpolators(spec);
  const auto methods = Pointers(owned);
  const eval::ResultTable table = eval::RunExperiment(methods, test, spec.b_primes, spec.design_dir);
  const std::string prefix = spec.out->string();
  eval::ExportCsv(table, prefix + ".csv");
  eval::ExportPlotdata(table, prefix + ".plotdata");
  WriteText(spec.ToString(), prefix + ".cfg");
  std::cout << eval::ToPlotdata(table);
  for (const eval::ResultRow& r : table.rows) {
    if (!r.error.empty()) std::fprintf(stderr, "%s B'=%zu failed: %s\n", r.method.c_str(), r.b_prime, r.error.c_str());
  }
  std::printf("wrote %s.csv, %s.plotdata, %s.cfg\n", prefix.c_str(), prefix.c_str(), prefix.c_str());
}

// ---- inspect

struct InspectOptions {
  DataOptions data;
  MethodOptions method;
  std::string subject;
  std::size_t position = 0;
  std::size_t channel = 0;
  std::size_t b_prime = 25;
  std::string designs = DefaultDesignDir().string();
  std::string out;
};

void RunInspect(const InspectOptions& o) {
  const HrtfSet set = LoadSplit(o.data);
  std::size_t s = 0;
  if (!o.subject.empty()) {
    const auto it = std::find(set.subjects.begin(), set.subjects.end(), o.subject);
    if (it == set.subjects.end()) throw Error(ErrorCode::kInvalidArgument, "unknown subject " + o.subject);
    s = static_cast<std::size_t>(it - set.subjects.begin());
  }
  const auto owned = MakeMethods(o.method);
  WriteText(eval::InspectResponse(Pointers(owned), set, s, o.position, o.channel, o.b_prime, o.designs), o.out);
}

int Main(int argc, char** argv) {
  CLI::App app{"HRTF spatial upsampling"};
  app.require_subcommand(1);

  SynthOptions synth;
  CLI::App* c_synth = app.add_subcommand("synth", "write a synthetic bundle or prepared set");
  c_synth->add_option("--out", synth.out, "output file")->required();
  c_synth->add_option("--subjects", synth.subjects, "number of subjects");
  c_synth->add_option("--positions", synth.positions, "grid size");
  c_synth->add_option("--order", synth.order, "order of the random fields");
  c_synth->add_option("--seed", synth.seed, "random seed");
  c_synth->add_flag("--set", synth.as_set, "write a prepared set instead of an HRIR bundle");

  PrepareOptions prepare;
  CLI::App* c_prepare = app.add_subcommand("prepare", "convert an HRIR bundle to a prepared HRTF set");
  c_prepare->add_option("--bundle", prepare.bundle, "input bundle")->required()->check(CLI::ExistingFile);
  c_prepare->add_option("--out", prepare.out, "output set file")->required();
  c_prepare->add_option("--splits", prepare.splits, "also write the default split to this directory");

  TrainOptions tr;
  CLI::App* c_train = app.add_subcommand("train", "train the conditioned autoencoder");
  AddDataOptions(c_train, tr.data, false);
  c_train->add_option("--checkpoint", tr.checkpoint, "output checkpoint")->required();
  c_train->add_option("--resume", tr.resume, "continue from this checkpoint")->check(CLI::ExistingFile);
  c_train->add_option("--log", tr.log, "write the training log CSV here");
  c_train->add_option("--epochs", tr.cfg.epochs, "number of epochs");
  c_train->add_option("--lr", tr.cfg.lr, "Adam learning rate");
  c_train->add_option("--alpha", tr.cfg.alpha, "weight of the latent CosDist term");
  c_train->add_option("--batch", tr.cfg.batch_subjects, "subjects per batch");
  c_train->add_option("--seed", tr.cfg.seed, "random seed");
  c_train->add_option("--hidden", tr.model.hidden_dim, "hidden width");
  c_train->add_option("--latent", tr.model.latent_dim, "latent width");
  c_train->add_option("--generator-hidden", tr.model.generator_hidden, "generator hidden width");

  InterpOptions interp;
  CLI::App* c_interp = app.add_subcommand("interp", "upsample from a t-design subset and score it");
  AddDataOptions(c_interp, interp.data, true);
  AddMethodOptions(c_interp, interp.method);
  c_interp->add_option("--bprime", interp.b_prime, "number of measured positions (perfect square)");
  c_interp->add_option("--designs", interp.designs, "t-design directory");
  c_interp->add_option("--out", interp.out, "write estimated log10 magnitudes as CSV");

  SweepOptions sweep;
  CLI::App* c_sweep = app.add_subcommand("sweep", "LSD over methods and B'");
  AddDataOptions(c_sweep, sweep.data, true);
  c_sweep->add_option("--config", sweep.config, "experiment file (key = value)")->check(CLI::ExistingFile);
  c_sweep->add_option("--method", sweep.methods, "method labels")->delimiter(',');
  c_sweep->add_option("--bprime", sweep.b_primes, "B' values")->delimiter(',');
  c_sweep->add_option("--checkpoint", sweep.checkpoint, "trained model, for autoencoder");
  c_sweep->add_option("--designs", sweep.designs, "t-design directory");
  c_sweep->add_option("--out", sweep.out, "output prefix");

  InspectOptions inspect;
  CLI::App* c_inspect = app.add_subcommand("inspect", "magnitude responses at one position");
  AddDataOptions(c_inspect, inspect.data, true);
  AddMethodOptions(c_inspect, inspect.method);
  c_inspect->add_option("--subject", inspect.subject, "subject ID (default: first)");
  c_inspect->add_option("--position", inspect.position, "grid index");
  c_inspect->add_option("--channel", inspect.channel, "0 left, 1 right");
  c_inspect->add_option("--bprime", inspect.b_prime, "number of measured positions");
  c_inspect->add_option("--designs", inspect.designs, "t-design directory");
  c_inspect->add_option("--out", inspect.out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_synth) RunSynth(synth);
    if (*c_prepare) RunPrepare(prepare);
    if (*c_train) RunTrain(tr);
    if (*c_interp) RunInterp(interp);
    if (*c_sweep) RunSweep(sweep);
    if (*c_inspect) RunInspect(inspect);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "hrtfup: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace hrtfup

int main(int argc, char** argv) { return hrtfup::Main(argc, argv); }
