// Copyright 2026 The ppxai Authors.
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

// ppxai: command-line driver for the privacy auditing pipeline.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "ppxai/attack.h"
#include "ppxai/copula.h"
#include "ppxai/csv.h"
#include "ppxai/dataset_io.h"
#include "ppxai/dp_sgd.h"
#include "ppxai/experiment.h"
#include "ppxai/explainers.h"
#include "ppxai/fixtures.h"
#include "ppxai/mlp.h"
#include "ppxai/noise_defense.h"
#include "ppxai/rdp_accountant.h"
#include "ppxai/report.h"
#include "ppxai/xai_metrics.h"

namespace fs = std::filesystem;

namespace ppxai {
namespace {

nlohmann::json ReadJson(const fs::path& path) {
  try {
    return nlohmann::json::parse(csv::ReadTextFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
}

void WriteJson(const fs::path& path, const nlohmann::json& j) { csv::WriteTextFile(path, j.dump(2) + "\n"); }

struct PrepArgs {
  std::string dataset_config;
  std::string fixture;
  std::string input;
  std::size_t rows = 2000;
  std::uint64_t simulate_seed = 0;
  std::uint64_t seed = 0;
  std::size_t max_rows = 0;
  std::string out;
};

int Prep(const PrepArgs& a) {
  DatasetConfig d;
  if (!a.dataset_config.empty()) {
    d = ParseDatasetConfig(ReadJson(a.dataset_config), fs::path(a.dataset_config).parent_path());
  } else {
    Require(!a.fixture.empty(), "prep needs --dataset-config or --fixture");
    nlohmann::json j = {{"fixture", a.fixture}, {"simulate_rows", a.rows}, {"simulate_seed", a.simulate_seed}};
    if (!a.input.empty()) j["path"] = fs::absolute(a.input).string();
    d = ParseDatasetConfig(j, fs::current_path());
  }
  d.split_seed = a.seed;
  if (a.max_rows > 0) d.max_rows = a.max_rows;
  const SplitBundle split = PrepareSplit(d);
  SaveSplit(split, a.out);
  nlohmann::json screening = nlohmann::json::array();
  for (const auto& row : ScreenCorrelations(split.target_train)) {
    screening.push_back({{"attribute", row.attribute},
                         {"vs_target", row.vs_target},
                         {"vs_features_mean", row.vs_features_mean},
                         {"vs_features_sd", row.vs_features_sd},
                         {"vs_features_max_abs", row.vs_features_max_abs},
                         {"features_compared", row.features_compared}});
  }
  WriteJson(fs::path(a.out) / "screening.json", screening);
  std::cout << "target_train " << split.target_train.size() << " aux_attack_train " << split.aux_attack_train.size()
            << " aux_attack_test " << split.aux_attack_test.size() << "\n";
  return 0;
}

struct TrainArgs {
  std::string split;
  std::string out;
  std::string architecture = "default";
  TrainConfig train;
  std::uint64_t seed = 0;
};

int TrainCmd(const TrainArgs& a) {
  const SplitBundle split = LoadSplit(a.split);
  const MlpModel init = InitModel(split.target_train.num_features(), ArchitectureProfile(a.architecture), a.seed);
  const TrainResult r = Train(init, split.target_train, a.train, a.seed);
  SaveModel(r.model, a.out);
  std::cout << "train_accuracy " << FormatDouble(Evaluate(r.model, split.target_train)) << " test_accuracy "
            << FormatDouble(Evaluate(r.model, split.aux_attack_test)) << " seconds " << FormatDouble(r.seconds)
            << "\n";
  return 0;
}

struct DpTrainArgs {
  TrainArgs base;
  std::optional<double> epsilon_target;
  std::optional<double> noise_multiplier;
  std::string profile;
  std::optional<double> learning_rate;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> microbatch_size;
  std::optional<double> l2_clip;
  std::optional<double> delta;
  std::optional<int> epochs;
};

int DpTrainCmd(const DpTrainArgs& a) {
  const SplitBundle split = LoadSplit(a.base.split);
  DpTrainProfile p = DefaultDpProfile(a.profile);
  if (a.learning_rate) p.learning_rate = *a.learning_rate;
  if (a.batch_size) p.batch_size = *a.batch_size;
  if (a.microbatch_size) p.microbatch_size = *a.microbatch_size;
  if (a.l2_clip) p.l2_clip = *a.l2_clip;
  if (a.delta) p.delta = *a.delta;
  if (a.epochs) p.epochs = *a.epochs;
  TrainConfig tc = a.base.train;
  tc.learning_rate = p.learning_rate;
  tc.batch_size = p.batch_size;
  tc.epochs = p.epochs;
  DpConfig dp;
  dp.l2_clip = p.l2_clip;
  dp.microbatch_size = p.microbatch_size;
  dp.delta = p.delta;
  const std::size_t n = split.target_train.size();
  if (a.epsilon_target) {
    const double q = static_cast<double>(tc.batch_size) / static_cast<double>(n);
    dp.noise_multiplier = dp::CalibrateNoise(*a.epsilon_target, DpSteps(n, tc), q, dp.delta);
  } else {
    dp.noise_multiplier = *a.noise_multiplier;
  }
  const MlpModel init =
      InitModel(split.target_train.num_features(), ArchitectureProfile(a.base.architecture), a.base.seed);
  const DpTrainResult r = DpTrain(init, split.target_train, tc, dp, a.base.seed);
  SaveModel(r.model, a.base.out);
  const nlohmann::json privacy = {{"epsilon", r.privacy.epsilon},
                                  {"delta", r.privacy.delta},
                                  {"noise_multiplier", r.privacy.noise_multiplier},
                                  {"steps", r.privacy.steps},
                                  {"sampling_rate", r.privacy.sampling_rate},
                                  {"order", r.privacy.order},
                                  {"clip_invariant_held", r.audit.invariant_held},
                                  {"steps_audited", r.audit.steps_audited},
                                  {"warnings", r.warnings},
                                  {"seconds", r.seconds},
                                  {"test_accuracy", Evaluate(r.model, split.aux_attack_test)}};
  WriteJson(fs::path(a.base.out).replace_extension(".privacy.json"), privacy);
  std::cout << privacy.dump(2) << "\n";
  return 0;
}

struct SynthArgs {
  std::string split;
  std::string out;
  std::string model_out;
  std::size_t rows = 0;
  std::uint64_t seed = 0;
};

int Synth(const SynthArgs& a) {
  const SplitBundle split = LoadSplit(a.split);
  const CopulaModel model = FitCopula(split.target_train);
  const std::size_t n = a.rows > 0 ? a.rows : split.target_train.size();
  const TabularDataset synth = SampleCopula(model, n, a.seed, &split.target_train);
  SaveDataset(synth, a.out);
  if (!a.model_out.empty()) WriteJson(a.model_out, ToJson(model));
  const DiagnosticScore diag = Diagnostics(split.target_train, synth);
  std::cout << ToJson(diag).dump(2) << "\n";
  return 0;
}

struct ExplainArgs {
  std::string model;
  std::string data;
  std::string background;
  std::string method;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
};

int ExplainCmd(const ExplainArgs& a) {
  const MlpModel model = LoadModel(a.model);
  const TabularDataset data = LoadDataset(a.data);
  const TabularDataset background = LoadDataset(a.background);
  const ExplainerConfig cfg = a.config.empty() ? ExplainerConfig{} : ExplainerConfigFromJson(ReadJson(a.config));
  const ExplainerContext ctx = MakeContext(background, cfg, a.seed);
  const ExplanationMatrix m = ExplainDataset(ParseExplainerMethod(a.method), model, data, cfg, ctx, a.seed);
  SaveExplanation(m, a.out);
  std::cout << "explained " << m.size() << " records in " << FormatDouble(m.metadata.value("seconds", 0.0))
            << " s\n";
  return 0;
}

struct PerturbArgs {
  std::string in;
  std::string out;
  std::string variant;
  double epsilon = 1.0;
  double delta = 1e-6;
  double random_low = 0.5;
  double random_high = 1.5;
  std::uint64_t seed = 0;
};

int PerturbCmd(const PerturbArgs& a) {
  NoiseSpec spec = NoiseSpec::FromName(a.variant);
  spec.epsilon = a.epsilon;
  spec.delta = a.delta;
  spec.random_low = a.random_low;
  spec.random_high = a.random_high;
  spec.seed = a.seed;
  const ExplanationMatrix noisy = Perturb(LoadExplanation(a.in), spec);
  SaveExplanation(noisy, a.out);
  std::cout << noisy.metadata.at("noise").dump(2) << "\n";
  return 0;
}

struct AttackArgs {
  std::string explanations;
  std::string split;
  std::string attribute;
  std::string spec;
  int repetitions = 5;
  std::string out;
};

int AttackCmd(const AttackArgs& a) {
  const SplitBundle split = LoadSplit(a.split);
  const AttackDataset ads = BuildAttackDataset(LoadExplanation(a.explanations), split, a.attribute);
  const AttackModelSpec spec = a.spec.empty() ? AttackModelSpec{} : AttackModelSpecFromJson(ReadJson(a.spec));
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < a.repetitions; ++r) seeds.push_back(static_cast<std::uint64_t>(r));
  const nlohmann::json report = ToJson(RunAttack(ads, spec, seeds));
  if (!a.out.empty()) WriteJson(a.out, report);
  std::cout << report.dump(2) << "\n";
  return 0;
}

struct MetricsArgs {
  std::string model;
  std::string data;
  std::string explanations;
  std::string config;
  std::string out;
};

int MetricsCmd(const MetricsArgs& a) {
  const FaithfulnessConfig cfg =
      a.config.empty() ? FaithfulnessConfig{} : FaithfulnessConfigFromJson(ReadJson(a.config));
  const FaithfulnessReport r =
      EvaluateFaithfulness(LoadModel(a.model), LoadDataset(a.data), LoadExplanation(a.explanations), cfg);
  const nlohmann::json j = ToJson(r);
  if (!a.out.empty()) WriteJson(a.out, j);
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::string output_dir;
  bool plan_only = false;
  bool quiet = false;
};

int Run(const RunArgs& a) {
  ExperimentConfig cfg = LoadExperimentConfig(a.config);
  if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
  const CampaignPlan plan = PlanCampaign(cfg);
  std::cout << "planned cells " << plan.cells.size();
  for (const auto& [stage, count] : plan.per_stage) std::cout << " " << ToString(stage) << "=" << count;
  std::cout << "\n";
  if (a.plan_only) return 0;
  Require(!cfg.output_dir.empty(), "run needs an output directory");
  fs::create_directories(cfg.output_dir);
  const CampaignResult result = RunPipeline(cfg, a.quiet ? nullptr : &std::cerr);
  std::cout << "cells " << result.cells.size() << " failed " << result.failed << "\n";
  return result.failed == 0 ? 0 : 1;
}

struct SummarizeArgs {
  std::string report;
  std::string out;
};

int SummarizeCmd(const SummarizeArgs& a) {
  const auto cells = ParseReportCsv(csv::ReadTextFile(a.report));
  const std::string text = SummaryToCsv(Summarize(cells));
  if (a.out.empty()) {
    std::cout << text;
  } else {
    csv::WriteTextFile(a.out, text);
  }
  return 0;
}

}  // namespace
}  // namespace ppxai

int main(int argc, char** argv) {
  using namespace ppxai;
  CLI::App app{"ppxai: privacy auditing of feature-attribution explanations"};
  app.require_subcommand(1);
  int code = 0;

  PrepArgs prep;
  auto* c_prep = app.add_subcommand("prep", "Load or simulate a dataset, preprocess and split it");
  c_prep->add_option("--dataset-config", prep.dataset_config, "Dataset JSON (same shape as a campaign entry)");
  c_prep->add_option("--fixture", prep.fixture, "Built-in schema: adult, credit or compas");
  c_prep->add_option("--input", prep.input, "CSV file; simulated rows are used when absent");
  c_prep->add_option("--rows", prep.rows, "Simulated rows");
  c_prep->add_option("--simulate-seed", prep.simulate_seed);
  c_prep->add_option("--max-rows", prep.max_rows, "Subsample to at most this many rows");
  c_prep->add_option("--seed", prep.seed, "Split seed");
  c_prep->add_option("--out", prep.out, "Output directory")->required();
  c_prep->callback([&] { code = Prep(prep); });

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train the non-private target model");
  c_train->add_option("--split", train.split, "Split directory")->required();
  c_train->add_option("--out", train.out, "Model file")->required();
  c_train->add_option("--architecture", train.architecture);
  c_train->add_option("--epochs", train.train.epochs);
  c_train->add_option("--lr", train.train.learning_rate);
  c_train->add_option("--batch", train.train.batch_size);
  c_train->add_option("--seed", train.seed);
  c_train->callback([&] { code = TrainCmd(train); });

  DpTrainArgs dpt;
  auto* c_dp = app.add_subcommand("dp-train", "Train the target model with DP-SGD");
  c_dp->add_option("--split", dpt.base.split, "Split directory")->required();
  c_dp->add_option("--out", dpt.base.out, "Model file")->required();
  c_dp->add_option("--architecture", dpt.base.architecture);
  c_dp->add_option("--seed", dpt.base.seed);
  c_dp->add_option("--profile", dpt.profile, "Hyperparameter profile: adult, credit or compas");
  auto* o_eps = c_dp->add_option("--epsilon-target", dpt.epsilon_target);
  auto* o_nm = c_dp->add_option("--noise-multiplier", dpt.noise_multiplier);
  o_eps->excludes(o_nm);
  o_nm->excludes(o_eps);
  c_dp->add_option("--lr", dpt.learning_rate);
  c_dp->add_option("--batch", dpt.batch_size);
  c_dp->add_option("--microbatch", dpt.microbatch_size);
  c_dp->add_option("--clip", dpt.l2_clip);
  c_dp->add_option("--delta", dpt.delta);
  c_dp->add_option("--epochs", dpt.epochs);
  c_dp->callback([&] {
    if (!dpt.epsilon_target && !dpt.noise_multiplier) {
      throw CLI::ValidationError("dp-train", "one of --epsilon-target or --noise-multiplier is required");
    }
    code = DpTrainCmd(dpt);
  });

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Fit a Gaussian copula and sample synthetic training data");
  c_synth->add_option("--split", synth.split, "Split directory")->required();
  c_synth->add_option("--out", synth.out, "Synthetic dataset CSV")->required();
  c_synth->add_option("--model-out", synth.model_out, "Copula model JSON");
  c_synth->add_option("--rows", synth.rows);
  c_synth->add_option("--seed", synth.seed);
  c_synth->callback([&] { code = Synth(synth); });

  ExplainArgs expl;
  auto* c_expl = app.add_subcommand("explain", "Compute feature attributions");
  c_expl->add_option("--model", expl.model)->required();
  c_expl->add_option("--data", expl.data, "Dataset CSV to explain")->required();
  c_expl->add_option("--background", expl.background, "Training dataset CSV")->required();
  c_expl->add_option("--method", expl.method, "IG, SG, SHAP or LIME")->required();
  c_expl->add_option("--config", expl.config, "Explainer JSON");
  c_expl->add_option("--out", expl.out, "Explanation CSV")->required();
  c_expl->add_option("--seed", expl.seed);
  c_expl->callback([&] { code = ExplainCmd(expl); });

  PerturbArgs pert;
  auto* c_pert = app.add_subcommand("perturb", "Add noise to an explanation matrix");
  c_pert->add_option("--in", pert.in)->required();
  c_pert->add_option("--out", pert.out)->required();
  c_pert->add_option("--variant", pert.variant, "dp-laplace, dp-gaussian, random-laplace or random-gaussian")
      ->required();
  c_pert->add_option("--epsilon", pert.epsilon);
  c_pert->add_option("--delta", pert.delta);
  c_pert->add_option("--random-low", pert.random_low);
  c_pert->add_option("--random-high", pert.random_high);
  c_pert->add_option("--seed", pert.seed);
  c_pert->callback([&] { code = PerturbCmd(pert); });

  AttackArgs atk;
  auto* c_atk = app.add_subcommand("attack", "Run the attribute inference attack");
  c_atk->add_option("--explanations", atk.explanations)->required();
  c_atk->add_option("--split", atk.split)->required();
  c_atk->add_option("--attribute", atk.attribute)->required();
  c_atk->add_option("--spec", atk.spec, "Attack model JSON");
  c_atk->add_option("--repetitions", atk.repetitions);
  c_atk->add_option("--out", atk.out);
  c_atk->callback([&] { code = AttackCmd(atk); });

  MetricsArgs met;
  auto* c_met = app.add_subcommand("metrics", "Faithfulness and sufficiency of an explanation matrix");
  c_met->add_option("--model", met.model)->required();
  c_met->add_option("--data", met.data)->required();
  c_met->add_option("--explanations", met.explanations)->required();
  c_met->add_option("--config", met.config, "Faithfulness JSON");
  c_met->add_option("--out", met.out);
  c_met->callback([&] { code = MetricsCmd(met); });

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "Run a full campaign from a JSON config");
  c_run->add_option("--config", run.config)->required();
  c_run->add_option("--output-dir", run.output_dir);
  c_run->add_flag("--plan-only", run.plan_only, "Print the planned cell counts and exit");
  c_run->add_flag("--quiet", run.quiet);
  c_run->callback([&] { code = Run(run); });

  SummarizeArgs sum;
  auto* c_sum = app.add_subcommand("summarize", "Summarize a report.csv");
  c_sum->add_option("--report", sum.report)->required();
  c_sum->add_option("--out", sum.out);
  c_sum->callback([&] { code = SummarizeCmd(sum); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
