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

#include "ppxai/experiment.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <set>

#include "ppxai/copula.h"
#include "ppxai/csv.h"
#include "ppxai/dataset_io.h"
#include "ppxai/dp_sgd.h"
#include "ppxai/fixtures.h"
#include "ppxai/rdp_accountant.h"

namespace ppxai {
namespace {

constexpr double kMaxEpsilonTarget = 10.0;

template <typename T>
T Get(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("config field '") + key + "': " + e.what());
  }
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  if (p.empty()) return {};
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string VariantForEpsilon(double eps) { return "eps=" + FormatDouble(eps); }
std::string VariantForMultiplier(double nm) { return "nm=" + FormatDouble(nm); }

// A trained target model and what is known about how it was produced.
struct Producer {
  MlpModel model;
  ExplainerContext context;
  double train_seconds = kNotApplicable;
  double train_accuracy = kNotApplicable;
  double test_accuracy = kNotApplicable;
  double epsilon = kNotApplicable;
  double noise_multiplier = kNotApplicable;
  double data_validity = kNotApplicable;
  double data_structure = kNotApplicable;
  double synth_ms_per_record = kNotApplicable;
  nlohmann::json detail = nlohmann::json::object();
};

struct MethodOutput {
  std::vector<ExplanationMatrix> per_repetition;  // one entry unless noise is added per repetition
  double explain_ms_per_record = kNotApplicable;
  double noise_ms_per_record = kNotApplicable;
  FaithfulnessReport faithfulness;
  bool has_faithfulness = false;
};

std::string FaithfulnessFlags(const FaithfulnessReport& f) {
  std::vector<std::string> parts;
  if (f.correlation_undefined > 0) parts.push_back("correlation_undefined=" + std::to_string(f.correlation_undefined));
  if (f.estimate_undefined > 0) parts.push_back("estimate_undefined=" + std::to_string(f.estimate_undefined));
  if (f.sufficiency_undefined) parts.push_back("sufficiency_undefined");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? ";" : "") + parts[i];
  return out;
}

void FillFromProducer(CellResult& cell, const Producer& p) {
  cell.train_accuracy = p.train_accuracy;
  cell.test_accuracy = p.test_accuracy;
  cell.epsilon = p.epsilon;
  cell.noise_multiplier = p.noise_multiplier;
  cell.data_validity = p.data_validity;
  cell.data_structure = p.data_structure;
  cell.timings.train_seconds = p.train_seconds;
  cell.timings.synth_ms_per_record = p.synth_ms_per_record;
  cell.detail["producer"] = p.detail;
}

CellResult EvaluateCell(const CellKey& key, const Producer& producer, const MethodOutput& out,
                        const SplitBundle& split, const ExperimentConfig& cfg) {
  CellResult cell;
  cell.key = key;
  FillFromProducer(cell, producer);
  cell.timings.explain_ms_per_record = out.explain_ms_per_record;
  cell.timings.noise_ms_per_record = out.noise_ms_per_record;
  const Stopwatch clock;
  AttackReport merged;
  for (int r = 0; r < cfg.repetitions; ++r) {
    const auto& expl = out.per_repetition.size() == 1 ? out.per_repetition[0]
                                                       : out.per_repetition[static_cast<std::size_t>(r)];
    const AttackDataset ads = BuildAttackDataset(expl, split, key.attribute);
    const std::uint64_t seed = static_cast<std::uint64_t>(r);
    const AttackReport one = RunAttack(ads, cfg.attack, std::span<const std::uint64_t>(&seed, 1));
    merged.attribute = one.attribute;
    merged.random_guess = one.random_guess;
    merged.any_undefined = merged.any_undefined || one.any_undefined;
    merged.runs.push_back(one.runs.front());
  }
  const auto n = static_cast<double>(merged.runs.size());
  for (const auto& run : merged.runs) {
    merged.precision += run.metrics.precision / n;
    merged.recall += run.metrics.recall / n;
    merged.f1 += run.metrics.f1 / n;
    merged.attack_success += run.metrics.attack_success / n;
    cell.success_per_repetition.push_back(run.metrics.attack_success);
    cell.f1_per_repetition.push_back(run.metrics.f1);
  }
  cell.timings.attack_seconds = clock.Seconds();
  cell.repetitions = cfg.repetitions;
  cell.attack_success = merged.attack_success;
  cell.attack_f1 = merged.f1;
  cell.attack_precision = merged.precision;
  cell.attack_recall = merged.recall;
  cell.random_guess = merged.random_guess;
  cell.random_guess_uniform = merged.random_guess_uniform;
  cell.detail["attack"] = ToJson(merged);
  if (out.has_faithfulness) {
    cell.faithfulness_correlation = out.faithfulness.correlation;
    cell.faithfulness_estimate = out.faithfulness.estimate;
    cell.sufficiency = out.faithfulness.sufficiency;
    cell.faithfulness_flags = FaithfulnessFlags(out.faithfulness);
    cell.detail["faithfulness"] = ToJson(out.faithfulness);
  }
  if (!out.per_repetition.front().metadata.is_null() && out.per_repetition.front().metadata.contains("noise")) {
    nlohmann::json noise = nlohmann::json::array();
    for (const auto& m : out.per_repetition) noise.push_back(m.metadata.at("noise"));
    cell.detail["noise"] = noise;
  }
  cell.ok = true;
  return cell;
}

CellResult FailedCell(const CellKey& key, const std::string& message) {
  CellResult cell;
  cell.key = key;
  cell.ok = false;
  cell.error = message;
  return cell;
}

std::string SidecarName(const CellKey& key) {
  std::string name = key.dataset + "__" + std::string(ToString(key.stage)) + "__" + key.variant + "__" +
                     std::string(ToString(key.explainer)) + "__" + key.attribute;
  for (char& c : name) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == '=';
    if (!safe) c = '_';
  }
  return name + ".json";
}

double Accuracy(const MlpModel& model, const TabularDataset& ds) { return Evaluate(model, ds); }

}  // namespace

DpTrainProfile DefaultDpProfile(std::string_view fixture) {
  DpTrainProfile p;
  if (fixture == "adult") {
    p.batch_size = 5;
    p.microbatch_size = 5;
    p.l2_clip = 1e-5;
  } else if (fixture == "credit") {
    p.batch_size = 48;
    p.microbatch_size = 12;
    p.l2_clip = 1e-5;
  } else if (fixture == "compas") {
    p.batch_size = 1;
    p.microbatch_size = 1;
    p.l2_clip = 1e-3;
  }
  return p;
}

DatasetConfig ParseDatasetConfig(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  DatasetConfig d;
  d.fixture = Get<std::string>(j, "fixture", "");
  d.name = Get<std::string>(j, "name", d.fixture);
  d.path = Resolve(base_dir, Get<std::string>(j, "path", ""));
  d.simulate_rows = Get<std::size_t>(j, "simulate_rows", d.simulate_rows);
  d.simulate_seed = Get<std::uint64_t>(j, "simulate_seed", d.simulate_seed);
  d.max_rows = Get<std::size_t>(j, "max_rows", d.max_rows);
  d.split_seed = Get<std::uint64_t>(j, "split_seed", d.split_seed);
  d.architecture = Get<std::string>(j, "architecture", d.architecture);
  if (!d.fixture.empty()) {
    const Fixture f = FixtureByName(d.fixture);
    d.schema = f.schema;
    d.sensitive = f.sensitive;
  }
  if (j.contains("columns")) {
    d.schema.columns.clear();
    for (const auto& c : j.at("columns")) {
      d.schema.columns.push_back({Get<std::string>(c, "name", ""), ParseColumnKind(Get<std::string>(c, "kind", "")),
                                  ParseColumnRole(Get<std::string>(c, "role", "feature"))});
    }
  }
  if (j.contains("target_positive")) d.schema.target_positive = Criterion::Parse(Get<std::string>(j, "target_positive", ""));
  if (j.contains("sensitive")) {
    d.sensitive.clear();
    for (const auto& s : j.at("sensitive")) d.sensitive.push_back(SensitiveSpecFromJson(s));
  }
  d.dp = DefaultDpProfile(d.fixture);
  if (j.contains("dp")) {
    const auto& p = j.at("dp");
    d.dp.learning_rate = Get<double>(p, "learning_rate", d.dp.learning_rate);
    d.dp.batch_size = Get<std::size_t>(p, "batch_size", d.dp.batch_size);
    d.dp.microbatch_size = Get<std::size_t>(p, "microbatch_size", d.dp.microbatch_size);
    d.dp.l2_clip = Get<double>(p, "l2_clip", d.dp.l2_clip);
    d.dp.delta = Get<double>(p, "delta", d.dp.delta);
    d.dp.epochs = Get<int>(p, "epochs", d.dp.epochs);
  }
  return d;
}

ExperimentConfig ParseExperimentConfig(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  const int version = Get<int>(j, "schema_version", 0);
  if (version != kConfigSchemaVersion) {
    throw Error(ErrorCode::kUnsupported, "config schema_version must be " + std::to_string(kConfigSchemaVersion));
  }
  ExperimentConfig cfg;
  cfg.campaign_seed = Get<std::uint64_t>(j, "campaign_seed", cfg.campaign_seed);
  cfg.repetitions = Get<int>(j, "repetitions", cfg.repetitions);
  cfg.output_dir = Resolve(base_dir, Get<std::string>(j, "output_dir", ""));
  for (const auto& s : Get<std::vector<std::string>>(j, "stages", {"baseline"})) cfg.stages.push_back(ParseStage(s));
  for (const auto& e : Get<std::vector<std::string>>(j, "explainers", {})) {
    cfg.explainers.push_back(ParseExplainerMethod(e));
  }
  if (j.contains("datasets")) {
    for (const auto& d : j.at("datasets")) cfg.datasets.push_back(ParseDatasetConfig(d, base_dir));
  }
  if (j.contains("target_model")) {
    const auto& t = j.at("target_model");
    cfg.train.epochs = Get<int>(t, "epochs", cfg.train.epochs);
    cfg.train.learning_rate = Get<double>(t, "learning_rate", cfg.train.learning_rate);
    cfg.train.batch_size = Get<std::size_t>(t, "batch_size", cfg.train.batch_size);
  }
  if (j.contains("pre")) cfg.generators = Get<std::vector<std::string>>(j.at("pre"), "generators", cfg.generators);
  if (j.contains("in")) {
    cfg.epsilon_targets = Get<std::vector<double>>(j.at("in"), "epsilon_targets", {});
    cfg.noise_multipliers = Get<std::vector<double>>(j.at("in"), "noise_multipliers", {});
  }
  if (j.contains("post")) {
    const auto& p = j.at("post");
    const double eps = Get<double>(p, "epsilon", 1.0);
    const double delta = Get<double>(p, "delta", 1e-6);
    const auto range = Get<std::vector<double>>(p, "random_scale_range", {0.5, 1.5});
    Require(range.size() == 2, "random_scale_range needs two values");
    if (p.contains("variants")) {
      for (const auto& v : p.at("variants")) {
        const bool is_object = v.is_object();
        NoiseSpec spec = NoiseSpec::FromName(is_object ? Get<std::string>(v, "variant", "") : v.get<std::string>());
        spec.epsilon = is_object ? Get<double>(v, "epsilon", eps) : eps;
        spec.delta = is_object ? Get<double>(v, "delta", delta) : delta;
        spec.random_low = range[0];
        spec.random_high = range[1];
        cfg.noise_variants.push_back(spec);
      }
    }
  }
  if (j.contains("explainer_config")) cfg.explainer = ExplainerConfigFromJson(j.at("explainer_config"));
  if (j.contains("attack")) cfg.attack = AttackModelSpecFromJson(j.at("attack"));
  if (j.contains("faithfulness")) {
    cfg.faithfulness = FaithfulnessConfigFromJson(j.at("faithfulness"));
    cfg.faithfulness_enabled = Get<bool>(j.at("faithfulness"), "enabled", true);
  }
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(csv::ReadTextFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, "config " + path.string() + ": " + e.what());
  }
  return ParseExperimentConfig(j, path.parent_path());
}

void ExperimentConfig::Validate() const {
  Require(!datasets.empty(), "config lists no datasets");
  Require(!stages.empty(), "config lists no stages");
  Require(!explainers.empty(), "config lists no explainers");
  Require(repetitions >= 1, "repetitions must be at least 1");
  Require(std::set<Stage>(stages.begin(), stages.end()).size() == stages.size(), "stages repeat");
  Require(std::set<ExplainerMethod>(explainers.begin(), explainers.end()).size() == explainers.size(),
          "explainers repeat");
  std::set<std::string> names;
  for (const auto& d : datasets) {
    Require(!d.name.empty(), "every dataset needs a name");
    Require(names.insert(d.name).second, "dataset name '" + d.name + "' repeats");
    Require(!d.sensitive.empty(), "dataset '" + d.name + "' has no sensitive attributes");
    Require(!d.path.empty() || !d.fixture.empty(), "dataset '" + d.name + "' needs a path or a fixture");
    d.schema.Validate();
  }
  train.Validate(std::numeric_limits<std::size_t>::max());
  explainer.Validate();
  attack.Validate();
  for (Stage s : stages) {
    switch (s) {
      case Stage::kBaseline:
        break;
      case Stage::kPre:
        Require(!generators.empty(), "pre stage needs at least one generator");
        break;
      case Stage::kIn:
        Require(epsilon_targets.empty() != noise_multipliers.empty(),
                "in stage needs exactly one of epsilon_targets or noise_multipliers");
        for (double e : epsilon_targets) {
          Require(e > 0.0 && e <= kMaxEpsilonTarget, "epsilon targets must lie in (0, 10]");
        }
        for (double nm : noise_multipliers) Require(nm > 0.0, "noise multipliers must be positive");
        break;
      case Stage::kPost:
        Require(!noise_variants.empty(), "post stage needs at least one noise variant");
        for (const auto& v : noise_variants) v.Validate();
        break;
    }
  }
}

std::vector<std::string> StageVariants(const ExperimentConfig& cfg, Stage stage) {
  std::vector<std::string> out;
  switch (stage) {
    case Stage::kBaseline:
      out.push_back("none");
      break;
    case Stage::kPre:
      out = cfg.generators;
      break;
    case Stage::kIn:
      for (double e : cfg.epsilon_targets) out.push_back(VariantForEpsilon(e));
      for (double nm : cfg.noise_multipliers) out.push_back(VariantForMultiplier(nm));
      break;
    case Stage::kPost:
      for (const auto& v : cfg.noise_variants) out.push_back(v.Name());
      break;
  }
  return out;
}

CampaignPlan PlanCampaign(const ExperimentConfig& cfg) {
  CampaignPlan plan;
  for (Stage stage : cfg.stages) {
    std::size_t count = 0;
    for (const auto& d : cfg.datasets) {
      for (const auto& variant : StageVariants(cfg, stage)) {
        for (ExplainerMethod m : cfg.explainers) {
          for (const auto& s : d.sensitive) {
            plan.cells.push_back({d.name, stage, variant, m, s.attribute_name});
            ++count;
          }
        }
      }
    }
    plan.per_stage[stage] = count;
  }
  std::sort(plan.cells.begin(), plan.cells.end());
  Require(std::adjacent_find(plan.cells.begin(), plan.cells.end()) == plan.cells.end(), "run keys repeat");
  return plan;
}

TabularDataset LoadConfiguredDataset(const DatasetConfig& cfg) {
  RawDataset raw;
  if (!cfg.path.empty()) {
    raw = LoadCsv(cfg.path, cfg.schema);
  } else {
    raw = ParseCsv(SimulateCsv(cfg.fixture, cfg.simulate_rows, cfg.simulate_seed), cfg.schema);
  }
  TabularDataset ds = Preprocess(raw, cfg.sensitive);
  if (cfg.max_rows > 0 && ds.size() > cfg.max_rows) {
    Rng rng(DeriveSeed(cfg.split_seed, 0x5ab));
    auto rows = Permutation(ds.size(), rng);
    rows.resize(cfg.max_rows);
    std::sort(rows.begin(), rows.end());
    ds = Subset(ds, rows);
  }
  return ds;
}

SplitBundle PrepareSplit(const DatasetConfig& cfg) { return Split(LoadConfiguredDataset(cfg), cfg.split_seed); }

TabularDataset Concatenate(const TabularDataset& a, const TabularDataset& b) {
  if (a.groups != b.groups || a.feature_names != b.feature_names) {
    throw Error(ErrorCode::kSchemaMismatch, "datasets use different encodings");
  }
  TabularDataset out = a;
  out.features.resize(a.features.rows() + b.features.rows(), a.features.cols());
  out.features << a.features, b.features;
  out.target.insert(out.target.end(), b.target.begin(), b.target.end());
  out.record_ids.insert(out.record_ids.end(), b.record_ids.begin(), b.record_ids.end());
  for (auto& [name, labels] : out.sensitive) {
    const auto& other = b.SensitiveLabels(name);
    labels.insert(labels.end(), other.begin(), other.end());
  }
  out.Validate();
  return out;
}

CampaignResult RunPipeline(const ExperimentConfig& cfg, std::ostream* log) {
  cfg.Validate();
  const CampaignPlan plan = PlanCampaign(cfg);
  const std::set<CellKey> planned(plan.cells.begin(), plan.cells.end());
  const bool emit_baseline = std::find(cfg.stages.begin(), cfg.stages.end(), Stage::kBaseline) != cfg.stages.end();
  auto say = [&](const std::string& line) {
    if (log != nullptr) *log << line << std::endl;
  };

  CampaignResult result;
  auto record = [&](CellResult cell) {
    if (planned.count(cell.key) == 0) return;
    if (!cell.ok) ++result.failed;
    result.cells.push_back(std::move(cell));
  };

  for (const auto& dcfg : cfg.datasets) {
    const std::uint64_t dataset_key = HashString(dcfg.name);
    const std::uint64_t model_seed = DeriveSeed(cfg.campaign_seed, dataset_key);
    auto cells_for = [&](Stage stage, const std::string& variant) {
      std::vector<CellKey> keys;
      for (const auto& k : plan.cells) {
        if (k.dataset == dcfg.name && k.stage == stage && k.variant == variant) keys.push_back(k);
      }
      return keys;
    };
    auto fail_all = [&](Stage stage, const std::string& variant, const std::string& message) {
      for (const auto& k : cells_for(stage, variant)) record(FailedCell(k, message));
    };

    SplitBundle split;
    TabularDataset aux;
    try {
      split = PrepareSplit(dcfg);
      aux = Concatenate(split.aux_attack_train, split.aux_attack_test);
    } catch (const std::exception& e) {
      for (Stage stage : cfg.stages) {
        for (const auto& v : StageVariants(cfg, stage)) fail_all(stage, v, e.what());
      }
      say("[" + dcfg.name + "] data preparation failed: " + e.what());
      continue;
    }
    const std::size_t d = split.target_train.num_features();
    const MlpModel init = InitModel(d, ArchitectureProfile(dcfg.architecture), model_seed);
    say("[" + dcfg.name + "] train/aux rows " + std::to_string(split.target_train.size()) + "/" +
        std::to_string(aux.size()) + ", features " + std::to_string(d));

    auto explain = [&](const Producer& p, const std::string& variant, ExplainerMethod m) {
      const std::uint64_t seed = DeriveSeed(cfg.campaign_seed, dataset_key, HashString(variant),
                                            static_cast<std::uint64_t>(m));
      return ExplainDataset(m, p.model, aux, cfg.explainer, p.context, seed);
    };
    auto faithfulness = [&](const Producer& p, MethodOutput& out) {
      if (!cfg.faithfulness_enabled) return;
      out.faithfulness = EvaluateFaithfulness(p.model, split.aux_attack_test, out.per_repetition.front(),
                                              cfg.faithfulness);
      out.has_faithfulness = true;
    };
    auto attach_baseline = [](CellResult& cell, const std::map<std::pair<ExplainerMethod, std::string>, CellResult>& base) {
      const auto it = base.find({cell.key.explainer, cell.key.attribute});
      if (it == base.end() || !it->second.ok) return;
      cell.baseline_attack_success = it->second.attack_success;
      cell.baseline_attack_f1 = it->second.attack_f1;
    };

    // Baseline model: always built, since every other stage is compared with it.
    Producer base;
    std::map<ExplainerMethod, MethodOutput> base_outputs;
    std::map<ExplainerMethod, std::string> base_errors;
    std::map<std::pair<ExplainerMethod, std::string>, CellResult> base_cells;
    bool base_ok = false;
    try {
      const TrainResult trained = Train(init, split.target_train, cfg.train, model_seed);
      base.model = trained.model;
      base.train_seconds = trained.seconds;
      base.train_accuracy = Accuracy(base.model, split.target_train);
      base.test_accuracy = Accuracy(base.model, aux);
      base.context = MakeContext(split.target_train, cfg.explainer, model_seed);
      base.detail = {{"model_hash", ModelHash(base.model)}};
      base_ok = true;
      say("[" + dcfg.name + "] baseline accuracy train " + FormatDouble(base.train_accuracy) + " test " +
          FormatDouble(base.test_accuracy));
    } catch (const std::exception& e) {
      say("[" + dcfg.name + "] baseline training failed: " + e.what());
      for (Stage stage : cfg.stages) {
        for (const auto& v : StageVariants(cfg, stage)) fail_all(stage, v, std::string("baseline: ") + e.what());
      }
      continue;
    }
    if (base_ok) {
      for (ExplainerMethod m : cfg.explainers) {
        try {
          MethodOutput out;
          out.per_repetition.push_back(explain(base, "none", m));
          out.explain_ms_per_record = out.per_repetition.front().metadata.value("ms_per_record", kNotApplicable);
          faithfulness(base, out);
          base_outputs.emplace(m, std::move(out));
        } catch (const std::exception& e) {
          base_errors[m] = e.what();
        }
        for (const auto& s : dcfg.sensitive) {
          const CellKey key{dcfg.name, Stage::kBaseline, "none", m, s.attribute_name};
          CellResult cell;
          if (base_errors.count(m)) {
            cell = FailedCell(key, base_errors[m]);
          } else {
            try {
              cell = EvaluateCell(key, base, base_outputs.at(m), split, cfg);
            } catch (const std::exception& e) {
              cell = FailedCell(key, e.what());
            }
          }
          base_cells[{m, s.attribute_name}] = cell;
          if (emit_baseline) record(cell);
        }
        say("[" + dcfg.name + "] baseline " + std::string(ToString(m)) + " done");
      }
    }

    for (Stage stage : cfg.stages) {
      if (stage == Stage::kBaseline) continue;
      const auto variants = StageVariants(cfg, stage);
      for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        const std::string& variant = variants[vi];
        Producer producer;
        try {
          if (stage == Stage::kPre) {
            if (variant != "copula") {
              throw Error(ErrorCode::kUnsupported, "generator '" + variant + "' is not supported");
            }
            const Stopwatch fit_clock;
            const CopulaModel copula = FitCopula(split.target_train);
            const double fit_seconds = fit_clock.Seconds();
            const Stopwatch sample_clock;
            const TabularDataset synth = SampleCopula(copula, split.target_train.size(),
                                                      DeriveSeed(model_seed, HashString(variant)), &split.target_train);
            producer.synth_ms_per_record = sample_clock.Millis() / static_cast<double>(synth.size());
            const DiagnosticScore diag = Diagnostics(split.target_train, synth);
            producer.data_validity = diag.data_validity;
            producer.data_structure = diag.data_structure;
            const TrainResult trained = Train(init, synth, cfg.train, model_seed);
            producer.model = trained.model;
            producer.train_seconds = trained.seconds;
            producer.train_accuracy = Accuracy(producer.model, synth);
            producer.test_accuracy = Accuracy(producer.model, aux);
            producer.context = MakeContext(synth, cfg.explainer, model_seed);
            producer.detail = {{"diagnostics", ToJson(diag)},
                               {"fit_seconds", fit_seconds},
                               {"model_hash", ModelHash(producer.model)}};
          } else if (stage == Stage::kIn) {
            TrainConfig tc = cfg.train;
            tc.epochs = dcfg.dp.epochs;
            tc.learning_rate = dcfg.dp.learning_rate;
            tc.batch_size = dcfg.dp.batch_size;
            const std::size_t n = split.target_train.size();
            const std::int64_t steps = DpSteps(n, tc);
            const double q = static_cast<double>(tc.batch_size) / static_cast<double>(n);
            DpConfig dp;
            dp.l2_clip = dcfg.dp.l2_clip;
            dp.microbatch_size = dcfg.dp.microbatch_size;
            dp.delta = dcfg.dp.delta;
            if (vi < cfg.epsilon_targets.size()) {
              dp.noise_multiplier = dp::CalibrateNoise(cfg.epsilon_targets[vi], steps, q, dp.delta);
            } else {
              dp.noise_multiplier = cfg.noise_multipliers[vi - cfg.epsilon_targets.size()];
            }
            const DpTrainResult trained =
                DpTrain(init, split.target_train, tc, dp, DeriveSeed(model_seed, HashString(variant)));
            producer.model = trained.model;
            producer.train_seconds = trained.seconds;
            producer.train_accuracy = Accuracy(producer.model, split.target_train);
            producer.test_accuracy = Accuracy(producer.model, aux);
            producer.epsilon = trained.privacy.epsilon;
            producer.noise_multiplier = trained.privacy.noise_multiplier;
            producer.context = MakeContext(split.target_train, cfg.explainer, model_seed);
            producer.detail = {{"steps", trained.privacy.steps},
                               {"sampling_rate", trained.privacy.sampling_rate},
                               {"order", trained.privacy.order},
                               {"delta", trained.privacy.delta},
                               {"clip_invariant_held", trained.audit.invariant_held},
                               {"warnings", trained.warnings},
                               {"model_hash", ModelHash(producer.model)}};
          } else {
            producer = base;
          }
        } catch (const std::exception& e) {
          say("[" + dcfg.name + "] " + std::string(ToString(stage)) + "/" + variant + " failed: " + e.what());
          fail_all(stage, variant, e.what());
          continue;
        }
        say("[" + dcfg.name + "] " + std::string(ToString(stage)) + "/" + variant + " model ready, test accuracy " +
            FormatDouble(producer.test_accuracy));

        for (ExplainerMethod m : cfg.explainers) {
          MethodOutput out;
          std::string error;
          try {
            if (stage == Stage::kPost) {
              if (base_errors.count(m)) throw Error(ErrorCode::kUndefined, base_errors[m]);
              const MethodOutput& clean = base_outputs.at(m);
              out.explain_ms_per_record = clean.explain_ms_per_record;
              NoiseSpec spec = cfg.noise_variants[vi];
              double noise_ms = 0.0;
              for (int r = 0; r < cfg.repetitions; ++r) {
                spec.seed = DeriveSeed(cfg.campaign_seed, dataset_key, HashString(variant),
                                       static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(r));
                out.per_repetition.push_back(Perturb(clean.per_repetition.front(), spec));
                noise_ms += out.per_repetition.back().metadata["noise"].value("ms_per_record", 0.0);
              }
              out.noise_ms_per_record = noise_ms / cfg.repetitions;
            } else {
              out.per_repetition.push_back(explain(producer, variant, m));
              out.explain_ms_per_record = out.per_repetition.front().metadata.value("ms_per_record", kNotApplicable);
            }
            faithfulness(producer, out);
          } catch (const std::exception& e) {
            error = e.what();
          }
          for (const auto& s : dcfg.sensitive) {
            const CellKey key{dcfg.name, stage, variant, m, s.attribute_name};
            CellResult cell;
            if (!error.empty()) {
              cell = FailedCell(key, error);
            } else {
              try {
                cell = EvaluateCell(key, producer, out, split, cfg);
                attach_baseline(cell, base_cells);
              } catch (const std::exception& e) {
                cell = FailedCell(key, e.what());
              }
            }
            record(std::move(cell));
          }
          say("[" + dcfg.name + "] " + std::string(ToString(stage)) + "/" + variant + " " +
              std::string(ToString(m)) + " done");
        }
      }
    }
  }

  std::sort(result.cells.begin(), result.cells.end(),
            [](const CellResult& a, const CellResult& b) { return a.key < b.key; });
  if (!cfg.output_dir.empty()) {
    for (const auto& cell : result.cells) {
      nlohmann::json sidecar = cell.detail;
      sidecar["key"] = cell.key.ToString();
      sidecar["status"] = cell.ok ? "ok" : "failed";
      if (!cell.ok) sidecar["error"] = cell.error;
      csv::WriteTextFile(cfg.output_dir / "cells" / SidecarName(cell.key), sidecar.dump(2) + "\n");
    }
    EmitReport(result.cells, cfg.output_dir);
  }
  return result;
}

}  // namespace ppxai
