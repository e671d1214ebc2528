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

#include "ppxai/fixtures.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ppxai/csv.h"

namespace ppxai {
namespace {

using Kind = ColumnKind;
using Role = ColumnRole;

struct Category {
  const char* name;
  double weight;
  double effect;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double Uniform() { return Uniform01(rng_); }
  double Normal(double mean, double sd) { return mean + sd * normal_(rng_); }
  bool Bernoulli(double p) { return Uniform() < p; }
  std::size_t Index(std::size_t n) { return UniformIndex(rng_, n); }
  double Logistic() {
    const double u = std::clamp(Uniform(), 1e-12, 1.0 - 1e-12);
    return std::log(u / (1.0 - u));
  }

  const Category& Pick(const std::vector<Category>& cats) {
    double total = 0.0;
    for (const auto& c : cats) total += c.weight;
    double u = Uniform() * total;
    for (const auto& c : cats) {
      if (u < c.weight) return c;
      u -= c.weight;
    }
    return cats.back();
  }

 private:
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::string Int(double v) { return std::to_string(static_cast<long long>(std::llround(v))); }

const std::vector<Category> kWorkclass = {
    {"Private", 0.70, 0.0},          {"Self-emp-not-inc", 0.08, 0.1}, {"Local-gov", 0.07, 0.2},
    {"State-gov", 0.04, 0.1},        {"Self-emp-inc", 0.035, 0.9},    {"Federal-gov", 0.03, 0.6},
    {"Without-pay", 0.005, -1.5}};
// Education level carries its numeric code as the effect slot.
const std::vector<Category> kEducation = {
    {"Preschool", 0.002, 1},  {"1st-4th", 0.005, 2},    {"5th-6th", 0.01, 3},     {"7th-8th", 0.02, 4},
    {"9th", 0.016, 5},        {"10th", 0.029, 6},       {"11th", 0.036, 7},       {"12th", 0.013, 8},
    {"HS-grad", 0.322, 9},    {"Some-college", 0.224, 10}, {"Assoc-voc", 0.042, 11}, {"Assoc-acdm", 0.033, 12},
    {"Bachelors", 0.165, 13}, {"Masters", 0.053, 14},   {"Prof-school", 0.018, 15}, {"Doctorate", 0.013, 16}};
const std::vector<Category> kMarital = {
    {"Married-civ-spouse", 0.46, 1.9}, {"Never-married", 0.33, -0.3}, {"Divorced", 0.136, 0.0},
    {"Separated", 0.031, -0.2},        {"Widowed", 0.03, 0.0},        {"Married-spouse-absent", 0.012, 0.0},
    {"Married-AF-spouse", 0.001, 1.5}};
const std::vector<Category> kOccupation = {
    {"Prof-specialty", 0.13, 0.7},   {"Craft-repair", 0.13, 0.0},     {"Exec-managerial", 0.13, 0.9},
    {"Adm-clerical", 0.12, -0.1},    {"Sales", 0.115, 0.2},           {"Other-service", 0.105, -1.0},
    {"Machine-op-inspct", 0.065, -0.4}, {"Transport-moving", 0.05, -0.1}, {"Handlers-cleaners", 0.045, -0.9},
    {"Farming-fishing", 0.032, -0.8}, {"Tech-support", 0.03, 0.4},    {"Protective-serv", 0.02, 0.4},
    {"Priv-house-serv", 0.005, -2.0}, {"Armed-Forces", 0.003, 0.0}};
const std::vector<Category> kRelationship = {
    {"Husband", 0.40, 0.0},      {"Not-in-family", 0.26, 0.0}, {"Own-child", 0.155, -0.8},
    {"Unmarried", 0.105, -0.2},  {"Wife", 0.05, 0.0},          {"Other-relative", 0.03, -0.4}};
const std::vector<Category> kRace = {{"White", 0.855, 0.0},
                                     {"Black", 0.094, 0.0},
                                     {"Asian-Pac-Islander", 0.031, 0.0},
                                     {"Amer-Indian-Eskimo", 0.01, 0.0},
                                     {"Other", 0.01, 0.0}};
const std::vector<Category> kCountry = {
    {"United-States", 0.91, 0.0}, {"Mexico", 0.02, -0.6}, {"Philippines", 0.006, 0.0},
    {"Germany", 0.004, 0.0},      {"Canada", 0.004, 0.0}, {"India", 0.003, 0.3},
    {"El-Salvador", 0.003, -0.6}, {"Other", 0.05, 0.0}};

std::vector<std::string> AdultRow(Sampler& s) {
  const double age = 17.0 + std::floor(73.0 * std::pow(s.Uniform(), 1.6));
  const auto& work = s.Pick(kWorkclass);
  const double fnlwgt = std::exp(s.Normal(12.0, 0.5));
  const auto& edu = s.Pick(kEducation);
  const auto& marital = s.Pick(kMarital);
  const auto& occupation = s.Pick(kOccupation);
  const auto& relationship = s.Pick(kRelationship);
  const auto& race = s.Pick(kRace);
  const bool male = s.Bernoulli(0.67);
  const double gain = s.Bernoulli(0.085) ? std::min(99999.0, std::exp(s.Normal(8.6, 0.9))) : 0.0;
  const double loss = s.Bernoulli(0.047) ? std::max(100.0, s.Normal(1900.0, 350.0)) : 0.0;
  const double hours = std::clamp(std::round(s.Normal(40.5, 12.0)), 1.0, 99.0);
  const auto& country = s.Pick(kCountry);

  const double logit = -3.1 + 0.55 * (edu.effect - 10.0) + marital.effect + work.effect + occupation.effect +
                       relationship.effect + country.effect - 1.6 * std::pow((age - 48.0) / 22.0, 2) +
                       0.045 * (hours - 40.0) + (gain > 7000.0 ? 4.0 : 0.0) + (loss > 1800.0 ? 1.0 : 0.0) +
                       (male ? 2.2 : 0.0);
  const bool rich = logit + 0.8 * s.Logistic() > 0.0;
  return {Int(age),           work.name,         Int(fnlwgt),  edu.name,      Int(edu.effect),
          marital.name,       occupation.name,   relationship.name, race.name,     male ? "Male" : "Female",
          Int(gain),          Int(loss),         Int(hours),   country.name,  rich ? ">50K" : "<=50K"};
}

std::vector<std::string> CreditRow(Sampler& s) {
  const bool female = s.Bernoulli(0.60);
  const double age = 21.0 + std::floor(50.0 * std::pow(s.Uniform(), 1.5));
  static const std::vector<Category> kEdu = {{"1", 0.35, -0.1}, {"2", 0.47, 0.0}, {"3", 0.16, 0.05},
                                              {"4", 0.02, -0.5}};
  static const std::vector<Category> kMarriage = {{"1", 0.46, 0.05}, {"2", 0.53, 0.0}, {"3", 0.01, 0.1}};
  const auto& edu = s.Pick(kEdu);
  const auto& marriage = s.Pick(kMarriage);
  const double limit = std::round(std::exp(s.Normal(11.8, 0.8)) / 10000.0) * 10000.0 + 10000.0;
  // Repayment status history: -2..8, autocorrelated.
  const double risk = s.Normal(0.0, 1.0);
  std::vector<double> pay(6);
  for (std::size_t m = 0; m < pay.size(); ++m) {
    const double v = std::round(0.9 * risk + s.Normal(-0.6, 0.9));
    pay[m] = std::clamp(v, -2.0, 8.0);
  }
  std::vector<double> bill(6);
  std::vector<double> paid(6);
  const double utilization = std::clamp(s.Normal(0.45, 0.3), 0.0, 1.1);
  for (std::size_t m = 0; m < bill.size(); ++m) {
    bill[m] = std::round(limit * std::clamp(utilization + s.Normal(0.0, 0.05), -0.05, 1.2));
    paid[m] = std::round(std::max(0.0, bill[m]) * std::clamp(s.Normal(0.12, 0.1), 0.0, 1.0));
  }
  const double logit = -1.15 + 1.35 * std::max(pay[0], 0.0) + 0.35 * std::max(pay[1], 0.0) +
                       0.45 * (utilization - 0.45) - 0.25 * (std::log(limit) - 11.8) + edu.effect +
                       marriage.effect - 4.0 * std::min(paid[0] / std::max(bill[0], 1.0), 0.3) +
                       (female ? -0.22 : 0.0) + (age < 40.0 ? -0.12 : 0.0);
  const bool defaulted = logit + 0.9 * s.Logistic() > 0.0;
  std::vector<std::string> row{Int(limit), female ? "2" : "1", edu.name, marriage.name, Int(age)};
  for (double p : pay) row.push_back(Int(p));
  for (double b : bill) row.push_back(Int(b));
  for (double p : paid) row.push_back(Int(p));
  row.push_back(defaulted ? "1" : "0");
  return row;
}

std::vector<std::string> CompasRow(Sampler& s) {
  static const std::vector<Category> kCompasRace = {
      {"African-American", 0.51, 0.0}, {"Caucasian", 0.34, 0.0}, {"Hispanic", 0.088, 0.0},
      {"Other", 0.055, 0.0},           {"Asian", 0.005, 0.0},    {"Native American", 0.002, 0.0}};
  const bool male = s.Bernoulli(0.81);
  const auto& race = s.Pick(kCompasRace);
  const double age = 18.0 + std::floor(55.0 * std::pow(s.Uniform(), 1.9));
  const char* age_cat = age < 25.0 ? "Less than 25" : (age <= 45.0 ? "25 - 45" : "Greater than 45");
  const double propensity = s.Normal(0.0, 1.0);
  auto count = [&](double base) {
    const double lambda = std::exp(base + 0.8 * propensity);
    // Inverse-CDF Poisson; lambda stays small here.
    double u = s.Uniform();
    double p = std::exp(-lambda);
    int k = 0;
    while (u > p && k < 40) {
      u -= p;
      ++k;
      p *= lambda / k;
    }
    return static_cast<double>(k);
  };
  const double juv_fel = count(-3.2);
  const double juv_misd = count(-3.0);
  const double juv_other = count(-2.5);
  const double priors = count(0.7);
  const bool felony = s.Bernoulli(0.64);
  const double stay = std::round(std::exp(s.Normal(1.2 + 0.3 * propensity, 1.3)));
  const bool caucasian = std::string_view(race.name) == "Caucasian";
  const double logit = -0.75 + 0.16 * std::min(priors, 15.0) - 0.045 * (age - 34.0) + 0.35 * juv_fel +
                       0.25 * juv_misd + 0.15 * juv_other + (felony ? 0.15 : 0.0) + 0.05 * std::log1p(stay) +
                       (male ? 0.3 : 0.0) + (caucasian ? -0.75 : 0.0);
  const bool recid = logit + 0.8 * s.Logistic() > 0.0;
  return {male ? "Male" : "Female", Int(age),       age_cat,       race.name,
          Int(juv_fel),             Int(juv_misd),  Int(juv_other), Int(priors),
          felony ? "F" : "M",       Int(stay),      recid ? "1" : "0"};
}

}  // namespace

Fixture AdultFixture() {
  Fixture f;
  f.name = "adult";
  f.schema.columns = {{"age", Kind::kContinuous, Role::kFeature},
                      {"workclass", Kind::kCategorical, Role::kFeature},
                      {"fnlwgt", Kind::kContinuous, Role::kFeature},
                      {"education", Kind::kCategorical, Role::kFeature},
                      {"education-num", Kind::kContinuous, Role::kFeature},
                      {"marital-status", Kind::kCategorical, Role::kFeature},
                      {"occupation", Kind::kCategorical, Role::kFeature},
                      {"relationship", Kind::kCategorical, Role::kFeature},
                      {"race", Kind::kCategorical, Role::kSensitive},
                      {"sex", Kind::kBinary, Role::kSensitive},
                      {"capital-gain", Kind::kContinuous, Role::kFeature},
                      {"capital-loss", Kind::kContinuous, Role::kFeature},
                      {"hours-per-week", Kind::kContinuous, Role::kFeature},
                      {"native-country", Kind::kCategorical, Role::kFeature},
                      {"income", Kind::kBinary, Role::kTarget}};
  f.schema.target_positive = Criterion::Parse("== >50K");
  f.sensitive = {{"sex", Criterion::Parse("== Male")}, {"race", Criterion::Parse("== White")}};
  return f;
}

Fixture CreditFixture() {
  Fixture f;
  f.name = "credit";
  f.schema.columns = {{"LIMIT_BAL", Kind::kContinuous, Role::kFeature},
                      {"SEX", Kind::kBinary, Role::kSensitive},
                      {"EDUCATION", Kind::kCategorical, Role::kFeature},
                      {"MARRIAGE", Kind::kCategorical, Role::kFeature},
                      {"AGE", Kind::kContinuous, Role::kSensitive}};
  for (const char* p : {"PAY_0", "PAY_2", "PAY_3", "PAY_4", "PAY_5", "PAY_6"}) {
    f.schema.columns.push_back({p, Kind::kContinuous, Role::kFeature});
  }
  for (int m = 1; m <= 6; ++m) f.schema.columns.push_back({"BILL_AMT" + std::to_string(m), Kind::kContinuous, Role::kFeature});
  for (int m = 1; m <= 6; ++m) f.schema.columns.push_back({"PAY_AMT" + std::to_string(m), Kind::kContinuous, Role::kFeature});
  f.schema.columns.push_back({"default payment next month", Kind::kBinary, Role::kTarget});
  f.schema.target_positive = Criterion::Parse("== 1");
  f.sensitive = {{"SEX", Criterion::Parse("== 2")}, {"AGE", Criterion::Parse("< 40")}};
  return f;
}

Fixture CompasFixture() {
  Fixture f;
  f.name = "compas";
  f.schema.columns = {{"sex", Kind::kBinary, Role::kSensitive},
                      {"age", Kind::kContinuous, Role::kFeature},
                      {"age_cat", Kind::kCategorical, Role::kFeature},
                      {"race", Kind::kCategorical, Role::kSensitive},
                      {"juv_fel_count", Kind::kContinuous, Role::kFeature},
                      {"juv_misd_count", Kind::kContinuous, Role::kFeature},
                      {"juv_other_count", Kind::kContinuous, Role::kFeature},
                      {"priors_count", Kind::kContinuous, Role::kFeature},
                      {"c_charge_degree", Kind::kBinary, Role::kFeature},
                      {"length_of_stay", Kind::kContinuous, Role::kFeature},
                      {"two_year_recid", Kind::kBinary, Role::kTarget}};
  f.schema.target_positive = Criterion::Parse("== 1");
  f.sensitive = {{"sex", Criterion::Parse("== Male")}, {"race", Criterion::Parse("== Caucasian")}};
  return f;
}

Fixture FixtureByName(std::string_view name) {
  if (name == "adult") return AdultFixture();
  if (name == "credit") return CreditFixture();
  if (name == "compas") return CompasFixture();
  throw Error(ErrorCode::kInvalidArgument, "unknown fixture '" + std::string(name) + "'");
}

std::vector<std::string> FixtureNames() { return {"adult", "credit", "compas"}; }

std::string SimulateCsv(std::string_view name, std::size_t complete_rows, std::uint64_t seed) {
  const Fixture fixture = FixtureByName(name);
  Sampler s(DeriveSeed(seed, HashString(name)));
  std::ostringstream out;
  std::vector<std::string> header;
  for (const auto& c : fixture.schema.columns) header.push_back(c.name);
  csv::WriteRow(out, header);
  // Adult's public file marks unknown workclass / occupation / country as "?".
  constexpr std::size_t kMissingSlots[] = {1, 6, 13};
  for (std::size_t emitted = 0; emitted < complete_rows;) {
    std::vector<std::string> row = name == "adult"    ? AdultRow(s)
                                   : name == "credit" ? CreditRow(s)
                                                      : CompasRow(s);
    if (name == "adult" && s.Bernoulli(0.03)) {
      row[kMissingSlots[s.Index(3)]] = "?";
    } else {
      ++emitted;
    }
    csv::WriteRow(out, row);
  }
  return out.str();
}

TabularDataset SimulateDataset(std::string_view name, std::size_t complete_rows, std::uint64_t seed) {
  const Fixture fixture = FixtureByName(name);
  const RawDataset raw = ParseCsv(SimulateCsv(name, complete_rows, seed), fixture.schema);
  return Preprocess(raw, fixture.sensitive);
}

}  // namespace ppxai
