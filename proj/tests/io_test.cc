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

#include <gtest/gtest.h>

#include "ppxai/dataset_io.h"
#include "ppxai/explanation.h"
#include "ppxai/fixtures.h"
#include "test_util.h"

namespace ppxai {
namespace {

void ExpectSameDataset(const TabularDataset& a, const TabularDataset& b) {
  EXPECT_EQ(a.feature_names, b.feature_names);
  EXPECT_EQ(a.target_name, b.target_name);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.target, b.target);
  EXPECT_EQ(a.sensitive, b.sensitive);
  EXPECT_EQ(a.record_ids, b.record_ids);
  EXPECT_EQ(a.sensitive_specs, b.sensitive_specs);
  ASSERT_EQ(a.groups.size(), b.groups.size());
}

TEST(DatasetIoTest, CsvRoundTripIsExact) {
  const auto& split = testing::FixtureSplit("adult", 500, 1);
  const TabularDataset& ds = split.target_train;
  const TabularDataset back = DatasetFromCsv(DatasetToCsv(ds), LayoutFromJson(LayoutToJson(ds)));
  ExpectSameDataset(ds, back);
}

TEST(DatasetIoTest, FileRoundTripWithSchemaSidecar) {
  const auto dir = testing::FreshTempDir("dataset_io");
  const auto& split = testing::FixtureSplit("compas", 300, 4);
  SaveDataset(split.aux_attack_test, dir / "aux.csv");
  EXPECT_TRUE(std::filesystem::exists(SchemaPathFor(dir / "aux.csv")));
  ExpectSameDataset(split.aux_attack_test, LoadDataset(dir / "aux.csv"));
  EXPECT_EQ(testing::ThrownCode([&] { LoadDataset(dir / "absent.csv"); }), ErrorCode::kIo);
}

TEST(DatasetIoTest, SplitRoundTrip) {
  const auto dir = testing::FreshTempDir("split_io");
  const auto& split = testing::FixtureSplit("credit", 300, 5);
  SaveSplit(split, dir);
  const SplitBundle back = LoadSplit(dir);
  EXPECT_EQ(back.seed, split.seed);
  ExpectSameDataset(split.target_train, back.target_train);
  ExpectSameDataset(split.aux_attack_train, back.aux_attack_train);
  ExpectSameDataset(split.aux_attack_test, back.aux_attack_test);
}

TEST(DatasetIoTest, SensitiveSpecJson) {
  const SensitiveSpec spec{"age", Criterion::Parse("< 40")};
  EXPECT_EQ(SensitiveSpecFromJson(ToJson(spec)), spec);
}

ExplanationMatrix SmallExplanation() {
  ExplanationMatrix m;
  m.method = ExplainerMethod::kShap;
  m.feature_names = {"a", "b=x", "c"};
  m.values.resize(3, 3);
  m.values << 0.1, -2.5e-17, 1.0 / 3.0, 4, 5, 6, -7, 8e300, 9;
  m.record_ids = {10, 3, 7};
  m.config_digest = "digest";
  m.metadata["noise"] = {{"variant", "dp-laplace"}};
  return m;
}

TEST(ExplanationIoTest, RoundTripIsBitExact) {
  const auto dir = testing::FreshTempDir("expl_io");
  const ExplanationMatrix m = SmallExplanation();
  SaveExplanation(m, dir / "e.csv");
  EXPECT_TRUE(std::filesystem::exists(SidecarPathFor(dir / "e.csv")));
  const ExplanationMatrix back = LoadExplanation(dir / "e.csv");
  EXPECT_EQ(back.method, m.method);
  EXPECT_EQ(back.feature_names, m.feature_names);
  EXPECT_EQ(back.values, m.values);
  EXPECT_EQ(back.record_ids, m.record_ids);
  EXPECT_EQ(back.config_digest, m.config_digest);
  EXPECT_EQ(back.metadata["noise"]["variant"], "dp-laplace");
}

TEST(ExplanationIoTest, RowsForAndConcatenate) {
  const ExplanationMatrix m = SmallExplanation();
  const std::vector<RecordId> ids = {7, 10};
  const Matrix rows = RowsFor(m, ids);
  EXPECT_EQ(rows.row(0), m.values.row(2));
  EXPECT_EQ(rows.row(1), m.values.row(0));
  const std::vector<RecordId> missing = {99};
  EXPECT_TRUE(testing::ThrownCode([&] { RowsFor(m, missing); }).has_value());
  EXPECT_TRUE(testing::ThrownCode([&] { Concatenate(m, m); }).has_value());
  ExplanationMatrix other = m;
  other.record_ids = {1, 2, 4};
  EXPECT_EQ(Concatenate(m, other).size(), 6u);
}

TEST(ExplanationIoTest, ValidateRejectsBadShapes) {
  ExplanationMatrix m = SmallExplanation();
  m.record_ids.pop_back();
  EXPECT_TRUE(testing::ThrownCode([&] { m.Validate(); }).has_value());
  m = SmallExplanation();
  m.values(0, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(testing::ThrownCode([&] { m.Validate(); }).has_value());
  EXPECT_EQ(ParseExplainerMethod("LIME"), ExplainerMethod::kLime);
  EXPECT_EQ(testing::ThrownCode([] { ParseExplainerMethod("gradcam"); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace ppxai
