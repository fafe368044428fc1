// Copyright 2026 The gopuq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gopuq/phone_core.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "gopuq/error.hpp"
#include "test_util.hpp"

namespace gopuq {
namespace {

TEST(PhoneInventoryTest, IndexOfFollowsOrder) {
  const PhoneInventory inv({"a", "b", "c"});
  EXPECT_EQ(inv.IndexOf("a"), 0u);
  EXPECT_EQ(inv.IndexOf("b"), 1u);
  EXPECT_EQ(inv.size(), 3u);
  EXPECT_FALSE(inv.Find("z").has_value());
}

TEST(PhoneInventoryTest, UnknownLabel) {
  const PhoneInventory inv({"a", "b", "c"});
  EXPECT_ERROR_KIND(inv.IndexOf("z"), ErrorKind::kUnknownLabel);
}

TEST(PhoneInventoryTest, RejectsBadLabelSets) {
  EXPECT_ERROR_KIND(PhoneInventory({"a"}), ErrorKind::kConfig);
  EXPECT_ERROR_KIND(PhoneInventory({"a", "a"}), ErrorKind::kDuplicateKey);
  EXPECT_ERROR_KIND(PhoneInventory({"a", ""}), ErrorKind::kParse);
  EXPECT_ERROR_KIND(PhoneInventory({"a", "b"}, {"sil"}), ErrorKind::kUnknownLabel);
}

TEST(PhoneInventoryTest, DefaultSkipLabelsPresentOnly) {
  const PhoneInventory inv({"a", "sil", "sp"});
  EXPECT_FALSE(inv.is_skip(0));
  EXPECT_TRUE(inv.is_skip(1));
  EXPECT_TRUE(inv.is_skip(2));
  EXPECT_EQ(inv.skip_labels().size(), 2u);

  const PhoneInventory explicit_skip({"a", "sil", "x"}, {"x"});
  EXPECT_FALSE(explicit_skip.is_skip(1));
  EXPECT_TRUE(explicit_skip.is_skip(2));
}

TEST(FrameLogitMatrixTest, Validates) {
  EXPECT_ERROR_KIND(FrameLogitMatrix("u", 0, 2, {}), ErrorKind::kEmptySegment);
  EXPECT_ERROR_KIND(FrameLogitMatrix("u", 1, 2, {1.0f}), ErrorKind::kWidthMismatch);
  EXPECT_ERROR_KIND(FrameLogitMatrix("u", 1, 2, {1.0f, NAN}), ErrorKind::kNonFinite);
  EXPECT_ERROR_KIND(FrameLogitMatrix("u", 1, 2, {INFINITY, 0.0f}),
                    ErrorKind::kNonFinite);
  const auto m = FrameLogitMatrix::FromRows("u", {{1, 2}, {3, 4}});
  EXPECT_EQ(m.row(1)[0], 3.0f);
  EXPECT_ERROR_KIND(m.CheckWidth(PhoneInventory({"a", "b", "c"})),
                    ErrorKind::kWidthMismatch);
}

TEST(AlignmentTest, ValidateRejectsEmptyAndOverlap) {
  UtteranceAlignment ok{"u", {{0, 0, 2}, {1, 2, 3}}};
  EXPECT_NO_THROW(ok.Validate());
  UtteranceAlignment empty{"u", {{0, 2, 2}}};
  EXPECT_ERROR_KIND(empty.Validate(), ErrorKind::kEmptySegment);
  UtteranceAlignment overlap{"u", {{0, 0, 3}, {1, 2, 4}}};
  EXPECT_ERROR_KIND(overlap.Validate(), ErrorKind::kOverlap);
}

TEST(AlignmentTest, ScorableIgnoresSkipPhones) {
  const PhoneInventory inv({"a", "sil"});
  EXPECT_FALSE((UtteranceAlignment{"u", {{1, 0, 2}}}.Scorable(inv)));
  EXPECT_TRUE((UtteranceAlignment{"u", {{1, 0, 2}, {0, 2, 3}}}.Scorable(inv)));
}

TEST(PhonePriorTest, ValidatesAndLogs) {
  const PhonePrior p({0.5, 0.25, 0.25});
  EXPECT_DOUBLE_EQ(p.log_prob(0), std::log(0.5));
  EXPECT_ERROR_KIND(PhonePrior({0.5, 0.0, 0.5}), ErrorKind::kConfig);
  EXPECT_ERROR_KIND(PhonePrior({0.25, 0.25}), ErrorKind::kPriorSum);
  const PhonePrior u = PhonePrior::Uniform(4);
  EXPECT_DOUBLE_EQ(u.prob(3), 0.25);
}

TEST(GopMethodTest, ParseAndName) {
  const GopMethod m = GopMethod::Parse("prior:maxlogit");
  EXPECT_EQ(m.normalization, Normalization::kPrior);
  EXPECT_EQ(m.scoring, Scoring::kMaxLogit);
  EXPECT_EQ(m.Name(), "prior:maxlogit");
  EXPECT_DOUBLE_EQ(GopMethod::Parse("scale:margin", 2.5).temperature, 2.5);
}

TEST(GopMethodTest, ParseErrorsAreUsage) {
  EXPECT_ERROR_KIND(GopMethod::Parse("maxlogit"), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(GopMethod::Parse("none:bogus"), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(GopMethod::Parse("odd:gmm"), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(GopMethod::Parse("scale:gmm"), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(GopMethod::Parse("scale:gmm", 0.0), ErrorKind::kUsage);
  EXPECT_ERROR_KIND(GopMethod::Parse("prior:dnn"), ErrorKind::kUsage);
}

TEST(GopMethodTest, ValidateIsConfig) {
  GopMethod m{Normalization::kScale, Scoring::kGmm, -1.0};
  EXPECT_ERROR_KIND(m.Validate(), ErrorKind::kConfig);
}

TEST(GopMethodTest, DefaultGridOrder) {
  const auto grid = DefaultMethodGrid(2.0);
  ASSERT_EQ(grid.size(), 15u);
  const char* expected[] = {
      "none:gmm",          "none:nn",           "none:dnn",
      "none:entropy",      "none:margin",       "none:maxlogit",
      "none:logitmargin",  "scale:entropy",     "scale:margin",
      "scale:maxlogit",    "scale:logitmargin", "prior:entropy",
      "prior:margin",      "prior:maxlogit",    "prior:logitmargin"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(grid[i].Name(), expected[i]);
    EXPECT_DOUBLE_EQ(grid[i].temperature,
                     grid[i].normalization == Normalization::kScale ? 2.0 : 1.0);
  }
}

TEST(ErrorTest, CategoriesMapToExitCodes) {
  EXPECT_EQ(CategoryOf(ErrorKind::kUsage), ErrorCategory::kUsage);
  EXPECT_EQ(CategoryOf(ErrorKind::kConfig), ErrorCategory::kUsage);
  EXPECT_EQ(CategoryOf(ErrorKind::kIo), ErrorCategory::kIo);
  EXPECT_EQ(CategoryOf(ErrorKind::kBadMagic), ErrorCategory::kValidation);
  EXPECT_EQ(static_cast<int>(ErrorCategory::kIo), 3);
}

}  // namespace
}  // namespace gopuq
