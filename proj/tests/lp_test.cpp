// Copyright 2026 The optdiscrim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optdiscrim/lp.hpp"

#include "gtest/gtest.h"

using namespace optdiscrim;

namespace {

// Appends one slack column per row: A x <= b becomes [A I] (x, s) = b.
RealMatrix with_slacks(const RealMatrix& a) {
  RealMatrix out(a.rows(), a.cols() + a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    out(i, a.cols() + i) = 1.0;
  }
  return out;
}

}  // namespace

TEST(lp, textbook_maximum) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
  const RealMatrix a = with_slacks(RealMatrix(3, 2, {1, 0, 0, 2, 3, 2}));
  const std::vector<double> b{4, 12, 18};
  const std::vector<double> c{3, 5, 0, 0, 0};
  const auto r = lp::maximize(a, b, c);
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_NEAR(r.value, 36.0, 1e-12);
  EXPECT_NEAR(r.x[0], 2.0, 1e-12);
  EXPECT_NEAR(r.x[1], 6.0, 1e-12);
}

TEST(lp, beale_cycling_example_terminates) {
  const RealMatrix a = with_slacks(
      RealMatrix(3, 4, {0.25, -8, -1, 9, 0.5, -12, -0.5, 3, 0, 0, 1, 0}));
  const std::vector<double> b{0, 0, 1};
  const std::vector<double> c{0.75, -20, 0.5, -6, 0, 0, 0};
  const auto r = lp::maximize(a, b, c);
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_NEAR(r.value, 1.25, 1e-12);
}

TEST(lp, infeasible_and_unbounded) {
  // x + y = -1 with x, y >= 0
  auto r = lp::maximize(RealMatrix(1, 2, {1, 1}), std::vector<double>{-1},
                        std::vector<double>{0, 0});
  EXPECT_EQ(r.status, lp::Status::Infeasible);

  // x - y = 0, maximize x
  r = lp::maximize(RealMatrix(1, 2, {1, -1}), std::vector<double>{0}, std::vector<double>{1, 0});
  EXPECT_EQ(r.status, lp::Status::Unbounded);
}

TEST(lp, redundant_equalities) {
  // x + y = 1 stated twice, maximize x
  const auto r = lp::maximize(RealMatrix(2, 2, {1, 1, 2, 2}), std::vector<double>{1, 2},
                              std::vector<double>{1, 0});
  ASSERT_EQ(r.status, lp::Status::Optimal);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(lp, cone_membership) {
  const std::vector<std::vector<double>> square{{1, 1, 1}, {1, -1, 1}, {1, -1, -1}, {1, 1, -1}};
  EXPECT_TRUE(lp::in_cone(square, std::vector<double>{1, 1, 1}));
  EXPECT_TRUE(lp::in_cone(square, std::vector<double>{2, 0.5, -1}));
  EXPECT_FALSE(lp::in_cone(square, std::vector<double>{1, 1.1, 0}));
  EXPECT_FALSE(lp::in_cone(square, std::vector<double>{-1, 0, 0}));
  EXPECT_TRUE(lp::in_cone(square, std::vector<double>{0, 0, 0}));
}
