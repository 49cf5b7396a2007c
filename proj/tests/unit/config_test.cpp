// Copyright 2026 The QAKGE Authors.
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

#include "qakge/config.hpp"
#include "support.hpp"

namespace qakge {
namespace {

using nlohmann::json;

TEST(RunConfig, EmptyObjectGivesDefaults) {
  const auto c = run_config_from_json(json::object());
  EXPECT_EQ(c.hp.k, 50u);
  EXPECT_EQ(c.hp.eta, 5u);
  EXPECT_EQ(c.hp.batch_size, 64u);
  EXPECT_EQ(c.hp.learning_rate, 1e-5);
  EXPECT_EQ(c.hp.margin, 0.5);
  EXPECT_EQ(c.hp.reg_p, 4);
  EXPECT_EQ(c.generator.n_contexts, 41);
  EXPECT_EQ(c.baseline.threshold, 0.7);
  EXPECT_EQ(c.planner.tau, 0.5);
  EXPECT_EQ(c.planner.top_m, 3u);
  EXPECT_EQ(c.test_fraction, 0.2);
  EXPECT_FALSE(c.seed.has_value());
}

TEST(RunConfig, ReadsEverySection) {
  const auto c = run_config_from_json(json::parse(R"({
    "hyperparams": {"k": 16, "learning_rate": 1e-4, "corruption_mode": "batch",
                    "fixed_beta": 1.0, "num_threads": 2},
    "generator": {"n_contexts": 5, "attrs_per_context": [2, 3], "domain_pool": ["x"]},
    "baseline": {"p": 0.5, "dim": 8, "threshold": 0.6},
    "planner": {"tau": 0.8, "top_m": 2},
    "split": {"test_fraction": 0.3}
  })"));
  EXPECT_EQ(c.hp.k, 16u);
  EXPECT_EQ(c.hp.learning_rate, 1e-4);
  EXPECT_EQ(c.hp.corruption_mode, CorruptionMode::kBatch);
  EXPECT_EQ(c.hp.fixed_beta, 1.0);
  EXPECT_EQ(c.hp.num_threads, 2u);
  EXPECT_EQ(c.generator.n_contexts, 5);
  EXPECT_EQ(c.generator.attrs_per_context.lo, 2);
  EXPECT_EQ(c.generator.domain_pool, std::vector<std::string>{"x"});
  EXPECT_EQ(c.baseline.n2v.p, 0.5);
  EXPECT_EQ(c.baseline.n2v.dim, 8u);
  EXPECT_EQ(c.baseline.threshold, 0.6);
  EXPECT_EQ(c.planner.tau, 0.8);
  EXPECT_EQ(c.planner.top_m, 2u);
  EXPECT_EQ(c.test_fraction, 0.3);
}

TEST(RunConfig, TopLevelSeedAppliesEverywhere) {
  const auto c = run_config_from_json(json::parse(R"({"seed": 9, "hyperparams": {"seed": 1}})"));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.hp.seed, 9u);
  EXPECT_EQ(c.generator.seed, 9u);
  EXPECT_EQ(c.baseline.n2v.seed, 9u);
}

void expect_parse_error(const std::string& text, const std::string& fragment) {
  try {
    run_config_from_json(json::parse(text));
    FAIL() << "accepted " << text;
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(RunConfig, RejectsUnknownKeysWithPath) {
  expect_parse_error(R"({"hyperparams": {"kk": 3}})", "hyperparams.kk");
  expect_parse_error(R"({"bogus": 1})", "bogus");
  expect_parse_error(R"({"planner": {"tau": 0.5, "extra": true}})", "planner.extra");
}

TEST(RunConfig, RejectsWrongTypes) {
  expect_parse_error(R"({"hyperparams": {"k": "fifty"}})", "hyperparams.k");
  expect_parse_error(R"({"hyperparams": {"k": -3}})", "hyperparams.k");
  expect_parse_error(R"({"generator": {"attrs_per_context": [3]}})", "attrs_per_context");
  expect_parse_error(R"({"hyperparams": []})", "hyperparams");
  expect_parse_error(R"({"hyperparams": {"corruption_mode": "some"}})", "corruption_mode");
}

TEST(RunConfig, RejectsOutOfDomainValues) {
  expect_parse_error(R"({"split": {"test_fraction": 1.5}})", "test_fraction");
  expect_parse_error(R"({"hyperparams": {"k": 0}})", "k must");
  expect_parse_error(R"({"baseline": {"threshold": 2}})", "threshold");
  expect_parse_error(R"({"planner": {"top_m": 0}})", "top_m");
  expect_parse_error(R"({"generator": {"attrs_per_context": [5, 2]}})", "attrs_per_context");
  expect_parse_error(R"({"hyperparams": {"fixed_beta": 1.5}})", "fixed_beta");
}

TEST(RunConfig, LoadsFromFile) {
  testing::TempDir dir;
  testing::write_file(dir / "c.json", R"({"hyperparams": {"epochs": 12}})");
  EXPECT_EQ(load_run_config(dir / "c.json").hp.epochs, 12u);
  testing::write_file(dir / "bad.json", "{not json");
  EXPECT_THROW(load_run_config(dir / "bad.json"), Error);
}

TEST(GridFile, WrappedAndBareForms) {
  auto [g1, base1] = grid_from_json(json::parse(R"({"learning_rate": [1e-3, 1e-5]})"));
  EXPECT_EQ(g1.learning_rate.size(), 2u);
  EXPECT_FALSE(base1.has_value());
  auto [g2, base2] = grid_from_json(json::parse(
      R"({"base": {"k": 8, "epochs": 3}, "grid": {"corruption_mode": ["all", "batch"]}})"));
  ASSERT_TRUE(base2.has_value());
  EXPECT_EQ(base2->k, 8u);
  EXPECT_EQ(g2.corruption_mode.size(), 2u);
}

TEST(GridFile, Errors) {
  EXPECT_THROW(grid_from_json(json::object()), Error);
  EXPECT_THROW(grid_from_json(json::parse(R"({"k": [8, "x"]})")), Error);
  EXPECT_THROW(grid_from_json(json::parse(R"({"depth": [1]})")), Error);
  EXPECT_THROW(grid_from_json(json::parse(R"({"base": {"k": 8}})")), Error);
}

}  // namespace
}  // namespace qakge
