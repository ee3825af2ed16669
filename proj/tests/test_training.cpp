// Copyright 2026 The signvmc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "signvmc/config.hpp"
#include "signvmc/error.hpp"
#include "signvmc/exact.hpp"
#include "signvmc/training.hpp"

namespace signvmc {
namespace {

using nlohmann::json;

std::filesystem::path scratch_dir() {
  const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
  const auto dir = std::filesystem::temp_directory_path() /
                   (std::string("signvmc_") + info->test_suite_name() + "_" + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Error message of parse_run_config, or "" when it succeeds.
std::string config_error_message(const json &doc) {
  try {
    parse_run_config(doc);
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidConfig);
    return e.what();
  }
  return "";
}

json small_mc_run() {
  return json{{"lattice", {{"lx", 2}, {"ly", 2}}},
              {"network", {{"channels", 4}, {"hidden", 4}}},
              {"sampler", {{"n_samples", 80}, {"n_chains", 4}, {"n_thermalize", 20}}},
              {"run", {{"max_steps", 12}, {"seed", 7}, {"wall_clock", false}}}};
}

struct TableRow {
  const char *name;
  UpdateRule rule;
  double j2, lr;
  LrMode mode;
  double m, beta;
};

class PresetTable : public ::testing::TestWithParam<TableRow> {};

TEST_P(PresetTable, MatchesHyperparameterTable) {
  const auto row = GetParam();
  const RunConfig c = preset(row.name);
  EXPECT_EQ(c.optimizer.rule, row.rule);
  EXPECT_EQ(c.hamiltonian.j2, row.j2);
  EXPECT_EQ(c.optimizer.learning_rate, row.lr);
  EXPECT_EQ(c.optimizer.lr_mode, row.mode);
  EXPECT_EQ(c.optimizer.m, row.m);
  EXPECT_EQ(c.optimizer.beta, row.beta);
  EXPECT_EQ(c.optimizer.effective_beta1(), row.beta);
  EXPECT_EQ(c.optimizer.momentum_mu, 0.5);
  EXPECT_EQ(c.optimizer.lr_cap, 0.2);
  EXPECT_EQ(c.sampler.n_samples, 2000);
  EXPECT_EQ(c.lx, 6);
  EXPECT_EQ(c.ly, 6);
  EXPECT_NO_THROW(c.validate());
}

constexpr LrMode kFixed = LrMode::kFixed;
constexpr LrMode kAdaptive = LrMode::kAdaptive;

INSTANTIATE_TEST_SUITE_P(
    Rows, PresetTable,
    ::testing::Values(
        TableRow{"epstilde-sr-j2-0", UpdateRule::kEpsTildeSr, 0.0, 0.006, kFixed, 11.0, 0.1},
        TableRow{"epstilde-minsr-j2-0", UpdateRule::kEpsTildeMinSr, 0.0, 0.006, kFixed, 11.0, 0.1},
        TableRow{"otilde-sr-j2-0", UpdateRule::kOTildeSr, 0.0, 0.04, kAdaptive, 4.0, 0.2},
        TableRow{"otilde-minsr-j2-0", UpdateRule::kOTildeMinSr, 0.0, 0.04, kAdaptive, 4.0, 0.05},
        TableRow{"epstilde-sr-j2-0.5", UpdateRule::kEpsTildeSr, 0.5, 0.009, kFixed, 11.0, 0.1},
        TableRow{"otilde-sr-j2-0.5", UpdateRule::kOTildeSr, 0.5, 0.04, kAdaptive, 4.0, 0.2},
        TableRow{"otilde-minsr-j2-0.5", UpdateRule::kOTildeMinSr, 0.5, 0.04, kAdaptive, 4.0, 0.09},
        TableRow{"epstilde-sr-j2-0-text-m", UpdateRule::kEpsTildeSr, 0.0, 0.006, kFixed, 4.0, 0.1},
        TableRow{"otilde-sr-j2-0-text-m", UpdateRule::kOTildeSr, 0.0, 0.04, kAdaptive, 11.0, 0.2},
        TableRow{"sr-j2-0", UpdateRule::kSr, 0.0, 0.04, kAdaptive, 1.0, 0.2},
        TableRow{"sr-j2-0.5", UpdateRule::kSr, 0.5, 0.04, kAdaptive, 1.0, 0.2}));

TEST(Config, PresetNamesAreUniqueAndLoadable) {
  const auto names = preset_names();
  EXPECT_EQ(names.size(), 18u);
  for (const auto &n : names) {
    EXPECT_EQ(std::count(names.begin(), names.end(), n), 1);
    EXPECT_NO_THROW(preset(n));
  }
  const std::string msg = config_error_message(json{{"preset", "no-such-preset"}});
  EXPECT_NE(msg.find("preset"), std::string::npos);
  EXPECT_NE(msg.find("no-such-preset"), std::string::npos);
}

TEST(Config, PresetValuesCanBeOverridden) {
  const RunConfig c = parse_run_config(
      json{{"preset", "otilde-sr-j2-0"},
           {"lattice", {{"lx", 4}, {"ly", 4}}},
           {"optimizer", {{"beta", 0.1}}},
           {"sampler", {{"n_samples", 1000}}}});
  EXPECT_EQ(c.lx, 4);
  EXPECT_EQ(c.optimizer.beta, 0.1);
  EXPECT_EQ(c.optimizer.m, 4.0);
  EXPECT_EQ(c.sampler.n_samples, 1000);
}

TEST(Config, InvalidValuesNameTheKey) {
  EXPECT_NE(config_error_message(json{{"optimizer", {{"rule", "adam"}}}}).find("optimizer.rule"),
            std::string::npos);
  EXPECT_NE(config_error_message(json{{"sampler", {{"n_sample", 10}}}}).find("sampler.n_sample"),
            std::string::npos);
  EXPECT_NE(config_error_message(json{{"lattise", {{"lx", 4}}}}).find("lattise"),
            std::string::npos);
  EXPECT_NE(config_error_message(json{{"lattice", {{"lx", "four"}}}}).find("lattice.lx"),
            std::string::npos);
  EXPECT_NE(config_error_message(json{{"symmetry", {{"group", "d4"}}}}).find("symmetry.group"),
            std::string::npos);
  EXPECT_NE(config_error_message(json{{"symmetry", {{"k", {1}}}}}).find("symmetry.k"),
            std::string::npos);
  EXPECT_NE(config_error_message(json{{"sampler", {{"n_samples", 30}, {"n_chains", 4}}}})
                .find("sampler.n_samples"),
            std::string::npos);
  EXPECT_NE(config_error_message(json{{"lattice", {{"lx", 3}, {"ly", 4}}}}).find("lattice"),
            std::string::npos);
  EXPECT_NE(config_error_message(json{{"symmetry", {{"irrep", "E"}}}}).find("symmetry"),
            std::string::npos);
}

TEST(Config, ModeRestrictions) {
  const std::string big = config_error_message(
      json{{"lattice", {{"lx", 6}, {"ly", 6}}}, {"run", {{"mode", "exact_sum"}}}});
  EXPECT_NE(big.find("run.mode"), std::string::npos);
  const std::string rep = config_error_message(
      json{{"lattice", {{"lx", 2}, {"ly", 2}}}, {"symmetry", {{"mode", "representative"}}}});
  EXPECT_NE(rep.find("symmetry.mode"), std::string::npos);
  EXPECT_EQ(config_error_message(json{{"lattice", {{"lx", 2}, {"ly", 2}}},
                                      {"symmetry", {{"mode", "representative"}}},
                                      {"run", {{"mode", "exact_sum"}}}}),
            "");
}

TEST(Config, JsonRoundTripPreservesHash) {
  RunConfig c = preset("otilde-minsr-j2-0.5");
  c.symmetry.group = GroupKind::kSpaceGroup;
  c.symmetry.k = {3, 3};
  c.symmetry.irrep = "B1";
  c.optimizer.beta1 = 0.03;
  c.run.seed = 99;
  const RunConfig back = parse_run_config(c.to_json());
  EXPECT_EQ(back.hash(), c.hash());
  EXPECT_EQ(back.to_json(), c.to_json());
  RunConfig other = c;
  other.run.seed = 100;
  EXPECT_NE(other.hash(), c.hash());
  RunConfig moved = c;
  moved.run.output_dir = "elsewhere";
  EXPECT_EQ(moved.hash(), c.hash());
}

TEST(Config, LoadFromFileReportsPath) {
  const auto dir = scratch_dir();
  const auto path = dir / "bad.json";
  std::ofstream(path) << R"({"optimizer": {"rule": "bogus"}})";
  try {
    load_run_config(path.string());
    FAIL() << "expected InvalidConfig";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidConfig);
    EXPECT_NE(std::string(e.what()).find(path.string()), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("optimizer.rule"), std::string::npos);
  }
  std::ofstream(dir / "syntax.json") << "{ not json";
  EXPECT_THROW(load_run_config((dir / "syntax.json").string()), Error);
  EXPECT_THROW(load_run_config((dir / "missing.json").string()), Error);
}

TEST(Training, SameSeedGivesIdenticalRecords) {
  const RunConfig c = parse_run_config(small_mc_run());
  std::ostringstream a, b;
  Trainer ta(c);
  Trainer tb(c);
  write_run_record(a, c, ta.run());
  write_run_record(b, c, tb.run());
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(ta.theta().values(), tb.theta().values());
  const std::string text = a.str();
  EXPECT_EQ(text.rfind("# config_hash=" + c.hash() + " seed=7\n", 0), 0u);
  EXPECT_NE(text.find("\nstep,energy,energy_per_site,variance,acceptance,tau,dtheta_norm,seconds\n"),
            std::string::npos);

  json other = small_mc_run();
  other["run"]["seed"] = 8;
  const RunConfig c2 = parse_run_config(other);
  Trainer tc(c2);
  tc.run();
  EXPECT_NE(tc.theta().values(), ta.theta().values());
}

TEST(Training, TrainWritesByteIdenticalFiles) {
  const auto dir = scratch_dir();
  json doc = small_mc_run();
  doc["run"]["output_dir"] = (dir / "a").string();
  train(parse_run_config(doc));
  doc["run"]["output_dir"] = (dir / "b").string();
  train(parse_run_config(doc));
  const std::string curve_a = read_file(dir / "a" / "learning_curve.csv");
  EXPECT_FALSE(curve_a.empty());
  EXPECT_EQ(curve_a, read_file(dir / "b" / "learning_curve.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "a" / "checkpoint.json"));
  const json summary = json::parse(read_file(dir / "a" / "summary.json"));
  EXPECT_EQ(summary.at("steps").get<int>(), 12);
  EXPECT_TRUE(summary.at("rel_error_vs_ed").is_number());
  EXPECT_NEAR(summary.at("ed_energy_per_site").get<double>(), -0.5, 1e-12);
}

TEST(Training, CheckpointRoundTripAndResume) {
  const auto dir = scratch_dir();
  const RunConfig c = parse_run_config(small_mc_run());
  Trainer t(c);
  for (int i = 0; i < 3; ++i) t.step();
  const auto path = (dir / "ckpt.json").string();
  write_checkpoint(path, t);
  const Checkpoint ck = read_checkpoint(path);
  EXPECT_EQ(ck.lx, 2);
  EXPECT_EQ(ck.ly, 2);
  EXPECT_EQ(ck.shape.channels, 4);
  EXPECT_EQ(ck.shape.hidden, 4);
  EXPECT_EQ(ck.step, 3);
  EXPECT_EQ(ck.theta, t.theta().values());

  const Trainer resumed(c, ParameterVector(t.model().layout(), ck.theta));
  EXPECT_EQ(resumed.theta().values(), t.theta().values());

  json wrong = small_mc_run();
  wrong["network"]["channels"] = 5;
  const RunConfig c5 = parse_run_config(wrong);
  try {
    Trainer bad(c5, ParameterVector(t.model().layout(), ck.theta));
    FAIL() << "expected CheckpointMismatch";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCheckpointMismatch);
  }
  std::ofstream(dir / "broken.json") << R"({"lattice": {"lx": 2}})";
  EXPECT_THROW(read_checkpoint((dir / "broken.json").string()), Error);
}

TEST(Training, SummaryUsesTrailingTenth) {
  RunConfig c = parse_run_config(small_mc_run());
  std::vector<StepRecord> records(20);
  for (int i = 0; i < 20; ++i) {
    records[i].step = i;
    records[i].energy_per_site = -0.1 * i;
  }
  records[5].energy_per_site = -5.0;
  const TrainingSummary s = summarize(c, records);
  EXPECT_EQ(s.steps, 20);
  EXPECT_DOUBLE_EQ(s.final_energy_per_site, -0.5 * (1.8 + 1.9));
  EXPECT_EQ(s.best_energy_per_site, -5.0);
  ASSERT_TRUE(s.ed_energy_per_site.has_value());
  EXPECT_NEAR(*s.ed_energy_per_site, -0.5, 1e-12);
  EXPECT_NEAR(*s.rel_error_vs_ed, std::abs((-1.85 + 0.5) / -0.5), 1e-12);
  c.run.ed_reference = false;
  EXPECT_FALSE(summarize(c, records).rel_error_vs_ed.has_value());
}

TEST(Training, FourByFourPresetSummaryHasEdReference) {
  json doc{{"preset", "otilde-sr-j2-0"},
           {"lattice", {{"lx", 4}, {"ly", 4}}},
           {"network", {{"channels", 4}}},
           {"sampler", {{"n_samples", 40}, {"n_chains", 4}, {"n_thermalize", 5}}},
           {"run", {{"max_steps", 2}, {"wall_clock", false}}}};
  const TrainingSummary s = train(parse_run_config(doc));
  ASSERT_TRUE(s.rel_error_vs_ed.has_value());
  EXPECT_NEAR(*s.ed_energy_per_site, -11.228483208 / 16.0, 1e-9);
}

TEST(Training, ExactSumShortRunLowersEnergy) {
  for (const char *mode : {"augment", "representative"}) {
    json doc{{"preset", "otilde-sr-j2-0"},
             {"lattice", {{"lx", 2}, {"ly", 2}}},
             {"network", {{"channels", 4}, {"hidden", 4}}},
             {"symmetry", {{"mode", mode}}},
             {"run", {{"max_steps", 60}, {"mode", "exact_sum"}, {"wall_clock", false}}}};
    Trainer t(parse_run_config(doc));
    const auto records = t.run();
    EXPECT_LT(records.back().energy, records.front().energy) << mode;
    EXPECT_GE(records.back().energy, -2.0 - 1e-9) << mode;
  }
}

}  // namespace
}  // namespace signvmc
