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

#ifndef SIGNVMC_TRAINING_HPP
#define SIGNVMC_TRAINING_HPP

#include <chrono>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "signvmc/config.hpp"
#include "signvmc/nqs.hpp"
#include "signvmc/optimizer.hpp"
#include "signvmc/sampler.hpp"
#include "signvmc/symbasis.hpp"

namespace signvmc {

struct StepRecord {
  int step = 0;
  double energy = 0.0;
  double energy_per_site = 0.0;
  double variance = 0.0;
  double acceptance = 1.0;
  double tau = 0.0;
  double dtheta_norm = 0.0;
  double seconds = 0.0;
};

// One optimization run: Nesterov look-ahead, fresh batch at the look-ahead
// point, solve, optional secant learning-rate update on the retained batch.
class Trainer {
 public:
  explicit Trainer(const RunConfig &config);
  Trainer(const RunConfig &config, ParameterVector initial_theta);

  StepRecord step();
  // Runs until max_steps; `on_step` sees every record.
  std::vector<StepRecord> run(const std::function<void(const StepRecord &)> &on_step = {});

  const RunConfig &config() const { return config_; }
  const NeuralQuantumState &model() const { return model_; }
  const SymmetryGroup &group() const { return group_; }
  const ParameterVector &theta() const { return theta_; }
  const OptimizerState &state() const { return state_; }
  const std::vector<StepRecord> &history() const { return history_; }
  const HamiltonianSpec &hamiltonian() const { return spec_; }

 private:
  SrStatistics statistics_at(const Eigen::VectorXd &theta, SampleBatch *batch_out);
  double grad_dot_dir_after(const Eigen::VectorXd &theta_new, const SampleBatch &batch,
                            const Eigen::VectorXd &direction);

  RunConfig config_;
  HamiltonianSpec spec_;
  NeuralQuantumState model_;
  SymmetryGroup group_;         // wave-function group
  SymmetryGroup sector_group_;  // representative mode only
  ParameterVector theta_;
  OptimizerState state_;
  std::vector<ChainState> chains_;
  std::vector<SpinConfiguration> sector_;
  std::optional<BlockHamiltonian> block_;
  std::vector<StepRecord> history_;
  int nonergodic_streak_ = 0;
  std::chrono::steady_clock::time_point start_;
};

// CSV with a metadata comment line and a header row.
void write_run_record(std::ostream &out, const RunConfig &config,
                      const std::vector<StepRecord> &records);

nlohmann::json make_checkpoint(const Trainer &trainer);
void write_checkpoint(const std::string &path, const Trainer &trainer);

struct Checkpoint {
  int lx = 0;
  int ly = 0;
  NetworkShape shape;
  int step = 0;
  Eigen::VectorXd theta;
};
Checkpoint read_checkpoint(const std::string &path);

struct TrainingSummary {
  double final_energy_per_site = 0.0;  // mean over the last tenth of the run
  double best_energy_per_site = 0.0;
  std::optional<double> ed_energy_per_site;
  std::optional<double> rel_error_vs_ed;
  int steps = 0;
  nlohmann::json to_json() const;
};

TrainingSummary summarize(const RunConfig &config, const std::vector<StepRecord> &records);

// Full run with output files (learning curve, checkpoints, summary) when
// run.output_dir is set.
TrainingSummary train(const RunConfig &config, std::ostream *log = nullptr);

}  // namespace signvmc

#endif  // SIGNVMC_TRAINING_HPP
