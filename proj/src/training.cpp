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

#include "signvmc/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "signvmc/error.hpp"
#include "signvmc/exact.hpp"
#include "signvmc/parallel.hpp"

namespace signvmc {
namespace {

std::span<const double> as_span(const Eigen::VectorXd &v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::string format_row(const StepRecord &r) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.6g,%.8g,%.8g,%.3f", r.step, r.energy,
                r.energy_per_site, r.variance, r.acceptance, r.tau, r.dtheta_norm, r.seconds);
  return buf;
}

constexpr const char *kCsvHeader = "step,energy,energy_per_site,variance,acceptance,tau,dtheta_norm,seconds";

std::string metadata_line(const RunConfig &config) {
  return "# config_hash=" + config.hash() + " seed=" + std::to_string(config.run.seed);
}

}  // namespace

Trainer::Trainer(const RunConfig &config)
    : Trainer(config, NeuralQuantumState(config.geometry(), config.network.shape)
                          .random_parameters(config.run.seed, config.network.init_scale,
                                             config.network.phase_init_scale)) {}

Trainer::Trainer(const RunConfig &config, ParameterVector initial_theta)
    : config_(config),
      spec_(config.hamiltonian_spec()),
      model_(spec_.geometry, config.network.shape),
      theta_(std::move(initial_theta)) {
  config_.validate();
  if (theta_.size() != model_.n_parameters()) {
    throw Error(ErrorKind::kCheckpointMismatch, "initial parameters do not match the network");
  }
  group_ = config_.wavefunction_group();
  state_ = OptimizerState::Initial(model_.n_parameters(), config_.optimizer);
  if (config_.symmetry.mode == SymmetryMode::kRepresentative) {
    sector_group_ = config_.sector_group();
    block_ = build_block_hamiltonian(spec_, sector_group_,
                                     build_symmetrized_basis(sector_group_, spec_.geometry));
  } else if (config_.run.mode == RunMode::kExactSum) {
    sector_ = enumerate_sector(spec_.geometry);
  } else {
    chains_ = make_chains(spec_.geometry, config_.sampler.n_chains, config_.run.seed);
  }
  start_ = std::chrono::steady_clock::now();
}

SrStatistics Trainer::statistics_at(const Eigen::VectorXd &theta, SampleBatch *batch_out) {
  const auto span = as_span(theta);
  if (block_) return representative_statistics(model_, span, *block_, sector_group_);
  SampleBatch batch;
  if (config_.run.mode == RunMode::kExactSum) {
    batch = exact_batch(model_, span, group_, sector_);
  } else {
    const SamplerConfig &s = config_.sampler;
    const int therm = history_.empty() ? s.n_thermalize : s.n_thermalize_step;
    batch = sample_batch(chains_, model_, span, group_, s.n_samples, s.n_sweeps_between, therm,
                         s.p_nn);
  }
  SrStatistics stats = assemble_statistics(batch, model_, span, group_, spec_);
  if (batch_out) *batch_out = std::move(batch);
  return stats;
}

double Trainer::grad_dot_dir_after(const Eigen::VectorXd &theta_new, const SampleBatch &batch,
                                   const Eigen::VectorXd &direction) {
  const auto span = as_span(theta_new);
  if (block_) {
    return energy_gradient(representative_statistics(model_, span, *block_, sector_group_))
        .dot(direction);
  }
  // Old configurations, new wave function: weights w_old |psi_new / psi_old|^2.
  const int n = static_cast<int>(batch.size());
  std::vector<char> keep(static_cast<std::size_t>(n), 0);
  std::vector<double> log_w(static_cast<std::size_t>(n), 0.0);
  Eigen::MatrixXcd o(n, model_.n_parameters());
  Eigen::VectorXcd eloc(n);
  parallel_for(n, [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const LogPsiValue &old = batch.log_psis[k];
    if (old.is_zero || (!batch.weights.empty() && batch.weights[k] <= 0.0)) return;
    CachedWavefunction wf(model_, span, group_);
    wf.reset(batch.configs[k]);
    const LogPsiValue now = wf.log_psi();
    if (now.is_zero) return;
    o.row(i) = wf.log_derivatives().transpose();
    eloc(i) = wf.local_energy(spec_);
    double lw = 2.0 * (now.log_amplitude - old.log_amplitude);
    if (!batch.weights.empty()) lw += std::log(batch.weights[k]);
    log_w[k] = lw;
    keep[k] = 1;
  });
  std::vector<int> rows;
  double lmax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (keep[static_cast<std::size_t>(i)]) {
      rows.push_back(i);
      lmax = std::max(lmax, log_w[static_cast<std::size_t>(i)]);
    }
  }
  if (rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  const int m = static_cast<int>(rows.size());
  Eigen::MatrixXcd o_kept(m, o.cols());
  Eigen::VectorXcd e_kept(m);
  std::vector<double> w(static_cast<std::size_t>(m));
  for (int r = 0; r < m; ++r) {
    o_kept.row(r) = o.row(rows[static_cast<std::size_t>(r)]);
    e_kept(r) = eloc(rows[static_cast<std::size_t>(r)]);
    w[static_cast<std::size_t>(r)] = std::exp(log_w[static_cast<std::size_t>(rows[static_cast<std::size_t>(r)])] - lmax);
  }
  return energy_gradient(build_statistics(o_kept, e_kept, w)).dot(direction);
}

StepRecord Trainer::step() {
  const OptimizerConfig &opt = config_.optimizer;
  const Eigen::VectorXd theta_la = theta_.values() + opt.momentum_mu * state_.velocity;
  SampleBatch batch;
  const SrStatistics stats = statistics_at(theta_la, &batch);
  const Eigen::VectorXd direction = solve_update(stats, opt);
  if (!std::isfinite(stats.energy_mean.real()) || !direction.allFinite()) {
    throw Error(ErrorKind::kNoConvergence,
                "non-finite energy or update at step " + std::to_string(history_.size()));
  }

  StepRecord rec;
  rec.step = static_cast<int>(history_.size());
  rec.energy = stats.energy_mean.real();
  rec.energy_per_site = rec.energy / spec_.geometry.n_sites;
  rec.variance = stats.energy_variance;
  rec.acceptance = (block_ || config_.run.mode == RunMode::kExactSum) ? 1.0 : batch.acceptance();
  rec.tau = state_.tau;
  rec.dtheta_norm = direction.norm();

  double tau_next = state_.tau;
  if (opt.lr_mode == LrMode::kAdaptive) {
    const double g_old = energy_gradient(stats).dot(direction);
    const Eigen::VectorXd theta_new = theta_la + state_.tau * direction;
    const double g_new = grad_dot_dir_after(theta_new, batch, direction);
    tau_next = std::isfinite(g_new) ? adaptive_lr(state_, g_old, g_new, opt)
                                    : std::min(opt.lr_growth * state_.tau, opt.lr_cap);
    state_.last_grad_dot_dir = g_old;
  }
  // The solver output is a descent direction; the Nesterov step subtracts
  // tau times its argument.
  nag_step(state_, theta_.values(), -direction, opt);
  state_.tau = tau_next;

  if (!block_ && config_.run.mode == RunMode::kMonteCarlo) {
    nonergodic_streak_ = batch.non_ergodic ? nonergodic_streak_ + 1 : 0;
    if (nonergodic_streak_ >= config_.run.nonergodic_patience) {
      throw Error(ErrorKind::kNonErgodic,
                  "acceptance stayed below " + std::to_string(kNonErgodicAcceptance) + " for " +
                      std::to_string(nonergodic_streak_) + " consecutive steps (step " +
                      std::to_string(rec.step) + ")");
    }
  }
  if (config_.run.wall_clock) {
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  history_.push_back(rec);
  return rec;
}

std::vector<StepRecord> Trainer::run(const std::function<void(const StepRecord &)> &on_step) {
  while (static_cast<int>(history_.size()) < config_.run.max_steps) {
    const StepRecord r = step();
    if (on_step) on_step(r);
  }
  return history_;
}

void write_run_record(std::ostream &out, const RunConfig &config,
                      const std::vector<StepRecord> &records) {
  out << metadata_line(config) << '\n' << kCsvHeader << '\n';
  for (const StepRecord &r : records) out << format_row(r) << '\n';
}

nlohmann::json make_checkpoint(const Trainer &trainer) {
  const ParameterLayout &l = trainer.model().layout();
  const RunConfig &c = trainer.config();
  nlohmann::json j;
  j["format"] = "signvmc-checkpoint";
  j["version"] = 1;
  j["lattice"] = {{"lx", c.lx}, {"ly", c.ly}};
  j["network"] = {{"channels", c.network.shape.channels}, {"hidden", c.network.shape.hidden}};
  j["symmetry"] = {{"group", GroupKindName(c.symmetry.group)},
                   {"irrep", c.symmetry.irrep},
                   {"k", {c.symmetry.k.qx, c.symmetry.k.qy}},
                   {"mode", SymmetryModeName(c.symmetry.mode)}};
  j["partitions"] = {{"amplitude", {l.amplitude_offset, l.amplitude_length}},
                     {"phase", {l.phase_offset, l.phase_length}}};
  j["step"] = trainer.history().size();
  j["tau"] = trainer.state().tau;
  j["config_hash"] = c.hash();
  const Eigen::VectorXd &theta = trainer.theta().values();
  j["theta"] = std::vector<double>(theta.data(), theta.data() + theta.size());
  const Eigen::VectorXd &v = trainer.state().velocity;
  j["velocity"] = std::vector<double>(v.data(), v.data() + v.size());
  return j;
}

void write_checkpoint(const std::string &path, const Trainer &trainer) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write checkpoint '" + path + "'");
  out << make_checkpoint(trainer).dump() << '\n';
}

Checkpoint read_checkpoint(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open checkpoint '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kCheckpointMismatch, path + ": " + e.what());
  }
  if (j.value("format", "") != "signvmc-checkpoint" || j.value("version", 0) != 1) {
    throw Error(ErrorKind::kCheckpointMismatch, path + ": not a version-1 signvmc checkpoint");
  }
  try {
    Checkpoint c;
    c.lx = j.at("lattice").at("lx").get<int>();
    c.ly = j.at("lattice").at("ly").get<int>();
    c.shape.channels = j.at("network").at("channels").get<int>();
    c.shape.hidden = j.at("network").at("hidden").get<int>();
    c.step = j.at("step").get<int>();
    const auto theta = j.at("theta").get<std::vector<double>>();
    c.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size()));
    return c;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::kCheckpointMismatch, path + ": " + e.what());
  }
}

nlohmann::json TrainingSummary::to_json() const {
  nlohmann::json j;
  j["steps"] = steps;
  j["final_energy_per_site"] = final_energy_per_site;
  j["best_energy_per_site"] = best_energy_per_site;
  j["ed_energy_per_site"] = ed_energy_per_site ? nlohmann::json(*ed_energy_per_site) : nlohmann::json();
  j["rel_error_vs_ed"] = rel_error_vs_ed ? nlohmann::json(*rel_error_vs_ed) : nlohmann::json();
  return j;
}

TrainingSummary summarize(const RunConfig &config, const std::vector<StepRecord> &records) {
  TrainingSummary s;
  s.steps = static_cast<int>(records.size());
  if (!records.empty()) {
    const std::size_t window = std::max<std::size_t>(1, records.size() / 10);
    double acc = 0.0;
    for (std::size_t i = records.size() - window; i < records.size(); ++i) acc += records[i].energy_per_site;
    s.final_energy_per_site = acc / static_cast<double>(window);
    s.best_energy_per_site = records.front().energy_per_site;
    for (const auto &r : records) s.best_energy_per_site = std::min(s.best_energy_per_site, r.energy_per_site);
  }
  const int n_sites = config.lx * config.ly;
  if (config.run.ed_reference && n_sites <= 20) {
    const HamiltonianSpec spec = config.hamiltonian_spec();
    double e0 = 0.0;
    if (config.symmetry.group == GroupKind::kNone) {
      e0 = ed_ground_state(spec).ground_energy;
    } else {
      const SymmetryGroup g = config.sector_group();
      const BlockHamiltonian block =
          build_block_hamiltonian(spec, g, build_symmetrized_basis(g, spec.geometry));
      e0 = block_eigenvalues(block)(0);
    }
    s.ed_energy_per_site = e0 / n_sites;
    if (!records.empty()) {
      s.rel_error_vs_ed = std::abs((s.final_energy_per_site - *s.ed_energy_per_site) / *s.ed_energy_per_site);
    }
  }
  return s;
}

TrainingSummary train(const RunConfig &config, std::ostream *log) {
  Trainer trainer(config);
  const std::string &dir = config.run.output_dir;
  std::ofstream csv;
  if (!dir.empty()) {
    std::filesystem::create_directories(dir);
    csv.open(std::filesystem::path(dir) / "learning_curve.csv");
    if (!csv) throw Error(ErrorKind::kIo, "cannot write into output_dir '" + dir + "'");
    csv << metadata_line(config) << '\n' << kCsvHeader << '\n';
  }
  trainer.run([&](const StepRecord &r) {
    if (csv.is_open()) csv << format_row(r) << '\n';
    if (log) *log << format_row(r) << '\n';
    const int done = r.step + 1;
    if (!dir.empty() && config.run.checkpoint_every > 0 && done % config.run.checkpoint_every == 0) {
      write_checkpoint((std::filesystem::path(dir) / ("checkpoint_" + std::to_string(done) + ".json")).string(),
                       trainer);
    }
  });
  TrainingSummary summary = summarize(config, trainer.history());
  if (!dir.empty()) {
    write_checkpoint((std::filesystem::path(dir) / "checkpoint.json").string(), trainer);
    std::ofstream out(std::filesystem::path(dir) / "summary.json");
    out << summary.to_json().dump(2) << '\n';
  }
  return summary;
}

}  // namespace signvmc
