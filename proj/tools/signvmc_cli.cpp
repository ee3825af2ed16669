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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "signvmc/config.hpp"
#include "signvmc/error.hpp"
#include "signvmc/exact.hpp"
#include "signvmc/parallel.hpp"
#include "signvmc/sampler.hpp"
#include "signvmc/symbasis.hpp"
#include "signvmc/training.hpp"

namespace {

using namespace signvmc;
using nlohmann::json;

json lattice_json(const RunConfig &c) { return {{"lx", c.lx}, {"ly", c.ly}}; }

double j2_over_j1(const RunConfig &c) { return c.hamiltonian.j2 / c.hamiltonian.j1; }

int cmd_train(const std::string &path, bool verbose) {
  const RunConfig config = load_run_config(path);
  const TrainingSummary summary = train(config, verbose ? &std::cerr : nullptr);
  std::cout << summary.to_json().dump(2) << std::endl;
  return 0;
}

int cmd_ed(const std::string &path) {
  const RunConfig config = load_run_config(path);
  const HamiltonianSpec spec = config.hamiltonian_spec();
  const SectorSpectrum s = ed_ground_state(spec);
  json out;
  out["lattice"] = lattice_json(config);
  out["j2_over_j1"] = j2_over_j1(config);
  out["sector_dim"] = s.basis.size();
  out["ground_energy"] = s.ground_energy;
  out["ground_energy_per_site"] = s.ground_energy / spec.geometry.n_sites;
  out["D_checkerboard"] = sign_overlap_D(s, spec.geometry, Sublattice::kCheckerboard);
  out["D_stripe"] = sign_overlap_D(s, spec.geometry, Sublattice::kStripe);
  out["residual"] = s.residual;
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int cmd_symm_ed(const std::string &path) {
  const RunConfig config = load_run_config(path);
  const HamiltonianSpec spec = config.hamiltonian_spec();
  const LatticeGeometry &g = spec.geometry;
  json blocks = json::array();
  auto add = [&](const SymmetryGroup &group) {
    const BlockHamiltonian block =
        build_block_hamiltonian(spec, group, build_symmetrized_basis(group, g));
    const Eigen::VectorXd ev = block_eigenvalues(block);
    blocks.push_back({{"irrep", group.irrep.point_irrep},
                      {"k", {group.irrep.k.qx, group.irrep.k.qy}},
                      {"dim", block.basis.size()},
                      {"lowest", ev.size() > 0 ? json(ev(0)) : json()}});
  };
  const char *point_irreps[] = {"A1", "A2", "B1", "B2"};
  switch (config.symmetry.group) {
    case GroupKind::kC4v:
      for (const char *irrep : point_irreps) add(build_c4v(g, irrep));
      break;
    case GroupKind::kSpaceGroup:
      for (const char *irrep : point_irreps) add(build_space_group(g, config.symmetry.k, irrep));
      break;
    case GroupKind::kNone:
      for (int qy = 0; qy < g.ly; ++qy) {
        for (int qx = 0; qx < g.lx; ++qx) add(build_translation_group(g, {qx, qy}));
      }
      break;
  }
  json out;
  out["lattice"] = lattice_json(config);
  out["j2_over_j1"] = j2_over_j1(config);
  out["group"] = GroupKindName(config.symmetry.group);
  out["blocks"] = blocks;
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int cmd_analyze_sign(const std::string &config_path, const std::string &checkpoint_path,
                     const std::string &out_path, const std::string &sublattice_name,
                     int n_samples) {
  const RunConfig config = load_run_config(config_path);
  const Checkpoint cp = read_checkpoint(checkpoint_path);
  if (cp.lx != config.lx || cp.ly != config.ly) {
    throw Error(ErrorKind::kCheckpointMismatch,
                "checkpoint lattice " + std::to_string(cp.lx) + "x" + std::to_string(cp.ly) +
                    " does not match config lattice " + std::to_string(config.lx) + "x" +
                    std::to_string(config.ly));
  }
  if (cp.shape.channels != config.network.shape.channels ||
      cp.shape.hidden != config.network.shape.hidden) {
    throw Error(ErrorKind::kCheckpointMismatch, "checkpoint network shape does not match config");
  }
  Sublattice sub = Sublattice::kCheckerboard;
  if (sublattice_name == "stripe") {
    sub = Sublattice::kStripe;
  } else if (sublattice_name != "checkerboard") {
    throw Error(ErrorKind::kInvalidArgument, "--sublattice must be checkerboard or stripe");
  }
  const HamiltonianSpec spec = config.hamiltonian_spec();
  const NeuralQuantumState model(spec.geometry, config.network.shape);
  if (cp.theta.size() != model.n_parameters()) {
    throw Error(ErrorKind::kCheckpointMismatch, "checkpoint parameter count does not match");
  }
  const SymmetryGroup group = config.wavefunction_group();
  const std::span<const double> theta(cp.theta.data(), static_cast<std::size_t>(cp.theta.size()));

  std::vector<CdfPoint> cdf;
  std::optional<double> overlap;
  if (spec.geometry.n_sites <= 20) {
    const SampleBatch batch = exact_batch(model, theta, group, enumerate_sector(spec.geometry));
    cdf = phase_cdf(model, theta, group, batch.configs, batch.weights, sub);
    overlap = vmc_sign_overlap(model, theta, group, ed_ground_state(spec));
  } else {
    auto chains = make_chains(spec.geometry, config.sampler.n_chains, config.run.seed);
    const int per_chain = std::max(1, n_samples / config.sampler.n_chains);
    const SampleBatch batch =
        sample_batch(chains, model, theta, group, per_chain * config.sampler.n_chains,
                     config.sampler.n_sweeps_between, config.sampler.n_thermalize,
                     config.sampler.p_nn);
    cdf = phase_cdf(model, theta, group, batch.configs, {}, sub);
  }

  std::ofstream file;
  std::ostream *out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw Error(ErrorKind::kIo, "cannot write '" + out_path + "'");
    out = &file;
  }
  *out << "# config_hash=" << config.hash() << " seed=" << config.run.seed << '\n';
  *out << "x,F\n";
  char buf[64];
  for (const CdfPoint &p : cdf) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", p.x, p.f);
    *out << buf;
  }
  if (overlap) *out << "# vmc_sign_overlap=" << *overlap << '\n';
  if (!out_path.empty()) {
    json summary;
    summary["cdf_points"] = cdf.size();
    summary["vmc_sign_overlap"] = overlap ? json(*overlap) : json();
    std::cout << summary.dump(2) << std::endl;
  }
  return 0;
}

int cmd_validate(const std::string &path) {
  const RunConfig config = load_run_config(path);
  std::cout << "ok " << config.hash() << std::endl;
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Neural quantum state VMC for the J1-J2 Heisenberg model"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker cap (default: SIGNVMC_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  std::string config_path;
  bool verbose = false;
  auto *train_cmd = app.add_subcommand("train", "Optimize a network from a config file");
  train_cmd->add_option("config", config_path, "Run config (JSON)")->required();
  train_cmd->add_flag("-v,--verbose", verbose, "Echo every step to stderr");

  auto *ed_cmd = app.add_subcommand("ed", "Exact ground state of the Sz = 0 sector");
  ed_cmd->add_option("config", config_path, "Run config (JSON)")->required();

  auto *symm_cmd = app.add_subcommand("symm-ed", "Block spectra in the symmetrized basis");
  symm_cmd->add_option("config", config_path, "Run config (JSON)")->required();

  std::string checkpoint_path, out_path, sublattice = "checkerboard";
  int n_samples = 10000;
  auto *sign_cmd = app.add_subcommand("analyze-sign", "Phase CDF relative to the Marshall sign");
  sign_cmd->add_option("config", config_path, "Run config (JSON)")->required();
  sign_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint JSON")->required();
  sign_cmd->add_option("--out", out_path, "CSV output path (default: stdout)");
  sign_cmd->add_option("--sublattice", sublattice, "checkerboard or stripe");
  sign_cmd->add_option("--samples", n_samples, "Monte Carlo samples above 20 sites");

  auto *validate_cmd = app.add_subcommand("validate-config", "Check a config file");
  validate_cmd->add_option("config", config_path, "Run config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) set_thread_count(threads);

  try {
    if (*train_cmd) return cmd_train(config_path, verbose);
    if (*ed_cmd) return cmd_ed(config_path);
    if (*symm_cmd) return cmd_symm_ed(config_path);
    if (*sign_cmd) return cmd_analyze_sign(config_path, checkpoint_path, out_path, sublattice, n_samples);
    if (*validate_cmd) return cmd_validate(config_path);
  } catch (const Error &e) {
    std::cerr << "error [" << ErrorKindName(e.kind()) << "]: " << e.what() << std::endl;
    return e.kind() == ErrorKind::kInvalidConfig ? 2 : 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
