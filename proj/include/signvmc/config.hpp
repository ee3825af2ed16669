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

#ifndef SIGNVMC_CONFIG_HPP
#define SIGNVMC_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "signvmc/hamiltonian.hpp"
#include "signvmc/lattice.hpp"
#include "signvmc/nqs.hpp"
#include "signvmc/optimizer.hpp"
#include "signvmc/sampler.hpp"
#include "signvmc/symmetry.hpp"

namespace signvmc {

enum class GroupKind { kC4v, kSpaceGroup, kNone };
enum class SymmetryMode { kAugment, kRepresentative };
enum class RunMode { kMonteCarlo, kExactSum };

struct SymmetryConfig {
  GroupKind group = GroupKind::kC4v;
  std::string irrep = "A1";
  WaveVector k;
  SymmetryMode mode = SymmetryMode::kAugment;
};

struct NetworkConfig {
  NetworkShape shape;
  double init_scale = 0.05;
  double phase_init_scale = 0.5;  // <= 0: same as init_scale
};

struct RunSection {
  int max_steps = 1000;
  int checkpoint_every = 0;  // 0 writes only the final checkpoint
  std::string output_dir;    // empty: no files
  std::uint64_t seed = 1;
  RunMode mode = RunMode::kMonteCarlo;
  int nonergodic_patience = 20;  // consecutive flagged batches before abort
  bool wall_clock = true;        // false writes 0 in the seconds column
  bool ed_reference = true;      // compare against ED when the sector fits
};

struct RunConfig {
  int lx = 4;
  int ly = 4;
  HamiltonianSpec hamiltonian;  // geometry filled by geometry()
  SymmetryConfig symmetry;
  NetworkConfig network;
  SamplerConfig sampler;
  OptimizerConfig optimizer;
  RunSection run;

  LatticeGeometry geometry() const;
  HamiltonianSpec hamiltonian_spec() const;
  // Group used by the wave function: the irrep projector in augment mode,
  // trivial in representative mode.
  SymmetryGroup wavefunction_group() const;
  // Group defining the symmetrized sector.
  SymmetryGroup sector_group() const;

  // Throws InvalidConfig naming the offending key.
  void validate() const;

  nlohmann::json to_json() const;
  // Hex FNV-1a hash of the canonical JSON dump without run.output_dir.
  std::string hash() const;
};

// Parses a config document. A top-level "preset" key seeds the values before
// the remaining sections are applied. Unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json &document);
RunConfig load_run_config(const std::string &path);

std::vector<std::string> preset_names();
RunConfig preset(const std::string &name);  // throws InvalidConfig

std::string GroupKindName(GroupKind kind);
std::string RunModeName(RunMode mode);
std::string SymmetryModeName(SymmetryMode mode);

}  // namespace signvmc

#endif  // SIGNVMC_CONFIG_HPP
