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

#ifndef SIGNVMC_SAMPLER_HPP
#define SIGNVMC_SAMPLER_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "signvmc/lattice.hpp"
#include "signvmc/log_psi.hpp"
#include "signvmc/nqs.hpp"
#include "signvmc/spin_config.hpp"
#include "signvmc/symmetry.hpp"

namespace signvmc {

struct SamplerConfig {
  int n_samples = 2000;
  int n_chains = 20;
  int n_thermalize = 200;      // sweeps before the first batch
  int n_thermalize_step = 10;  // sweeps after every parameter update
  int n_sweeps_between = 1;    // one sweep = n_sites proposals
  double p_nn = 0.5;           // nearest-neighbour vs arbitrary-pair exchange
  std::uint64_t seed = 1;
};

struct ChainState {
  SpinConfiguration config;
  double log_amp = 0.0;
  std::mt19937_64 rng;
  long long accepted = 0;
  long long proposed = 0;
};

struct SampleBatch {
  std::vector<SpinConfiguration> configs;
  std::vector<LogPsiValue> log_psis;
  std::vector<double> weights;  // normalized |psi|^2, exact enumeration only
  long long accepted = 0;
  long long proposed = 0;
  bool non_ergodic = false;  // acceptance below kNonErgodicAcceptance

  std::size_t size() const { return configs.size(); }
  double acceptance() const {
    return proposed == 0 ? 1.0 : static_cast<double>(accepted) / static_cast<double>(proposed);
  }
};

inline constexpr double kNonErgodicAcceptance = 1e-3;

// Independent chains started from random Sz = 0 configurations; chain i uses
// the stream seeded by (seed, i).
std::vector<ChainState> make_chains(const LatticeGeometry &geometry, int n_chains,
                                    std::uint64_t seed);

struct Proposal {
  int site_a = 0;
  int site_b = 0;
  SpinConfiguration candidate;
  bool null_move = false;  // the drawn pair was parallel
};

// With probability p_nn a uniformly chosen J1 bond, otherwise a uniformly
// chosen (up, down) site pair; the two spins are swapped. Both kernels are
// symmetric, so the Metropolis ratio needs no proposal correction. A parallel
// bond gives the null move, which is accepted trivially.
Proposal propose_exchange(ChainState &state, const LatticeGeometry &geometry, double p_nn);

// One Metropolis update with acceptance min(1, |psi'/psi|^2). `wavefunction`
// must be positioned at state.config.
bool metropolis_step(ChainState &state, CachedWavefunction &wavefunction,
                     const LatticeGeometry &geometry, double p_nn);

// Thermalizes every chain for n_thermalize sweeps, then records
// n_samples / n_chains configurations per chain, n_sweeps_between sweeps
// apart. Output is chain-major.
SampleBatch sample_batch(std::vector<ChainState> &chains, const NeuralQuantumState &model,
                         std::span<const double> theta, const SymmetryGroup &group,
                         int n_samples, int n_sweeps_between, int n_thermalize,
                         double p_nn = 0.5);

// All Sz = 0 configurations in ascending bit order. Throws SectorTooLarge
// above max_sites sites.
std::vector<SpinConfiguration> enumerate_sector(const LatticeGeometry &geometry,
                                                int max_sites = 20);

// Same enumeration with an explicit cap on the sector dimension.
std::vector<SpinConfiguration> enumerate_sector_capped(const LatticeGeometry &geometry,
                                                       std::size_t max_dimension);

// Full sector with normalized |psi|^2 weights (exact-summation mode).
SampleBatch exact_batch(const NeuralQuantumState &model, std::span<const double> theta,
                        const SymmetryGroup &group,
                        const std::vector<SpinConfiguration> &sector);

}  // namespace signvmc

#endif  // SIGNVMC_SAMPLER_HPP
