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

#include "signvmc/sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "signvmc/error.hpp"
#include "signvmc/parallel.hpp"

namespace signvmc {
namespace {

double uniform01(std::mt19937_64 &rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

int uniform_index(std::mt19937_64 &rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

int nth_set_bit(std::uint64_t bits, int n) {
  for (int i = 0; i < n; ++i) bits &= bits - 1;
  return std::countr_zero(bits);
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

std::vector<ChainState> make_chains(const LatticeGeometry &geometry, int n_chains,
                                    std::uint64_t seed) {
  if (geometry.n_sites % 2 != 0) {
    throw Error(ErrorKind::kInvalidArgument, "Sz = 0 sector needs an even number of sites");
  }
  std::vector<ChainState> chains(static_cast<std::size_t>(n_chains));
  for (int i = 0; i < n_chains; ++i) {
    ChainState &c = chains[static_cast<std::size_t>(i)];
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                      static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(i)};
    c.rng.seed(seq);
    std::vector<int> sites(static_cast<std::size_t>(geometry.n_sites));
    for (int s = 0; s < geometry.n_sites; ++s) sites[static_cast<std::size_t>(s)] = s;
    std::shuffle(sites.begin(), sites.end(), c.rng);
    std::uint64_t bits = 0;
    for (int s = 0; s < geometry.n_sites / 2; ++s) bits |= std::uint64_t{1} << sites[static_cast<std::size_t>(s)];
    c.config = SpinConfiguration(bits, geometry.n_sites);
  }
  return chains;
}

Proposal propose_exchange(ChainState &state, const LatticeGeometry &geometry, double p_nn) {
  Proposal p;
  const SpinConfiguration &config = state.config;
  if (uniform01(state.rng) < p_nn) {
    const Bond &bond = geometry.j1_bonds[static_cast<std::size_t>(
        uniform_index(state.rng, static_cast<int>(geometry.j1_bonds.size())))];
    p.site_a = bond.a;
    p.site_b = bond.b;
  } else {
    const std::uint64_t ups = config.bits();
    const std::uint64_t downs = ~ups & SpinConfiguration::Mask(config.n_sites());
    const int n_up = std::popcount(ups);
    const int n_down = std::popcount(downs);
    if (n_up == 0 || n_down == 0) {
      p.null_move = true;
      p.candidate = config;
      return p;
    }
    p.site_a = nth_set_bit(ups, uniform_index(state.rng, n_up));
    p.site_b = nth_set_bit(downs, uniform_index(state.rng, n_down));
  }
  p.null_move = config.up(p.site_a) == config.up(p.site_b);
  p.candidate = config.exchanged(p.site_a, p.site_b);
  return p;
}

bool metropolis_step(ChainState &state, CachedWavefunction &wavefunction,
                     const LatticeGeometry &geometry, double p_nn) {
  const Proposal p = propose_exchange(state, geometry, p_nn);
  ++state.proposed;
  if (p.null_move) {
    ++state.accepted;
    return true;
  }
  const LogPsiValue candidate = wavefunction.log_psi_exchanged(p.site_a, p.site_b);
  const double u = uniform01(state.rng);
  if (candidate.is_zero) return false;
  const double log_ratio = 2.0 * (candidate.log_amplitude - state.log_amp);
  if (log_ratio >= 0.0 || std::log(u) < log_ratio) {
    wavefunction.commit();
    state.config = p.candidate;
    state.log_amp = candidate.log_amplitude;
    ++state.accepted;
    return true;
  }
  return false;
}

SampleBatch sample_batch(std::vector<ChainState> &chains, const NeuralQuantumState &model,
                         std::span<const double> theta, const SymmetryGroup &group,
                         int n_samples, int n_sweeps_between, int n_thermalize, double p_nn) {
  const int n_chains = static_cast<int>(chains.size());
  if (n_chains == 0 || n_samples % n_chains != 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "n_samples (" + std::to_string(n_samples) +
                    ") must be divisible by the number of chains (" +
                    std::to_string(n_chains) + ")");
  }
  const LatticeGeometry &geometry = model.geometry();
  const int per_chain = n_samples / n_chains;
  const int sweep = geometry.n_sites;

  SampleBatch batch;
  batch.configs.resize(static_cast<std::size_t>(n_samples));
  batch.log_psis.resize(static_cast<std::size_t>(n_samples));
  std::vector<long long> accepted(static_cast<std::size_t>(n_chains), 0);
  std::vector<long long> proposed(static_cast<std::size_t>(n_chains), 0);

  parallel_for(n_chains, [&](int ci) {
    ChainState &chain = chains[static_cast<std::size_t>(ci)];
    CachedWavefunction wf(model, theta, group);
    wf.reset(chain.config);
    chain.log_amp = wf.log_psi().log_amplitude;
    for (int s = 0; s < n_thermalize * sweep; ++s) metropolis_step(chain, wf, geometry, p_nn);
    const long long acc0 = chain.accepted;
    const long long prop0 = chain.proposed;
    for (int k = 0; k < per_chain; ++k) {
      for (int s = 0; s < n_sweeps_between * sweep; ++s) metropolis_step(chain, wf, geometry, p_nn);
      // Fresh evaluation keeps incremental round-off from accumulating.
      wf.reset(chain.config);
      chain.log_amp = wf.log_psi().log_amplitude;
      const std::size_t slot = static_cast<std::size_t>(ci * per_chain + k);
      batch.configs[slot] = chain.config;
      batch.log_psis[slot] = wf.log_psi();
    }
    accepted[static_cast<std::size_t>(ci)] = chain.accepted - acc0;
    proposed[static_cast<std::size_t>(ci)] = chain.proposed - prop0;
  });

  for (int ci = 0; ci < n_chains; ++ci) {
    batch.accepted += accepted[static_cast<std::size_t>(ci)];
    batch.proposed += proposed[static_cast<std::size_t>(ci)];
  }
  batch.non_ergodic = batch.proposed > 0 && batch.acceptance() < kNonErgodicAcceptance;
  return batch;
}

std::vector<SpinConfiguration> enumerate_sector_capped(const LatticeGeometry &geometry,
                                                       std::size_t max_dimension) {
  const int n = geometry.n_sites;
  if (n % 2 != 0) {
    throw Error(ErrorKind::kInvalidArgument, "Sz = 0 sector needs an even number of sites");
  }
  const double dim = binomial(n, n / 2);
  if (dim > static_cast<double>(max_dimension)) {
    throw Error(ErrorKind::kSectorTooLarge,
                "Sz = 0 sector of " + std::to_string(n) + " sites has dimension " +
                    std::to_string(static_cast<long long>(dim)) + ", above the cap of " +
                    std::to_string(max_dimension));
  }
  std::vector<SpinConfiguration> out;
  out.reserve(static_cast<std::size_t>(dim));
  const std::uint64_t limit = SpinConfiguration::Mask(n);
  std::uint64_t v = (std::uint64_t{1} << (n / 2)) - 1;
  while (true) {
    out.emplace_back(v, n);
    if (v == 0) break;
    // Gosper's hack: next integer with the same popcount.
    const std::uint64_t t = v | (v - 1);
    const std::uint64_t next = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
    if (next > limit || next <= v) break;
    v = next;
  }
  return out;
}

std::vector<SpinConfiguration> enumerate_sector(const LatticeGeometry &geometry, int max_sites) {
  if (geometry.n_sites > max_sites) {
    throw Error(ErrorKind::kSectorTooLarge,
                "exact enumeration is limited to " + std::to_string(max_sites) +
                    " sites; lattice has " + std::to_string(geometry.n_sites));
  }
  return enumerate_sector_capped(geometry, static_cast<std::size_t>(-1));
}

SampleBatch exact_batch(const NeuralQuantumState &model, std::span<const double> theta,
                        const SymmetryGroup &group,
                        const std::vector<SpinConfiguration> &sector) {
  SampleBatch batch;
  batch.configs = sector;
  batch.log_psis.resize(sector.size());
  parallel_for(static_cast<int>(sector.size()), [&](int i) {
    batch.log_psis[static_cast<std::size_t>(i)] =
        model.log_psi(theta, sector[static_cast<std::size_t>(i)], group);
  });
  double amax = -std::numeric_limits<double>::infinity();
  for (const LogPsiValue &v : batch.log_psis) {
    if (!v.is_zero) amax = std::max(amax, v.log_amplitude);
  }
  batch.weights.resize(sector.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sector.size(); ++i) {
    const LogPsiValue &v = batch.log_psis[i];
    batch.weights[i] = v.is_zero ? 0.0 : std::exp(2.0 * (v.log_amplitude - amax));
    total += batch.weights[i];
  }
  for (double &w : batch.weights) w /= total;
  batch.accepted = batch.proposed = 0;
  return batch;
}

}  // namespace signvmc
