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

#ifndef SIGNVMC_EXACT_HPP
#define SIGNVMC_EXACT_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "signvmc/hamiltonian.hpp"
#include "signvmc/lattice.hpp"
#include "signvmc/nqs.hpp"
#include "signvmc/spin_config.hpp"
#include "signvmc/symmetry.hpp"

namespace signvmc {

using SparseMatrixRM = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;

struct SectorSpectrum {
  std::vector<SpinConfiguration> basis;  // ascending
  double ground_energy = 0.0;
  Eigen::VectorXd ground_vector;  // normalized, largest component positive
  int n_lanczos_iters = 0;        // 0 for the dense path
  double residual = 0.0;          // ||H v - E v||
};

struct EdOptions {
  std::size_t max_dimension = 2'000'000;
  int dense_threshold = 512;
  int krylov_size = 120;
  int max_restarts = 50;
  std::uint64_t seed = 12345;
};

// Index of `config` in an ascending basis, or -1.
std::int64_t basis_index(const std::vector<SpinConfiguration> &basis,
                         const SpinConfiguration &config);

SparseMatrixRM sector_hamiltonian(const HamiltonianSpec &spec,
                                  const std::vector<SpinConfiguration> &basis);
Eigen::MatrixXd dense_sector_hamiltonian(const HamiltonianSpec &spec,
                                         const std::vector<SpinConfiguration> &basis);

// y = H x with rows split across workers.
void sparse_matvec(const SparseMatrixRM &h, const Eigen::VectorXd &x, Eigen::VectorXd &y);

// Lowest eigenpair of the Sz = 0 sector; dense below dense_threshold, Lanczos
// with full reorthogonalization and restarts otherwise.
SectorSpectrum ed_ground_state(const HamiltonianSpec &spec, const EdOptions &options = {});

// Lanczos on an arbitrary symmetric sparse matrix.
SectorSpectrum lanczos_ground_state(const SparseMatrixRM &h, const EdOptions &options = {});

// D = |sum |psi|^2 sign(psi) M(sigma)|; components below 1e-14 count as 0.
double sign_overlap_D(const std::vector<SpinConfiguration> &basis, const Eigen::VectorXd &vector,
                      const LatticeGeometry &geometry, Sublattice sublattice);
double sign_overlap_D(const SectorSpectrum &spectrum, const LatticeGeometry &geometry,
                      Sublattice sublattice);

struct CdfPoint {
  double x = 0.0;  // phase difference in (-pi, pi]
  double f = 0.0;  // P(phi - phi_MSR <= x)
};

// Maps an angle into (-pi, pi].
double wrap_phase(double angle);

// Weighted empirical CDF with one point per distinct x. Empty weights means
// uniform.
std::vector<CdfPoint> empirical_cdf(std::span<const double> values,
                                    std::span<const double> weights = {});

// phi_theta - phi_MSR per configuration (phi_MSR = 0 or pi), then the CDF.
// Zero-amplitude configurations are skipped.
std::vector<CdfPoint> phase_cdf(const NeuralQuantumState &model, std::span<const double> theta,
                                const SymmetryGroup &group,
                                const std::vector<SpinConfiguration> &configs,
                                std::span<const double> weights, Sublattice sublattice);

// max_c sum |psi0|^2 cos(phi(sigma) - arg psi0(sigma) - c)
//   = |sum |psi0|^2 exp(i (phi - arg psi0))|.
// `phase` returns nullopt where the trial amplitude vanishes.
double vmc_sign_overlap(const SectorSpectrum &spectrum,
                        const std::function<std::optional<double>(const SpinConfiguration &)> &phase);
double vmc_sign_overlap(const NeuralQuantumState &model, std::span<const double> theta,
                        const SymmetryGroup &group, const SectorSpectrum &spectrum);

}  // namespace signvmc

#endif  // SIGNVMC_EXACT_HPP
