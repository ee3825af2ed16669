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

#ifndef SIGNVMC_SYMBASIS_HPP
#define SIGNVMC_SYMBASIS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "signvmc/hamiltonian.hpp"
#include "signvmc/lattice.hpp"
#include "signvmc/nqs.hpp"
#include "signvmc/optimizer.hpp"
#include "signvmc/spin_config.hpp"
#include "signvmc/symmetry.hpp"

namespace signvmc {

// |phi(x_E)> = (1/sqrt(|G| N^2)) sum_g chi(g)^* |g x_E>, with
// N^2 = sum over the stabilizer of chi(s)^* (|Stab| or 0 for 1-D irreps).
struct SymmetrizedBasisState {
  SpinConfiguration canonical;
  IrrepLabel irrep;
  int column = 1;
  double norm = 0.0;  // N
  int stabilizer_size = 0;
  int orbit_size = 0;
};

struct SymmetrizedBasis {
  std::vector<SymmetrizedBasisState> states;  // ascending canonical bits
  IrrepLabel irrep;

  std::size_t size() const { return states.size(); }
  // Position of a canonical configuration, or -1.
  std::int64_t find(const SpinConfiguration &canonical) const;
};

// N^2 for the orbit of `config`; 0 when the irrep projects it out.
double projection_norm2(const SymmetryGroup &group, const SpinConfiguration &config);

// One state per Sz = 0 orbit with nonzero projection.
SymmetrizedBasis build_symmetrized_basis(const SymmetryGroup &group,
                                         const LatticeGeometry &geometry, int max_sites = 20);

// Raw network amplitude as a function of a configuration.
using NetworkFn = std::function<LogPsiValue(const SpinConfiguration &)>;

// Psi^j(x_E) = Psi_net(g' x_E) / M with M = chi(g')^* / sqrt(|G|), where
// subset = {g'} (group op indices). Throws SingularM unless the subset has
// exactly one element and ZeroProjection for projected-out orbits.
LogPsiValue log_psi_coefficient(const NetworkFn &net, const SymmetryGroup &group,
                                const SpinConfiguration &canonical,
                                std::span<const int> subset = {});
std::complex<double> psi_coefficient(const NetworkFn &net, const SymmetryGroup &group,
                                     const SpinConfiguration &canonical,
                                     std::span<const int> subset = {});

struct BlockRow {
  std::vector<std::int64_t> columns;  // indices into the basis, ascending
  std::vector<std::complex<double>> elements;
};

// Row x_E of the block Hamiltonian:
// H(x_E, y_E) = sum_y <x_E|H|y> (sum_{h: h y_E = y} chi(h)^*) / (N_x N_y).
BlockRow symmetrized_hamiltonian(const HamiltonianSpec &spec, const SymmetryGroup &group,
                                 const SymmetrizedBasis &basis,
                                 const SpinConfiguration &canonical);

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor, std::int64_t>;

struct BlockHamiltonian {
  IrrepLabel irrep;
  SymmetrizedBasis basis;
  SparseMatrixC elements;
};

BlockHamiltonian build_block_hamiltonian(const HamiltonianSpec &spec, const SymmetryGroup &group,
                                         const SymmetrizedBasis &basis);
Eigen::MatrixXcd dense_block(const BlockHamiltonian &block);
// Ascending eigenvalues of a dense block.
Eigen::VectorXd block_eigenvalues(const BlockHamiltonian &block);

// Coefficients Psi^j(x_E) of the raw network (trivial group) at every basis
// state, subset {E}.
std::vector<LogPsiValue> basis_coefficients(const NeuralQuantumState &model,
                                            std::span<const double> theta,
                                            const BlockHamiltonian &block,
                                            const SymmetryGroup &group);

// Exact-summation statistics in the symmetrized basis: weights |Psi^j|^2,
// O = d ln Psi_net(x_E), E_loc(x_E) = sum_y H(x_E, y_E) Psi^j(y_E) / Psi^j(x_E).
SrStatistics representative_statistics(const NeuralQuantumState &model,
                                       std::span<const double> theta,
                                       const BlockHamiltonian &block, const SymmetryGroup &group);

struct SymmetrizedEnergy {
  double energy = 0.0;
  Eigen::VectorXd gradient;
};

// E^j = <Psi^j|H^j|Psi^j> / <Psi^j|Psi^j> and its derivative with respect to
// the network parameters.
SymmetrizedEnergy symmetrized_energy_and_gradient(const NeuralQuantumState &model,
                                                  std::span<const double> theta,
                                                  const BlockHamiltonian &block,
                                                  const SymmetryGroup &group);

}  // namespace signvmc

#endif  // SIGNVMC_SYMBASIS_HPP
