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

#include "signvmc/symbasis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "signvmc/error.hpp"
#include "signvmc/parallel.hpp"
#include "signvmc/sampler.hpp"

namespace signvmc {
namespace {

constexpr double kProjectionTolerance = 1e-9;

int identity_index(const SymmetryGroup &group) {
  for (std::size_t g = 0; g < group.ops.size(); ++g) {
    const auto &perm = group.ops[g].site_permutation;
    bool identity = true;
    for (std::size_t s = 0; s < perm.size() && identity; ++s) identity = perm[s] == static_cast<int>(s);
    if (identity) return static_cast<int>(g);
  }
  throw Error(ErrorKind::kInvalidArgument, "symmetry group has no identity element");
}

}  // namespace

std::int64_t SymmetrizedBasis::find(const SpinConfiguration &canonical) const {
  auto it = std::lower_bound(states.begin(), states.end(), canonical.bits(),
                             [](const SymmetrizedBasisState &s, std::uint64_t bits) {
                               return s.canonical.bits() < bits;
                             });
  if (it == states.end() || it->canonical.bits() != canonical.bits()) return -1;
  return static_cast<std::int64_t>(it - states.begin());
}

double projection_norm2(const SymmetryGroup &group, const SpinConfiguration &config) {
  const SpinConfiguration c = canonical(group, config);
  std::complex<double> sum(0.0, 0.0);
  for (std::size_t g = 0; g < group.ops.size(); ++g) {
    if (apply(group.ops[g], c) == c) sum += std::conj(group.characters[g]);
  }
  return std::abs(sum) < kProjectionTolerance ? 0.0 : sum.real();
}

SymmetrizedBasis build_symmetrized_basis(const SymmetryGroup &group,
                                         const LatticeGeometry &geometry, int max_sites) {
  const std::vector<SpinConfiguration> sector = enumerate_sector(geometry, max_sites);
  SymmetrizedBasis basis;
  basis.irrep = group.irrep;
  for (const SpinConfiguration &c : sector) {
    if (!(canonical(group, c) == c)) continue;
    const double n2 = projection_norm2(group, c);
    if (n2 <= 0.0) continue;
    const Orbit o = orbit(group, c);
    SymmetrizedBasisState s;
    s.canonical = c;
    s.irrep = group.irrep;
    s.norm = std::sqrt(n2);
    s.stabilizer_size = o.stabilizer_size;
    s.orbit_size = static_cast<int>(o.size());
    basis.states.push_back(s);
  }
  return basis;
}

LogPsiValue log_psi_coefficient(const NetworkFn &net, const SymmetryGroup &group,
                                const SpinConfiguration &canonical_config,
                                std::span<const int> subset) {
  if (subset.size() > 1) {
    throw Error(ErrorKind::kSingularM,
                "M matrix of a one-dimensional irrep is a scalar; a subset of " +
                    std::to_string(subset.size()) + " elements is not invertible");
  }
  if (projection_norm2(group, canonical_config) <= 0.0) {
    throw Error(ErrorKind::kZeroProjection,
                "orbit of " + canonical_config.to_string() + " is projected out by the irrep");
  }
  const int g = subset.empty() ? identity_index(group) : subset[0];
  if (g < 0 || g >= static_cast<int>(group.size())) {
    throw Error(ErrorKind::kInvalidArgument, "subset element is not a group index");
  }
  const std::complex<double> chi = group.characters[static_cast<std::size_t>(g)];
  if (std::abs(chi) < kProjectionTolerance) {
    throw Error(ErrorKind::kSingularM, "M matrix element vanishes for the chosen subset");
  }
  LogPsiValue v = net(apply(group.ops[static_cast<std::size_t>(g)], canonical_config));
  if (v.is_zero) return v;
  // Divide by chi^* / sqrt(|G|).
  v.log_amplitude += 0.5 * std::log(static_cast<double>(group.size())) - std::log(std::abs(chi));
  v.phase += std::arg(chi);
  return v;
}

std::complex<double> psi_coefficient(const NetworkFn &net, const SymmetryGroup &group,
                                     const SpinConfiguration &canonical_config,
                                     std::span<const int> subset) {
  return log_psi_coefficient(net, group, canonical_config, subset).value();
}

BlockRow symmetrized_hamiltonian(const HamiltonianSpec &spec, const SymmetryGroup &group,
                                 const SymmetrizedBasis &basis,
                                 const SpinConfiguration &canonical_config) {
  const std::int64_t row = basis.find(canonical_config);
  if (row < 0) {
    throw Error(ErrorKind::kZeroProjection,
                canonical_config.to_string() + " is not a state of the symmetrized basis");
  }
  const double n_x = basis.states[static_cast<std::size_t>(row)].norm;
  std::map<std::int64_t, std::complex<double>> acc;
  acc[row] += diagonal_energy(spec, canonical_config);
  for_each_connection(spec, canonical_config, [&](const Connection &c) {
    const SpinConfiguration y_e = canonical(group, c.target);
    const std::int64_t col = basis.find(y_e);
    if (col < 0) return;
    std::complex<double> chi_sum(0.0, 0.0);
    for (std::size_t h = 0; h < group.size(); ++h) {
      if (apply(group.ops[h], y_e) == c.target) chi_sum += std::conj(group.characters[h]);
    }
    acc[col] += c.element * chi_sum / (n_x * basis.states[static_cast<std::size_t>(col)].norm);
  });
  BlockRow out;
  for (const auto &[col, value] : acc) {
    out.columns.push_back(col);
    out.elements.push_back(value);
  }
  return out;
}

BlockHamiltonian build_block_hamiltonian(const HamiltonianSpec &spec, const SymmetryGroup &group,
                                         const SymmetrizedBasis &basis) {
  const int n = static_cast<int>(basis.size());
  std::vector<BlockRow> rows(basis.size());
  parallel_for(n, [&](int i) {
    rows[static_cast<std::size_t>(i)] =
        symmetrized_hamiltonian(spec, group, basis, basis.states[static_cast<std::size_t>(i)].canonical);
  });
  BlockHamiltonian block;
  block.irrep = group.irrep;
  block.basis = basis;
  block.elements.resize(n, n);
  std::size_t nnz = 0;
  for (const auto &r : rows) nnz += r.columns.size();
  block.elements.reserve(static_cast<std::int64_t>(nnz));
  for (int i = 0; i < n; ++i) {
    block.elements.startVec(i);
    const BlockRow &r = rows[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < r.columns.size(); ++k) {
      block.elements.insertBack(i, r.columns[k]) = r.elements[k];
    }
  }
  block.elements.finalize();
  return block;
}

Eigen::MatrixXcd dense_block(const BlockHamiltonian &block) {
  return Eigen::MatrixXcd(block.elements);
}

Eigen::VectorXd block_eigenvalues(const BlockHamiltonian &block) {
  if (block.basis.size() == 0) return Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_block(block), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<LogPsiValue> basis_coefficients(const NeuralQuantumState &model,
                                            std::span<const double> theta,
                                            const BlockHamiltonian &block,
                                            const SymmetryGroup &group) {
  const SymmetryGroup trivial = build_trivial_group(model.geometry());
  const NetworkFn net = [&](const SpinConfiguration &c) { return model.log_psi(theta, c, trivial); };
  std::vector<LogPsiValue> out(block.basis.size());
  parallel_for(static_cast<int>(out.size()), [&](int i) {
    out[static_cast<std::size_t>(i)] =
        log_psi_coefficient(net, group, block.basis.states[static_cast<std::size_t>(i)].canonical);
  });
  return out;
}

SrStatistics representative_statistics(const NeuralQuantumState &model,
                                       std::span<const double> theta,
                                       const BlockHamiltonian &block, const SymmetryGroup &group) {
  const int n = static_cast<int>(block.basis.size());
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "symmetrized basis is empty");
  const SymmetryGroup trivial = build_trivial_group(model.geometry());
  const std::vector<LogPsiValue> coeff = basis_coefficients(model, theta, block, group);
  double amax = -std::numeric_limits<double>::infinity();
  for (const LogPsiValue &c : coeff) {
    if (c.is_zero) {
      throw Error(ErrorKind::kZeroAmplitude, "network amplitude vanishes on a basis state");
    }
    amax = std::max(amax, c.log_amplitude);
  }
  Eigen::MatrixXcd o(n, model.n_parameters());
  Eigen::VectorXcd eloc(n);
  std::vector<double> weights(static_cast<std::size_t>(n));
  parallel_for(n, [&](int i) {
    const auto &state = block.basis.states[static_cast<std::size_t>(i)];
    o.row(i) = model.log_derivatives(theta, state.canonical, trivial).transpose();
    const std::complex<double> ref = coeff[static_cast<std::size_t>(i)].log();
    std::complex<double> e(0.0, 0.0);
    for (SparseMatrixC::InnerIterator it(block.elements, i); it; ++it) {
      e += it.value() * std::exp(coeff[static_cast<std::size_t>(it.col())].log() - ref);
    }
    eloc(i) = e;
    weights[static_cast<std::size_t>(i)] =
        std::exp(2.0 * (coeff[static_cast<std::size_t>(i)].log_amplitude - amax));
  });
  return build_statistics(o, eloc, weights);
}

SymmetrizedEnergy symmetrized_energy_and_gradient(const NeuralQuantumState &model,
                                                  std::span<const double> theta,
                                                  const BlockHamiltonian &block,
                                                  const SymmetryGroup &group) {
  const SrStatistics stats = representative_statistics(model, theta, block, group);
  return {stats.energy_mean.real(), energy_gradient(stats)};
}

}  // namespace signvmc
