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

#include "signvmc/hamiltonian.hpp"

#include <bit>

namespace signvmc {

double diagonal_energy(const HamiltonianSpec &spec, const SpinConfiguration &config) {
  auto bond_sum = [&](const std::vector<Bond> &bonds) {
    int parallel_minus_anti = 0;
    for (const Bond &b : bonds) {
      parallel_minus_anti += (config.up(b.a) == config.up(b.b)) ? 1 : -1;
    }
    return 0.25 * parallel_minus_anti;
  };
  double e = 0.0;
  if (spec.j1 != 0.0) e += spec.j1 * bond_sum(spec.geometry.j1_bonds);
  if (spec.j2 != 0.0) e += spec.j2 * bond_sum(spec.geometry.j2_bonds);
  return e;
}

std::vector<Connection> connections(const HamiltonianSpec &spec,
                                    const SpinConfiguration &config) {
  std::vector<Connection> out;
  for_each_connection(spec, config, [&](const Connection &c) { out.push_back(c); });
  return out;
}

int marshall_sign(const LatticeGeometry &geometry, const SpinConfiguration &config,
                  Sublattice sublattice) {
  const int m_a = std::popcount(config.bits() & geometry.sublattice_mask(sublattice));
  return (m_a % 2 == 0) ? 1 : -1;
}

}  // namespace signvmc
