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

#ifndef SIGNVMC_HAMILTONIAN_HPP
#define SIGNVMC_HAMILTONIAN_HPP

#include <complex>
#include <vector>

#include "signvmc/error.hpp"
#include "signvmc/lattice.hpp"
#include "signvmc/log_psi.hpp"
#include "signvmc/spin_config.hpp"

namespace signvmc {

// H = J1 sum_<ij> s_i.s_j + J2 sum_<<ij>> s_i.s_j with spin-1/2 operators
// (s^z = +-1/2).
struct HamiltonianSpec {
  double j1 = 1.0;
  double j2 = 0.0;
  LatticeGeometry geometry;
};

// Off-diagonal element <target|H|source>: one spin exchange across the bond
// (site_a, site_b).
struct Connection {
  SpinConfiguration target;
  double element = 0.0;
  int site_a = 0;
  int site_b = 0;
};

double diagonal_energy(const HamiltonianSpec &spec, const SpinConfiguration &config);

// One connection per antiparallel bond with nonzero coupling, J1 bonds first,
// each class in sorted bond order.
std::vector<Connection> connections(const HamiltonianSpec &spec,
                                    const SpinConfiguration &config);

template <typename Fn>
void for_each_connection(const HamiltonianSpec &spec, const SpinConfiguration &config,
                         Fn &&fn) {
  auto visit = [&](const std::vector<Bond> &bonds, double coupling) {
    if (coupling == 0.0) return;
    const double element = 0.5 * coupling;
    for (const Bond &b : bonds) {
      if (config.up(b.a) != config.up(b.b)) {
        SpinConfiguration target = config;
        target.flip(b.a);
        target.flip(b.b);
        fn(Connection{target, element, b.a, b.b});
      }
    }
  };
  visit(spec.geometry.j1_bonds, spec.j1);
  visit(spec.geometry.j2_bonds, spec.j2);
}

// E_loc = sum_s' H_ss' psi(s') / psi(s). `target_log_psi` receives each
// Connection and returns ln psi of its target.
template <typename TargetFn>
std::complex<double> local_energy_from(const HamiltonianSpec &spec,
                                       const SpinConfiguration &config,
                                       const LogPsiValue &reference,
                                       TargetFn &&target_log_psi) {
  if (reference.is_zero || !std::isfinite(reference.log_amplitude)) {
    throw Error(ErrorKind::kZeroAmplitudeReference,
                "local energy requested at a configuration with vanishing amplitude");
  }
  std::complex<double> energy(diagonal_energy(spec, config), 0.0);
  const std::complex<double> ref = reference.log();
  for_each_connection(spec, config, [&](const Connection &c) {
    const LogPsiValue target = target_log_psi(c);
    if (target.is_zero) return;
    energy += c.element * std::exp(target.log() - ref);
  });
  return energy;
}

// Same, with a plain configuration -> LogPsiValue evaluator.
template <typename LogPsiFn>
std::complex<double> local_energy(const HamiltonianSpec &spec,
                                  const SpinConfiguration &config, LogPsiFn &&log_psi) {
  const LogPsiValue reference = log_psi(config);
  return local_energy_from(spec, config, reference,
                           [&](const Connection &c) { return log_psi(c.target); });
}

// (-1)^{M_A}, M_A = number of up spins on sublattice A.
int marshall_sign(const LatticeGeometry &geometry, const SpinConfiguration &config,
                  Sublattice sublattice);

}  // namespace signvmc

#endif  // SIGNVMC_HAMILTONIAN_HPP
