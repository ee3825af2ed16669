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

#ifndef SIGNVMC_LATTICE_HPP
#define SIGNVMC_LATTICE_HPP

#include <cstdint>
#include <vector>

#include "signvmc/spin_config.hpp"

namespace signvmc {

struct Bond {
  int a = 0;  // a < b
  int b = 0;
  friend auto operator<=>(const Bond &, const Bond &) = default;
};

enum class Sublattice { kCheckerboard, kStripe };

// Periodic rectangular lattice. Sites are row-major: site(i, j) = i * lx + j
// with row i in [0, ly) and column j in [0, lx).
struct LatticeGeometry {
  int lx = 0;
  int ly = 0;
  int n_sites = 0;
  std::vector<Bond> j1_bonds;  // sorted, unique
  std::vector<Bond> j2_bonds;  // sorted, unique
  std::uint64_t sublattice_a_checkerboard = 0;  // (i + j) even
  std::uint64_t sublattice_a_stripe = 0;        // even rows

  int site(int row, int col) const {
    const int r = ((row % ly) + ly) % ly;
    const int c = ((col % lx) + lx) % lx;
    return r * lx + c;
  }
  int row(int s) const { return s / lx; }
  int col(int s) const { return s % lx; }

  std::uint64_t sublattice_mask(Sublattice which) const {
    return which == Sublattice::kCheckerboard ? sublattice_a_checkerboard
                                              : sublattice_a_stripe;
  }
};

// Square torus used for all physics runs. Throws OddDimension or
// DimensionTooSmall.
LatticeGeometry build_square_lattice(int lx, int ly);

// Periodic ring of n sites (lx = n, ly = 1). J1 couples i and i+1, J2 couples
// i and i+2. Used for small analytic checks (two-site singlet, four-site
// translation sectors).
LatticeGeometry build_chain(int n);

// Neel state with up spins on checkerboard sublattice A.
SpinConfiguration neel_state(const LatticeGeometry &geometry);

}  // namespace signvmc

#endif  // SIGNVMC_LATTICE_HPP
