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

#include "signvmc/lattice.hpp"

#include <algorithm>
#include <string>

#include "signvmc/error.hpp"

namespace signvmc {
namespace {

void add_bond(std::vector<Bond> &bonds, int a, int b) {
  if (a == b) return;
  bonds.push_back(Bond{std::min(a, b), std::max(a, b)});
}

void sort_unique(std::vector<Bond> &bonds) {
  std::sort(bonds.begin(), bonds.end());
  bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());
}

void fill_masks(LatticeGeometry &g) {
  g.sublattice_a_checkerboard = 0;
  g.sublattice_a_stripe = 0;
  for (int s = 0; s < g.n_sites; ++s) {
    const int i = g.row(s);
    const int j = g.col(s);
    if ((i + j) % 2 == 0) g.sublattice_a_checkerboard |= std::uint64_t{1} << s;
    if (i % 2 == 0) g.sublattice_a_stripe |= std::uint64_t{1} << s;
  }
}

}  // namespace

LatticeGeometry build_square_lattice(int lx, int ly) {
  if (lx < 2 || ly < 2) {
    throw Error(ErrorKind::kDimensionTooSmall,
                "lattice needs lx, ly >= 2, got " + std::to_string(lx) + "x" +
                    std::to_string(ly));
  }
  if (lx % 2 != 0 || ly % 2 != 0) {
    throw Error(ErrorKind::kOddDimension,
                "sublattice partition needs even lx and ly, got " +
                    std::to_string(lx) + "x" + std::to_string(ly));
  }
  if (lx * ly > SpinConfiguration::kMaxSites) {
    throw Error(ErrorKind::kInvalidArgument, "at most 64 sites are supported");
  }
  LatticeGeometry g;
  g.lx = lx;
  g.ly = ly;
  g.n_sites = lx * ly;
  for (int i = 0; i < ly; ++i) {
    for (int j = 0; j < lx; ++j) {
      const int s = g.site(i, j);
      add_bond(g.j1_bonds, s, g.site(i, j + 1));
      add_bond(g.j1_bonds, s, g.site(i + 1, j));
      add_bond(g.j2_bonds, s, g.site(i + 1, j + 1));
      add_bond(g.j2_bonds, s, g.site(i + 1, j - 1));
    }
  }
  sort_unique(g.j1_bonds);
  sort_unique(g.j2_bonds);
  fill_masks(g);
  return g;
}

LatticeGeometry build_chain(int n) {
  if (n < 2) {
    throw Error(ErrorKind::kDimensionTooSmall, "chain needs at least 2 sites");
  }
  if (n > SpinConfiguration::kMaxSites) {
    throw Error(ErrorKind::kInvalidArgument, "at most 64 sites are supported");
  }
  LatticeGeometry g;
  g.lx = n;
  g.ly = 1;
  g.n_sites = n;
  for (int j = 0; j < n; ++j) {
    add_bond(g.j1_bonds, j, (j + 1) % n);
    add_bond(g.j2_bonds, j, (j + 2) % n);
  }
  sort_unique(g.j1_bonds);
  sort_unique(g.j2_bonds);
  fill_masks(g);
  // A ring has no row structure; the stripe partition falls back to
  // alternating sites two apart.
  g.sublattice_a_stripe = 0;
  for (int j = 0; j < n; ++j) {
    if ((j / 2) % 2 == 0) g.sublattice_a_stripe |= std::uint64_t{1} << j;
  }
  return g;
}

SpinConfiguration neel_state(const LatticeGeometry &geometry) {
  return SpinConfiguration(geometry.sublattice_a_checkerboard, geometry.n_sites);
}

}  // namespace signvmc
