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

#ifndef SIGNVMC_SYMMETRY_HPP
#define SIGNVMC_SYMMETRY_HPP

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "signvmc/lattice.hpp"
#include "signvmc/spin_config.hpp"

namespace signvmc {

// Point operations of C4v. Rotations and mirrors act about the centre of the
// lx = ly torus: C4 maps lattice coordinates (row i, col j) to (j, L-1-i).
enum class PointOp { kE, kC4, kC2, kC4Inv, kSigmaX, kSigmaY, kSigmaD, kSigmaDPrime };

inline constexpr std::array<PointOp, 8> kAllPointOps = {
    PointOp::kE,      PointOp::kC4,     PointOp::kC2,     PointOp::kC4Inv,
    PointOp::kSigmaX, PointOp::kSigmaY, PointOp::kSigmaD, PointOp::kSigmaDPrime};

std::string PointOpName(PointOp op);

// Wave vector on the reciprocal grid of the torus:
// k = 2 pi (qx / lx, qy / ly), x along columns, y along rows.
struct WaveVector {
  int qx = 0;
  int qy = 0;
  friend bool operator==(const WaveVector &, const WaveVector &) = default;
};

struct SymmetryLabel {
  PointOp point = PointOp::kE;
  int tx = 0;  // translation applied after the point operation (columns)
  int ty = 0;  // (rows)
  // Translation part v of g(x) = R x + v with R the origin-fixing linear map;
  // this is what enters the Bloch phase exp(-i k.v).
  int vx = 0;
  int vy = 0;
};

struct SymmetryOp {
  std::vector<int> site_permutation;  // image of each site
  SymmetryLabel label;
};

struct IrrepLabel {
  WaveVector k;
  std::string point_irrep = "A1";
};

struct SymmetryGroup {
  std::vector<SymmetryOp> ops;
  std::vector<std::complex<double>> characters;  // one per op, 1-D irrep
  IrrepLabel irrep;
  int n_sites = 0;

  std::size_t size() const { return ops.size(); }
  // Index of the op with the given permutation (first match for
  // non-faithful actions on tiny tori).
  std::optional<int> find(const std::vector<int> &permutation) const;

  std::map<std::vector<int>, int> index;  // filled by the builders
};

// {E} with character 1.
SymmetryGroup build_trivial_group(const LatticeGeometry &geometry);

// The eight C4v operations with A1 characters. Throws NotSquare.
SymmetryGroup build_c4v(const LatticeGeometry &geometry,
                        const std::string &point_irrep = "A1");

// Little group of k inside T x| C4v with characters exp(-i k.v) chi_R(R).
// Point irreps A1, A2, B1, B2 are restricted to the little co-group; E is
// rejected as multi-dimensional.
SymmetryGroup build_space_group(const LatticeGeometry &geometry, WaveVector k,
                                const std::string &point_irrep = "A1");

// Pure translation group with Bloch characters exp(-i k.t). Works for any
// periodic geometry, including chains.
SymmetryGroup build_translation_group(const LatticeGeometry &geometry, WaveVector k);

SymmetryOp compose(const SymmetryOp &g, const SymmetryOp &h);  // g after h

// Spin at site s moves to site_permutation[s].
SpinConfiguration apply(const SymmetryOp &op, const SpinConfiguration &config);

struct OrbitMember {
  SpinConfiguration config;
  int op_index = 0;  // ops[op_index] maps the canonical configuration to config
};

struct Orbit {
  SpinConfiguration canonical;  // minimum of the bit-packed members
  std::vector<OrbitMember> members;
  int stabilizer_size = 0;  // number of ops (with multiplicity) fixing canonical
  std::size_t size() const { return members.size(); }
};

Orbit orbit(const SymmetryGroup &group, const SpinConfiguration &config);

// Canonical representative only (no member bookkeeping).
SpinConfiguration canonical(const SymmetryGroup &group, const SpinConfiguration &config);

// Characters of the 1-D irrep `name` of C4v at `op`. Throws UnsupportedIrrep.
double point_character(const std::string &name, PointOp op);

}  // namespace signvmc

#endif  // SIGNVMC_SYMMETRY_HPP
