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

#include "signvmc/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "signvmc/error.hpp"

namespace signvmc {
namespace {

struct Coord {
  int i;  // row
  int j;  // col
};

// Point operation about the torus centre, L = lx = ly.
Coord apply_point(PointOp op, Coord c, int L) {
  const int m = L - 1;
  switch (op) {
    case PointOp::kE: return c;
    case PointOp::kC4: return {c.j, m - c.i};
    case PointOp::kC2: return {m - c.i, m - c.j};
    case PointOp::kC4Inv: return {m - c.j, c.i};
    case PointOp::kSigmaX: return {m - c.i, c.j};
    case PointOp::kSigmaY: return {c.i, m - c.j};
    case PointOp::kSigmaD: return {c.j, c.i};
    case PointOp::kSigmaDPrime: return {m - c.j, m - c.i};
  }
  return c;
}

// Origin-fixing linear part acting on (x, y) = (col, row) vectors.
std::array<int, 2> linear_part(PointOp op, int x, int y) {
  switch (op) {
    case PointOp::kE: return {x, y};
    case PointOp::kC4: return {-y, x};
    case PointOp::kC2: return {-x, -y};
    case PointOp::kC4Inv: return {y, -x};
    case PointOp::kSigmaX: return {x, -y};
    case PointOp::kSigmaY: return {-x, y};
    case PointOp::kSigmaD: return {y, x};
    case PointOp::kSigmaDPrime: return {-y, -x};
  }
  return {x, y};
}

int wrap(int v, int n) { return ((v % n) + n) % n; }

SymmetryOp make_op(const LatticeGeometry &g, PointOp point, int tx, int ty) {
  SymmetryOp op;
  op.site_permutation.resize(static_cast<std::size_t>(g.n_sites));
  for (int s = 0; s < g.n_sites; ++s) {
    Coord c = apply_point(point, {g.row(s), g.col(s)}, g.lx);
    op.site_permutation[static_cast<std::size_t>(s)] = g.site(c.i + ty, c.j + tx);
  }
  op.label.point = point;
  op.label.tx = tx;
  op.label.ty = ty;
  const Coord origin = apply_point(point, {0, 0}, g.lx);
  op.label.vx = wrap(origin.j + tx, g.lx);
  op.label.vy = wrap(origin.i + ty, g.ly);
  return op;
}

std::complex<double> bloch_phase(const LatticeGeometry &g, WaveVector k, int vx, int vy) {
  const double angle = 2.0 * std::numbers::pi *
                       (static_cast<double>(k.qx) * vx / g.lx +
                        static_cast<double>(k.qy) * vy / g.ly);
  // Exact values on the common grid points keep A1 characters exactly 1.
  const long long num_x = static_cast<long long>(k.qx) * vx * g.ly;
  const long long num_y = static_cast<long long>(k.qy) * vy * g.lx;
  const long long den = static_cast<long long>(g.lx) * g.ly;
  const long long num = ((num_x + num_y) % den + den) % den;
  if (num == 0) return {1.0, 0.0};
  if (2 * num == den) return {-1.0, 0.0};
  return std::polar(1.0, -angle);
}

void build_index(SymmetryGroup &group) {
  group.index.clear();
  for (std::size_t i = 0; i < group.ops.size(); ++i) {
    group.index.emplace(group.ops[i].site_permutation, static_cast<int>(i));
  }
}

WaveVector reduce(const LatticeGeometry &g, WaveVector k) {
  return {wrap(k.qx, g.lx), wrap(k.qy, g.ly)};
}

bool in_little_cogroup(const LatticeGeometry &g, PointOp op, WaveVector k) {
  const auto rk = linear_part(op, k.qx, k.qy);
  return wrap(rk[0] - k.qx, g.lx) == 0 && wrap(rk[1] - k.qy, g.ly) == 0;
}

void require_square(const LatticeGeometry &g) {
  if (g.lx != g.ly) {
    throw Error(ErrorKind::kNotSquare, "C4v needs lx == ly, got " +
                                           std::to_string(g.lx) + "x" +
                                           std::to_string(g.ly));
  }
}

}  // namespace

std::string PointOpName(PointOp op) {
  switch (op) {
    case PointOp::kE: return "E";
    case PointOp::kC4: return "C4";
    case PointOp::kC2: return "C2";
    case PointOp::kC4Inv: return "C4^3";
    case PointOp::kSigmaX: return "sigma_x";
    case PointOp::kSigmaY: return "sigma_y";
    case PointOp::kSigmaD: return "sigma_d";
    case PointOp::kSigmaDPrime: return "sigma_d'";
  }
  return "?";
}

double point_character(const std::string &name, PointOp op) {
  const bool rotation4 = op == PointOp::kC4 || op == PointOp::kC4Inv;
  const bool axial = op == PointOp::kSigmaX || op == PointOp::kSigmaY;
  const bool diagonal = op == PointOp::kSigmaD || op == PointOp::kSigmaDPrime;
  if (name == "A1" || name == "A") return 1.0;
  if (name == "A2") return (axial || diagonal) ? -1.0 : 1.0;
  if (name == "B1") return (rotation4 || diagonal) ? -1.0 : 1.0;
  if (name == "B2") return (rotation4 || axial) ? -1.0 : 1.0;
  if (name == "E") {
    throw Error(ErrorKind::kUnsupportedIrrep,
                "irrep E of C4v is two-dimensional; only 1-D irreps are supported");
  }
  throw Error(ErrorKind::kUnsupportedIrrep, "unknown point irrep '" + name + "'");
}

std::optional<int> SymmetryGroup::find(const std::vector<int> &permutation) const {
  auto it = index.find(permutation);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

SymmetryGroup build_trivial_group(const LatticeGeometry &geometry) {
  SymmetryGroup group;
  group.n_sites = geometry.n_sites;
  SymmetryOp id;
  id.site_permutation.resize(static_cast<std::size_t>(geometry.n_sites));
  for (int s = 0; s < geometry.n_sites; ++s) id.site_permutation[static_cast<std::size_t>(s)] = s;
  group.ops.push_back(std::move(id));
  group.characters.push_back({1.0, 0.0});
  group.irrep = {{0, 0}, "A1"};
  build_index(group);
  return group;
}

SymmetryGroup build_c4v(const LatticeGeometry &geometry, const std::string &point_irrep) {
  require_square(geometry);
  SymmetryGroup group;
  group.n_sites = geometry.n_sites;
  group.irrep = {{0, 0}, point_irrep};
  for (PointOp op : kAllPointOps) {
    group.ops.push_back(make_op(geometry, op, 0, 0));
    group.characters.push_back({point_character(point_irrep, op), 0.0});
  }
  build_index(group);
  return group;
}

SymmetryGroup build_space_group(const LatticeGeometry &geometry, WaveVector k,
                                const std::string &point_irrep) {
  require_square(geometry);
  k = reduce(geometry, k);
  SymmetryGroup group;
  group.n_sites = geometry.n_sites;
  group.irrep = {k, point_irrep};
  for (PointOp point : kAllPointOps) {
    if (!in_little_cogroup(geometry, point, k)) continue;
    const double chi_point = point_character(point_irrep, point);
    for (int ty = 0; ty < geometry.ly; ++ty) {
      for (int tx = 0; tx < geometry.lx; ++tx) {
        SymmetryOp op = make_op(geometry, point, tx, ty);
        group.characters.push_back(
            chi_point * bloch_phase(geometry, k, op.label.vx, op.label.vy));
        group.ops.push_back(std::move(op));
      }
    }
  }
  build_index(group);
  return group;
}

SymmetryGroup build_translation_group(const LatticeGeometry &geometry, WaveVector k) {
  k = reduce(geometry, k);
  SymmetryGroup group;
  group.n_sites = geometry.n_sites;
  group.irrep = {k, "A"};
  for (int ty = 0; ty < geometry.ly; ++ty) {
    for (int tx = 0; tx < geometry.lx; ++tx) {
      SymmetryOp op;
      op.site_permutation.resize(static_cast<std::size_t>(geometry.n_sites));
      for (int s = 0; s < geometry.n_sites; ++s) {
        op.site_permutation[static_cast<std::size_t>(s)] =
            geometry.site(geometry.row(s) + ty, geometry.col(s) + tx);
      }
      op.label = {PointOp::kE, tx, ty, tx, ty};
      group.characters.push_back(bloch_phase(geometry, k, tx, ty));
      group.ops.push_back(std::move(op));
    }
  }
  build_index(group);
  return group;
}

SymmetryOp compose(const SymmetryOp &g, const SymmetryOp &h) {
  SymmetryOp out;
  const std::size_t n = h.site_permutation.size();
  out.site_permutation.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    out.site_permutation[s] =
        g.site_permutation[static_cast<std::size_t>(h.site_permutation[s])];
  }
  return out;
}

SpinConfiguration apply(const SymmetryOp &op, const SpinConfiguration &config) {
  std::uint64_t out = 0;
  std::uint64_t bits = config.bits();
  while (bits != 0) {
    const int s = std::countr_zero(bits);
    bits &= bits - 1;
    out |= std::uint64_t{1} << op.site_permutation[static_cast<std::size_t>(s)];
  }
  return SpinConfiguration(out, config.n_sites());
}

SpinConfiguration canonical(const SymmetryGroup &group, const SpinConfiguration &config) {
  SpinConfiguration best = config;
  for (const SymmetryOp &op : group.ops) {
    const SpinConfiguration image = apply(op, config);
    if (image < best) best = image;
  }
  return best;
}

Orbit orbit(const SymmetryGroup &group, const SpinConfiguration &config) {
  Orbit result;
  result.canonical = canonical(group, config);
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < group.ops.size(); ++i) {
    const SpinConfiguration image = apply(group.ops[i], result.canonical);
    if (image == result.canonical) ++result.stabilizer_size;
    if (seen.insert(image.bits()).second) {
      result.members.push_back({image, static_cast<int>(i)});
    }
  }
  return result;
}

}  // namespace signvmc
