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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "signvmc/error.hpp"
#include "signvmc/exact.hpp"
#include "signvmc/hamiltonian.hpp"
#include "signvmc/lattice.hpp"
#include "test_support.hpp"

namespace signvmc {
namespace {

HamiltonianSpec spec_for(int lx, int ly, double j2) {
  return HamiltonianSpec{1.0, j2, build_square_lattice(lx, ly)};
}

LogPsiValue constant_log_psi(const SpinConfiguration &) { return {0.0, 0.0, false}; }

TEST(Hamiltonian, DiagonalEnergyExamples) {
  const auto s0 = spec_for(4, 4, 0.0);
  const auto s5 = spec_for(4, 4, 0.5);
  const auto neel = neel_state(s0.geometry);
  EXPECT_DOUBLE_EQ(diagonal_energy(s0, SpinConfiguration::AllUp(16)), 8.0);
  EXPECT_DOUBLE_EQ(diagonal_energy(s0, neel), -8.0);
  EXPECT_DOUBLE_EQ(diagonal_energy(s5, neel), -4.0);
}

TEST(Hamiltonian, ConnectionExamples) {
  const auto s0 = spec_for(4, 4, 0.0);
  EXPECT_TRUE(connections(s0, SpinConfiguration::AllUp(16)).empty());
  const auto neel = neel_state(s0.geometry);
  const auto conns = connections(s0, neel);
  ASSERT_EQ(conns.size(), 32u);
  for (const auto &c : conns) {
    EXPECT_DOUBLE_EQ(c.element, 0.5);
    EXPECT_EQ(std::popcount(c.target.bits() ^ neel.bits()), 2);
    EXPECT_EQ(c.target.magnetization(), neel.magnetization());
  }
}

TEST(Hamiltonian, ConnectionsUseBondClassElement) {
  const HamiltonianSpec spec{0.7, 0.3, build_square_lattice(4, 4)};
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const SpinConfiguration c(rng(), 16);
    for (const auto &conn : connections(spec, c)) {
      const Bond b{conn.site_a, conn.site_b};
      const bool is_j1 = std::binary_search(spec.geometry.j1_bonds.begin(),
                                            spec.geometry.j1_bonds.end(), b);
      EXPECT_DOUBLE_EQ(conn.element, is_j1 ? 0.35 : 0.15);
      EXPECT_NE(c.up(conn.site_a), c.up(conn.site_b));
      EXPECT_EQ(conn.target, c.exchanged(conn.site_a, conn.site_b));
    }
  }
}

// Row of H from the Kronecker construction vs diagonal + connections.
void check_rows(const HamiltonianSpec &spec) {
  const Eigen::MatrixXcd full = testing::kron_heisenberg(spec);
  const int n = spec.geometry.n_sites;
  ASSERT_LT((full - full.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    const SpinConfiguration c(b, n);
    std::map<std::uint64_t, double> row;
    row[b] += diagonal_energy(spec, c);
    for (const auto &conn : connections(spec, c)) row[conn.target.bits()] += conn.element;
    for (Eigen::Index j = 0; j < full.cols(); ++j) {
      const auto it = row.find(static_cast<std::uint64_t>(j));
      const double mine = it == row.end() ? 0.0 : it->second;
      EXPECT_NEAR(full(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)).real(), mine,
                  1e-14);
      EXPECT_NEAR(full(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(b)).imag(), 0.0,
                  1e-14);
    }
  }
}

TEST(Hamiltonian, RowsMatchKroneckerOperatorTwoByTwo) { check_rows(spec_for(2, 2, 0.0)); }
TEST(Hamiltonian, RowsMatchKroneckerOperatorTwoByTwoJ2) { check_rows(spec_for(2, 2, 0.5)); }
TEST(Hamiltonian, RowsMatchKroneckerOperatorTwoByFour) { check_rows(spec_for(2, 4, 0.5)); }
TEST(Hamiltonian, RowsMatchKroneckerOperatorChain) {
  check_rows(HamiltonianSpec{1.0, 0.3, build_chain(4)});
}

TEST(Hamiltonian, DenseSectorHermitian) {
  const auto spec = spec_for(2, 4, 0.5);
  const auto basis = testing::brute_sector(8);
  const Eigen::MatrixXd h = dense_sector_hamiltonian(spec, basis);
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((h - testing::restrict_real(testing::kron_heisenberg(spec), basis))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
}

TEST(Hamiltonian, LocalEnergyOfConstantStateOnAllUp) {
  const auto s0 = spec_for(4, 4, 0.0);
  const auto e = local_energy(s0, SpinConfiguration::AllUp(16), constant_log_psi);
  EXPECT_DOUBLE_EQ(e.real(), 8.0);
  EXPECT_DOUBLE_EQ(e.imag(), 0.0);
}

TEST(Hamiltonian, LocalEnergyOfGroundStateIsConstant) {
  for (double j2 : {0.0, 0.5}) {
    const auto spec = spec_for(4, 4, j2);
    const SectorSpectrum ed = ed_ground_state(spec);
    auto table = [&](const SpinConfiguration &c) {
      const std::int64_t i = basis_index(ed.basis, c);
      const double v = ed.ground_vector(i);
      if (std::abs(v) < 1e-300) return LogPsiValue::Zero();
      return LogPsiValue{std::log(std::abs(v)), v < 0 ? M_PI : 0.0, false};
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < ed.basis.size(); i += 7) {
      if (std::abs(ed.ground_vector(static_cast<Eigen::Index>(i))) < 1e-12) continue;
      const auto e = local_energy(spec, ed.basis[i], table);
      worst = std::max(worst, std::abs(e - std::complex<double>(ed.ground_energy, 0.0)));
    }
    EXPECT_LT(worst, 1e-9) << "j2=" << j2;
  }
}

TEST(Hamiltonian, MarshallSignedAmplitudeMakesExchangeTermsNegative) {
  const auto spec = spec_for(4, 4, 0.0);
  const auto &g = spec.geometry;
  auto msr = [&](const SpinConfiguration &c) {
    return LogPsiValue{0.0, marshall_sign(g, c, Sublattice::kCheckerboard) < 0 ? M_PI : 0.0,
                       false};
  };
  const auto neel = neel_state(g);
  const auto e = local_energy(spec, neel, msr);
  EXPECT_NEAR(e.real(), -8.0 - 32 * 0.5, 1e-12);
  EXPECT_NEAR(e.imag(), 0.0, 1e-12);
}

TEST(Hamiltonian, LocalEnergyRejectsZeroReference) {
  const auto spec = spec_for(2, 2, 0.0);
  auto zero = [](const SpinConfiguration &) { return LogPsiValue::Zero(); };
  try {
    local_energy(spec, neel_state(spec.geometry), zero);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kZeroAmplitudeReference);
  }
}

TEST(Hamiltonian, MarshallSignExamples) {
  const auto g = build_square_lattice(4, 4);
  EXPECT_EQ(marshall_sign(g, SpinConfiguration::AllUp(16), Sublattice::kCheckerboard), 1);
  const SpinConfiguration on_a(g.sublattice_a_checkerboard, 16);
  const SpinConfiguration on_b(~g.sublattice_a_checkerboard, 16);
  EXPECT_EQ(marshall_sign(g, on_a, Sublattice::kCheckerboard), 1);
  EXPECT_EQ(marshall_sign(g, on_b, Sublattice::kCheckerboard), 1);
  SpinConfiguration one_flipped = SpinConfiguration::AllUp(16);
  one_flipped.flip(0);  // site 0 is on sublattice A
  EXPECT_EQ(marshall_sign(g, one_flipped, Sublattice::kCheckerboard), -1);
  EXPECT_EQ(marshall_sign(g, one_flipped, Sublattice::kStripe), -1);
  SpinConfiguration b_flipped = SpinConfiguration::AllUp(16);
  b_flipped.flip(1);
  EXPECT_EQ(marshall_sign(g, b_flipped, Sublattice::kCheckerboard), 1);
}

}  // namespace
}  // namespace signvmc
