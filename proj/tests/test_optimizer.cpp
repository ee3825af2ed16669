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
#include <limits>
#include <random>

#include "signvmc/error.hpp"
#include "signvmc/exact.hpp"
#include "signvmc/lattice.hpp"
#include "signvmc/nqs.hpp"
#include "signvmc/optimizer.hpp"
#include "signvmc/sampler.hpp"
#include "signvmc/symmetry.hpp"
#include "test_support.hpp"

namespace signvmc {
namespace {

using testing::random_matrix;
using testing::random_vector;
using testing::rel_err;

SrStatistics random_stats(std::mt19937_64 &rng, int n_samples, int n_params) {
  SrStatistics s;
  s.obar = random_matrix(rng, 2 * n_samples, n_params, 1.0 / std::sqrt(n_samples));
  s.epsbar = random_vector(rng, 2 * n_samples, 1.0 / std::sqrt(n_samples));
  return s;
}

OptimizerConfig config_with(UpdateRule rule, double m, double beta) {
  OptimizerConfig c;
  c.rule = rule;
  c.m = m;
  c.beta = beta;
  return c;
}

// Stacked [Re; Im] from a complex vector.
Eigen::VectorXd stack(const Eigen::VectorXcd &v) {
  Eigen::VectorXd out(2 * v.size());
  out << v.real(), v.imag();
  return out;
}

TEST(Optimizer, StatisticsOfIdenticalSamplesVanish) {
  std::mt19937_64 rng(1);
  const Eigen::RowVectorXcd row = random_vector(rng, 7).cast<std::complex<double>>().transpose() *
                                  std::complex<double>(0.3, 1.1);
  Eigen::MatrixXcd o(5, 7);
  for (int i = 0; i < 5; ++i) o.row(i) = row;
  const Eigen::VectorXcd e = Eigen::VectorXcd::Constant(5, {-1.5, 0.2});
  const SrStatistics s = build_statistics(o, e);
  EXPECT_EQ(s.obar.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.epsbar.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(s.energy_mean.real(), -1.5, 1e-15);
  EXPECT_NEAR(s.energy_variance, 0.0, 1e-28);
}

TEST(Optimizer, StatisticsLayoutAndCentering) {
  std::mt19937_64 rng(2);
  const int n = 30, p = 6;
  const Eigen::MatrixXcd o = random_matrix(rng, n, p).cast<std::complex<double>>() +
                             std::complex<double>(0, 1) * random_matrix(rng, n, p).cast<std::complex<double>>();
  const Eigen::VectorXcd e = random_vector(rng, n).cast<std::complex<double>>() +
                             std::complex<double>(0, 0.1) * random_vector(rng, n).cast<std::complex<double>>();
  const SrStatistics s = build_statistics(o, e);
  ASSERT_EQ(s.obar.rows(), 2 * n);
  ASSERT_EQ(s.obar.cols(), p);
  EXPECT_LT(s.obar.topRows(n).colwise().sum().cwiseAbs().maxCoeff(), 1e-10 * n);
  EXPECT_LT(s.obar.bottomRows(n).colwise().sum().cwiseAbs().maxCoeff(), 1e-10 * n);
  const std::complex<double> mean = e.mean();
  const Eigen::RowVectorXcd omean = o.colwise().mean();
  const double sq = 1.0 / std::sqrt(static_cast<double>(n));
  for (int i = 0; i < n; i += 7) {
    for (int k = 0; k < p; ++k) {
      EXPECT_NEAR(s.obar(i, k), sq * (o(i, k) - omean(k)).real(), 1e-14);
      EXPECT_NEAR(s.obar(n + i, k), sq * (o(i, k) - omean(k)).imag(), 1e-14);
    }
    EXPECT_NEAR(s.epsbar(i), -sq * (e(i) - mean).real(), 1e-14);
    EXPECT_NEAR(s.epsbar(n + i), -sq * (e(i) - mean).imag(), 1e-14);
  }
  EXPECT_NEAR(s.energy_variance, (e.array() - mean).abs2().mean(), 1e-12);
}

TEST(Optimizer, ExactBatchEnergyIsRayleighQuotient) {
  const auto g = build_square_lattice(2, 2);
  const HamiltonianSpec spec{1.0, 0.0, g};
  const NeuralQuantumState model(g);
  const auto theta = model.random_parameters(3, 0.3, 0.5);
  const auto group = build_trivial_group(g);
  const auto sector = enumerate_sector(g);
  const SrStatistics s =
      assemble_statistics(exact_batch(model, theta.span(), group, sector), model, theta.span(), group, spec);
  Eigen::VectorXcd psi(static_cast<Eigen::Index>(sector.size()));
  for (std::size_t i = 0; i < sector.size(); ++i) {
    psi(static_cast<Eigen::Index>(i)) = model.log_psi(theta.span(), sector[i], group).value();
  }
  const Eigen::MatrixXd h = testing::restrict_real(testing::kron_heisenberg(spec), sector);
  const std::complex<double> rq = psi.dot(h * psi) / psi.squaredNorm();
  EXPECT_NEAR(s.energy_mean.real(), rq.real(), 1e-12);
  EXPECT_NEAR(s.energy_mean.imag(), 0.0, 1e-12);
}

TEST(Optimizer, EigenstateHasZeroVariance) {
  const auto g = build_square_lattice(2, 2);
  const HamiltonianSpec spec{1.0, 0.0, g};
  const SectorSpectrum ed = ed_ground_state(spec);
  auto table = [&](const SpinConfiguration &c) {
    const double v = ed.ground_vector(basis_index(ed.basis, c));
    if (v == 0.0) return LogPsiValue::Zero();
    return LogPsiValue{std::log(std::abs(v)), v < 0 ? M_PI : 0.0, false};
  };
  std::vector<std::complex<double>> eloc;
  std::vector<double> weights;
  for (std::size_t i = 0; i < ed.basis.size(); ++i) {
    const double v = ed.ground_vector(static_cast<Eigen::Index>(i));
    if (std::abs(v) < 1e-12) continue;
    eloc.push_back(local_energy(spec, ed.basis[i], table));
    weights.push_back(v * v);
  }
  const Eigen::Index n = static_cast<Eigen::Index>(eloc.size());
  std::mt19937_64 rng(4);
  const SrStatistics s = build_statistics(random_matrix(rng, n, 3).cast<std::complex<double>>(),
                                          Eigen::Map<Eigen::VectorXcd>(eloc.data(), n), weights);
  EXPECT_LT(s.energy_variance, 1e-14);
  EXPECT_NEAR(s.energy_mean.real(), -2.0, 1e-12);
}

TEST(Optimizer, SrWithZeroObarIsZero) {
  SrStatistics s;
  s.obar = Eigen::MatrixXd::Zero(10, 4);
  s.epsbar = Eigen::VectorXd::Ones(10);
  EXPECT_EQ(solve_sr(s, config_with(UpdateRule::kSr, 1, 0.2)).norm(), 0.0);
}

TEST(Optimizer, MinSrWithZeroEpsIsZero) {
  std::mt19937_64 rng(5);
  SrStatistics s = random_stats(rng, 5, 8);
  s.epsbar.setZero();
  EXPECT_EQ(solve_minsr(s, config_with(UpdateRule::kMinSr, 1, 0.2)).norm(), 0.0);
}

TEST(Optimizer, PushThroughOnRandomSystems) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const SrStatistics s = random_stats(rng, 20, 25);  // 40 x 25 stacked
    for (double beta : {1e-4, 0.05, 0.2}) {
      const auto c = config_with(UpdateRule::kSr, 1, beta);
      EXPECT_LT(rel_err(solve_sr(s, c), solve_minsr(s, c)), 1e-10);
    }
  }
}

TEST(Optimizer, SrAccurateOnWideSystemsWithSmallBeta) {
  // 4 x 300 with |Ob|^2 / beta near 1e6; reference V diag(s / (s^2 + b)) U^T eps.
  std::mt19937_64 rng(61);
  for (int t = 0; t < 5; ++t) {
    const SrStatistics s = random_stats(rng, 2, 300);
    const double beta = 1e-4;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.obar, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::ArrayXd sv = svd.singularValues().array();
    const Eigen::VectorXd reference =
        svd.matrixV() *
        ((sv / (sv.square() + beta)) * (svd.matrixU().transpose() * s.epsbar).array()).matrix();
    const auto c = config_with(UpdateRule::kSr, 1, beta);
    EXPECT_LT(rel_err(solve_sr(s, c), reference), 1e-12);
    EXPECT_LT(rel_err(solve_minsr(s, c), reference), 1e-12);
  }
}

TEST(Optimizer, LargeBetaLimitIsScaledGradient) {
  std::mt19937_64 rng(7);
  const SrStatistics s = random_stats(rng, 20, 25);
  const double beta = 1e8;
  const Eigen::VectorXd limit = s.obar.transpose() * s.epsbar / beta;
  EXPECT_LT(rel_err(solve_sr(s, config_with(UpdateRule::kSr, 1, beta)), limit), 1e-6);
  EXPECT_LT(rel_err(solve_minsr(s, config_with(UpdateRule::kSr, 1, beta)), limit), 1e-6);
}

TEST(Optimizer, SingleSampleMinSrClosedForm) {
  std::mt19937_64 rng(8);
  const SrStatistics s = random_stats(rng, 1, 6);
  const double beta = 0.3;
  const Eigen::RowVectorXd r = s.obar.row(0), q = s.obar.row(1);
  // (A A^T + beta I) is [[a, b], [b, d]]; invert by hand.
  const double a = r.squaredNorm() + beta, b = r.dot(q), d = q.squaredNorm() + beta;
  const double det = a * d - b * b;
  const double y0 = (d * s.epsbar(0) - b * s.epsbar(1)) / det;
  const double y1 = (-b * s.epsbar(0) + a * s.epsbar(1)) / det;
  const Eigen::VectorXd expected = y0 * r.transpose() + y1 * q.transpose();
  EXPECT_LT(rel_err(solve_minsr(s, config_with(UpdateRule::kMinSr, 1, beta)), expected), 1e-12);
}

TEST(Optimizer, ModifiedRulesReduceAtMEqualOne) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const SrStatistics s = random_stats(rng, 15, 22);
    for (double beta : {1e-4, 0.05, 0.2}) {
      const auto c = config_with(UpdateRule::kSr, 1.0, beta);
      const Eigen::VectorXd sr = solve_sr(s, c);
      const Eigen::VectorXd minsr = solve_minsr(s, c);
      EXPECT_LT(rel_err(solve_eps_tilde(s, c, SolverVariant::kSr), sr), 1e-10);
      EXPECT_LT(rel_err(solve_eps_tilde(s, c, SolverVariant::kMinSr), minsr), 1e-10);
      EXPECT_LT(rel_err(solve_o_tilde(s, c, SolverVariant::kSr), sr), 1e-10);
      // The two-regularizer rule reduces to MinSR in the exact-constraint
      // limit beta1 -> 0.
      const Eigen::VectorXd rhs = energy_gradient_rhs(s);
      EXPECT_LT(rel_err(linalg::o_tilde_minsr(s.obar, rhs, beta, 0.0), minsr), 1e-10);
    }
  }
}

TEST(Optimizer, OTildeMinSrAtMEqualOneWithEqualBetas) {
  // Ob^T (G + b)^-1 (G + b1)^-1 Ob Ob^T e = (S + b)^-1 S (S + b1)^-1 Ob^T e
  // with S = Ob^T Ob, G = Ob Ob^T: an extra S (S + b1)^-1 relative to SR.
  std::mt19937_64 rng(19);
  const SrStatistics s = random_stats(rng, 15, 22);
  const double beta = 0.05;
  const Eigen::MatrixXd sm = s.obar.transpose() * s.obar;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(22, 22);
  const Eigen::VectorXd g = s.obar.transpose() * s.epsbar;
  const Eigen::VectorXd expected = (sm + beta * id).inverse() * sm * (sm + beta * id).inverse() * g;
  const auto c = config_with(UpdateRule::kOTildeMinSr, 1.0, beta);
  EXPECT_LT(rel_err(solve_o_tilde(s, c, SolverVariant::kMinSr), expected), 1e-10);
}

TEST(Optimizer, EpsTildeIgnoresMWhenEnergiesAreReal) {
  std::mt19937_64 rng(10);
  SrStatistics s = random_stats(rng, 12, 9);
  s.epsbar.tail(12).setZero();
  for (SolverVariant v : {SolverVariant::kSr, SolverVariant::kMinSr}) {
    const Eigen::VectorXd base = solve_eps_tilde(s, config_with(UpdateRule::kEpsTildeSr, 1, 0.1), v);
    for (double m : {2.0, 4.0, 11.0}) {
      EXPECT_EQ(solve_eps_tilde(s, config_with(UpdateRule::kEpsTildeSr, m, 0.1), v), base);
    }
  }
}

TEST(Optimizer, EpsTildeEqualsSrOnHandModifiedResidual) {
  std::mt19937_64 rng(11);
  const int n = 10, p = 14;
  const SrStatistics s = random_stats(rng, n, p);
  const double m = 4.0;
  const Eigen::VectorXcd eps = s.epsbar.head(n).cast<std::complex<double>>() +
                               std::complex<double>(0, 1) * s.epsbar.tail(n).cast<std::complex<double>>();
  const Eigen::VectorXcd eps_tilde = eps.real().cast<std::complex<double>>() +
                                     std::complex<double>(0, m) * eps.imag().cast<std::complex<double>>();
  SrStatistics modified = s;
  modified.epsbar = stack(eps_tilde);
  const auto c = config_with(UpdateRule::kEpsTildeSr, m, 0.05);
  EXPECT_LT(rel_err(solve_eps_tilde(s, c, SolverVariant::kSr), solve_sr(modified, c)), 1e-12);
  EXPECT_LT(rel_err(solve_eps_tilde(s, c, SolverVariant::kMinSr), solve_minsr(modified, c)), 1e-12);
}

TEST(Optimizer, OTildeKeepsGradientUnmodified) {
  std::mt19937_64 rng(12);
  const SrStatistics s = random_stats(rng, 10, 14);
  const Eigen::VectorXd rhs = s.obar.transpose() * s.epsbar;
  EXPECT_EQ(energy_gradient_rhs(s), rhs);
  EXPECT_EQ(energy_gradient(s), -2.0 * rhs);
  const auto c = config_with(UpdateRule::kOTildeSr, 4.0, 0.2);
  const Eigen::MatrixXd ot = linalg::scale_real_block(s.obar, 4.0);
  EXPECT_LT(rel_err(solve_o_tilde(s, c, SolverVariant::kSr), linalg::o_tilde_sr(ot, rhs, 0.2)), 1e-12);
  EXPECT_EQ(solve_o_tilde(s, c, SolverVariant::kMinSr), linalg::o_tilde_minsr(ot, rhs, 0.2, 0.2));
  // The matrix is m Re O + i Im O in stacked form.
  EXPECT_EQ(ot.topRows(10), 4.0 * s.obar.topRows(10));
  EXPECT_EQ(ot.bottomRows(10), s.obar.bottomRows(10));
}

TEST(Optimizer, OTildeAgreesWithDirectFormulas) {
  std::mt19937_64 rng(13);
  const int n = 12, p = 20;
  const SrStatistics s = random_stats(rng, n, p);
  const double m = 4.0, beta = 0.05, beta1 = 0.09;
  Eigen::MatrixXd ot = s.obar;
  ot.topRows(n) *= m;
  const Eigen::VectorXd g = s.obar.transpose() * s.epsbar;
  const Eigen::MatrixXd ip = Eigen::MatrixXd::Identity(p, p);
  const Eigen::MatrixXd is = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  const Eigen::VectorXd sr = (ot.transpose() * ot + beta * ip).inverse() * g;
  const Eigen::MatrixXd gram = ot * ot.transpose();
  const Eigen::VectorXd minsr =
      ot.transpose() * (gram + beta * is).inverse() * (gram + beta1 * is).inverse() * ot * g;
  auto c = config_with(UpdateRule::kOTildeSr, m, beta);
  EXPECT_LT(rel_err(solve_o_tilde(s, c, SolverVariant::kSr), sr), 1e-10);
  c.beta1 = beta1;
  EXPECT_LT(rel_err(solve_o_tilde(s, c, SolverVariant::kMinSr), minsr), 1e-10);
}

TEST(Optimizer, OTildeWithRealObarRescalesRegularizer) {
  // With Im O = 0 the modified matrix is m Re O, so the step equals the plain
  // one at beta / m^2 divided by m^2.
  std::mt19937_64 rng(14);
  SrStatistics s = random_stats(rng, 10, 8);
  s.obar.bottomRows(10).setZero();
  const double m = 3.0, beta = 0.2;
  const Eigen::VectorXd o_tilde = solve_o_tilde(s, config_with(UpdateRule::kOTildeSr, m, beta), SolverVariant::kSr);
  const Eigen::VectorXd plain = solve_sr(s, config_with(UpdateRule::kSr, 1, beta / (m * m))) / (m * m);
  EXPECT_LT(rel_err(o_tilde, plain), 1e-10);
}

TEST(Optimizer, SvdPreconditionerIdentity) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 10; ++t) {
    const Eigen::MatrixXd ot = random_matrix(rng, 40, 15);
    const Eigen::VectorXd rhs = random_vector(rng, 15);
    const Eigen::VectorXd direct = (ot.transpose() * ot).ldlt().solve(rhs);
    EXPECT_LT(rel_err(linalg::o_tilde_minsr(ot, rhs, 0.0, 0.0), direct), 1e-8);
  }
}

TEST(Optimizer, SolverErrors) {
  std::mt19937_64 rng(16);
  SrStatistics s = random_stats(rng, 4, 5);
  try {
    solve_sr(s, config_with(UpdateRule::kSr, 1, 0.0));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
  s.obar(0, 0) = std::numeric_limits<double>::quiet_NaN();
  for (UpdateRule rule : {UpdateRule::kSr, UpdateRule::kMinSr, UpdateRule::kOTildeMinSr}) {
    try {
      solve_update(s, config_with(rule, 2, 0.1));
      FAIL();
    } catch (const Error &e) {
      EXPECT_EQ(e.kind(), ErrorKind::kFactorizationFailure);
    }
  }
}

TEST(Optimizer, SolveUpdateDispatch) {
  std::mt19937_64 rng(17);
  const SrStatistics s = random_stats(rng, 6, 9);
  const double m = 4.0, beta = 0.1;
  EXPECT_EQ(solve_update(s, config_with(UpdateRule::kSr, m, beta)), solve_sr(s, config_with(UpdateRule::kSr, m, beta)));
  EXPECT_EQ(solve_update(s, config_with(UpdateRule::kMinSr, m, beta)), solve_minsr(s, config_with(UpdateRule::kSr, m, beta)));
  EXPECT_EQ(solve_update(s, config_with(UpdateRule::kEpsTildeMinSr, m, beta)),
            solve_eps_tilde(s, config_with(UpdateRule::kSr, m, beta), SolverVariant::kMinSr));
  EXPECT_EQ(solve_update(s, config_with(UpdateRule::kOTildeSr, m, beta)),
            solve_o_tilde(s, config_with(UpdateRule::kSr, m, beta), SolverVariant::kSr));
}

TEST(Optimizer, NagStepArithmetic) {
  OptimizerConfig c;
  c.momentum_mu = 0.5;
  c.learning_rate = 0.04;
  OptimizerState st = OptimizerState::Initial(2, c);
  Eigen::VectorXd theta(2);
  theta << 1.0, -2.0;
  Eigen::VectorXd d1(2), d2(2);
  d1 << 0.5, 1.0;
  d2 << -1.0, 2.0;
  nag_step(st, theta, d1, c);
  EXPECT_NEAR(st.velocity(0), -0.02, 1e-15);
  EXPECT_NEAR(st.velocity(1), -0.04, 1e-15);
  EXPECT_NEAR(theta(0), 0.98, 1e-15);
  EXPECT_NEAR(theta(1), -2.04, 1e-15);
  nag_step(st, theta, d2, c);
  EXPECT_NEAR(st.velocity(0), 0.03, 1e-15);
  EXPECT_NEAR(st.velocity(1), -0.10, 1e-15);
  EXPECT_NEAR(theta(0), 1.01, 1e-15);
  EXPECT_NEAR(theta(1), -2.14, 1e-15);
  EXPECT_EQ(st.step, 2);
}

TEST(Optimizer, NagStepLimits) {
  OptimizerConfig c;
  c.momentum_mu = 0.0;
  c.learning_rate = 0.1;
  OptimizerState st = OptimizerState::Initial(3, c);
  st.velocity << 5, 5, 5;
  Eigen::VectorXd theta = Eigen::VectorXd::Ones(3);
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(3, 1, 3);
  nag_step(st, theta, d, c);
  EXPECT_TRUE(theta.isApprox(Eigen::VectorXd::Ones(3) - 0.1 * d, 1e-15));
  c.momentum_mu = 0.5;
  st.velocity << 1.0, -2.0, 0.5;
  theta.setZero();
  nag_step(st, theta, Eigen::VectorXd::Zero(3), c);
  EXPECT_EQ(theta, Eigen::Vector3d(0.5, -1.0, 0.25));
}

TEST(Optimizer, AdaptiveLrBranches) {
  OptimizerConfig c;
  c.lr_cap = 0.2;
  c.lr_growth = 1.2;
  OptimizerState st;
  st.tau = 0.1;
  EXPECT_DOUBLE_EQ(adaptive_lr(st, 1.0, -1.0, c), 0.05);
  EXPECT_DOUBLE_EQ(adaptive_lr(st, 1.0, 0.5, c), std::min(1.2 * 0.1, 0.2));
  EXPECT_DOUBLE_EQ(adaptive_lr(st, 0.7, 0.7, c), std::min(1.2 * 0.1, 0.2));
  st.tau = 0.18;
  EXPECT_DOUBLE_EQ(adaptive_lr(st, 1.0, 0.5, c), 0.2);
  EXPECT_DOUBLE_EQ(adaptive_lr(st, 0.0, 0.0, c), 0.2);
}

TEST(Optimizer, ExactGradientMatchesFiniteDifferenceOfEnergy) {
  const auto g = build_square_lattice(2, 2);
  const HamiltonianSpec spec{1.0, 0.5, g};
  const NeuralQuantumState model(g);
  const auto group = build_c4v(g);
  const auto sector = enumerate_sector(g);
  const Eigen::MatrixXd h = testing::restrict_real(testing::kron_heisenberg(spec), sector);
  auto theta = model.random_parameters(18, 0.3, 0.5);
  std::mt19937_64 rng(18);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int j = 0; j < model.layout().hidden; ++j) {
    theta.values()(model.layout().b1_offset + j) = u(rng);
    theta.values()(model.layout().b2_offset + j) = u(rng);
  }
  auto energy = [&](const Eigen::VectorXd &t) {
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(sector.size()));
    for (std::size_t i = 0; i < sector.size(); ++i) {
      psi(static_cast<Eigen::Index>(i)) =
          model.log_psi({t.data(), static_cast<std::size_t>(t.size())}, sector[i], group).value();
    }
    return (psi.dot(h * psi) / psi.squaredNorm()).real();
  };
  const SrStatistics s =
      assemble_statistics(exact_batch(model, theta.span(), group, sector), model, theta.span(), group, spec);
  const Eigen::VectorXd grad = energy_gradient(s);
  const double h_step = 1e-6;
  double worst = 0.0;
  Eigen::VectorXd t = theta.values();
  for (int k = 0; k < model.n_parameters(); k += 3) {
    t(k) += h_step;
    const double plus = energy(t);
    t(k) -= 2 * h_step;
    const double minus = energy(t);
    t(k) += h_step;
    const double fd = (plus - minus) / (2 * h_step);
    worst = std::max(worst, std::abs(grad(k) - fd) / std::max(std::abs(fd), 1e-3));
  }
  EXPECT_LT(worst, 1e-6);
}

}  // namespace
}  // namespace signvmc
