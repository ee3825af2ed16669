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

#ifndef SIGNVMC_OPTIMIZER_HPP
#define SIGNVMC_OPTIMIZER_HPP

#include <complex>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "signvmc/hamiltonian.hpp"
#include "signvmc/nqs.hpp"
#include "signvmc/sampler.hpp"
#include "signvmc/symmetry.hpp"

namespace signvmc {

enum class UpdateRule { kSr, kMinSr, kEpsTildeSr, kEpsTildeMinSr, kOTildeSr, kOTildeMinSr };
enum class SolverVariant { kSr, kMinSr };
enum class LrMode { kFixed, kAdaptive };

std::string UpdateRuleName(UpdateRule rule);
UpdateRule ParseUpdateRule(const std::string &name);  // throws InvalidConfig
std::string LrModeName(LrMode mode);
LrMode ParseLrMode(const std::string &name);

struct OptimizerConfig {
  UpdateRule rule = UpdateRule::kOTildeSr;
  double m = 4.0;  // step-size ratio of phase to amplitude parameters
  double beta = 0.2;
  std::optional<double> beta1;  // defaults to beta
  double learning_rate = 0.04;
  LrMode lr_mode = LrMode::kAdaptive;
  double momentum_mu = 0.5;
  double lr_cap = 0.2;
  double lr_growth = 1.2;

  double effective_beta1() const { return beta1.value_or(beta); }
  void validate() const;  // throws InvalidConfig naming the offending key
};

struct OptimizerState {
  Eigen::VectorXd velocity;
  double tau = 0.0;
  long long step = 0;
  double last_grad_dot_dir = 0.0;

  static OptimizerState Initial(int n_parameters, const OptimizerConfig &config);
};

// Stacked real statistics. obar rows [0, N) hold Re O-bar and rows [N, 2N)
// hold Im O-bar, with O-bar = sqrt(w) (O - <O>); epsbar = -sqrt(w) (E_loc - E)
// stacked the same way. With uniform weights w = 1/N.
struct SrStatistics {
  Eigen::MatrixXd obar;
  Eigen::VectorXd epsbar;
  std::complex<double> energy_mean{0.0, 0.0};
  double energy_variance = 0.0;

  int n_samples() const { return static_cast<int>(epsbar.size() / 2); }
  int n_parameters() const { return static_cast<int>(obar.cols()); }
};

// Rows of `log_derivatives` are samples. Empty `weights` means uniform.
SrStatistics build_statistics(const Eigen::MatrixXcd &log_derivatives,
                              const Eigen::VectorXcd &local_energies,
                              std::span<const double> weights = {});

// Per-sample log-derivatives and local energies of a batch.
struct SampleEvaluation {
  Eigen::MatrixXcd log_derivatives;
  Eigen::VectorXcd local_energies;
  std::vector<LogPsiValue> log_psis;
};

SampleEvaluation evaluate_samples(const std::vector<SpinConfiguration> &configs,
                                  const NeuralQuantumState &model,
                                  std::span<const double> theta, const SymmetryGroup &group,
                                  const HamiltonianSpec &spec);

// Statistics of a batch: MC batches use uniform weights, exact batches their
// |psi|^2 weights.
SrStatistics assemble_statistics(const SampleBatch &batch, const NeuralQuantumState &model,
                                 std::span<const double> theta, const SymmetryGroup &group,
                                 const HamiltonianSpec &spec);

// Obar^T epsbar, equal to minus half the energy gradient.
Eigen::VectorXd energy_gradient_rhs(const SrStatistics &stats);
// dE/dtheta = 2 Re <O^* (E_loc - E)>.
Eigen::VectorXd energy_gradient(const SrStatistics &stats);

Eigen::VectorXd solve_sr(const SrStatistics &stats, const OptimizerConfig &config);
Eigen::VectorXd solve_minsr(const SrStatistics &stats, const OptimizerConfig &config);
Eigen::VectorXd solve_eps_tilde(const SrStatistics &stats, const OptimizerConfig &config,
                                SolverVariant variant);
Eigen::VectorXd solve_o_tilde(const SrStatistics &stats, const OptimizerConfig &config,
                              SolverVariant variant);
// Dispatches on config.rule.
Eigen::VectorXd solve_update(const SrStatistics &stats, const OptimizerConfig &config);

namespace linalg {

// (A^T A + beta I)^{-1} rhs via Cholesky, retried once at 10 beta.
Eigen::VectorXd regularized_normal_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &rhs,
                                         double beta);
// (A A^T + beta I)^{-1} rhs, same policy.
Eigen::VectorXd regularized_gram_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &rhs,
                                       double beta);

// (A^T A + beta I)^{-1} A^T b
Eigen::VectorXd sr(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, double beta);
// A^T (A A^T + beta I)^{-1} b
Eigen::VectorXd minsr(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, double beta);
// (Ot^T Ot + beta I)^{-1} rhs
Eigen::VectorXd o_tilde_sr(const Eigen::MatrixXd &o_tilde, const Eigen::VectorXd &rhs,
                           double beta);
// Ot^T (Ot Ot^T + beta I)^{-1} (Ot Ot^T + beta1 I)^{-1} Ot rhs. A zero beta or
// beta1 selects the pseudo-inverse of Ot Ot^T.
Eigen::VectorXd o_tilde_minsr(const Eigen::MatrixXd &o_tilde, const Eigen::VectorXd &rhs,
                              double beta, double beta1);

// Re-block rows multiplied by m.
Eigen::MatrixXd scale_real_block(const Eigen::MatrixXd &stacked, double m);
// Im-block entries multiplied by m.
Eigen::VectorXd scale_imag_block(const Eigen::VectorXd &stacked, double m);

}  // namespace linalg

// Nesterov update: v' = mu v - tau * direction, theta' = theta + v'.
// `direction` is evaluated at the look-ahead point theta + mu v.
void nag_step(OptimizerState &state, Eigen::VectorXd &theta, const Eigen::VectorXd &direction,
              const OptimizerConfig &config);

// Secant step for the root of g(tau) = gamma(theta + tau eta) . eta:
// tau' = tau g_old / (g_old - g_new), kept when 0 < tau' < tau, otherwise
// min(lr_growth tau, lr_cap).
double adaptive_lr(const OptimizerState &state, double grad_dot_dir_old,
                   double grad_dot_dir_new, const OptimizerConfig &config);

}  // namespace signvmc

#endif  // SIGNVMC_OPTIMIZER_HPP
