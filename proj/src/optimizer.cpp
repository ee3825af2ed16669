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

#include "signvmc/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "signvmc/error.hpp"
#include "signvmc/parallel.hpp"

namespace signvmc {
namespace {

void require_positive_beta(const OptimizerConfig &config) {
  if (!(config.beta > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "optimizer.beta must be positive");
  }
  if (!(config.effective_beta1() > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "optimizer.beta1 must be positive");
  }
}

// Factorizes gram + shift with shift = beta, falling back to 10 beta. The
// callback receives the factorization and the shift actually used.
template <typename Solve>
Eigen::VectorXd with_regularized_llt(const Eigen::MatrixXd &gram, double beta, const char *what,
                                     Solve &&solve) {
  const Eigen::Index n = gram.rows();
  for (double shift : {beta, 10.0 * beta}) {
    Eigen::MatrixXd m = gram;
    m.diagonal().array() += shift;
    Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(m);
    if (llt.info() == Eigen::Success) {
      Eigen::VectorXd x = solve(llt, shift);
      if (x.allFinite()) return x;
    }
    if (shift == 0.0) break;
  }
  throw Error(ErrorKind::kFactorizationFailure,
              std::string("Cholesky factorization of the regularized ") + what + " matrix (" +
                  std::to_string(n) + "x" + std::to_string(n) +
                  ") failed; beta is too small for the data scale");
}

Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd &gram, const Eigen::VectorXd &rhs,
                               double beta, const char *what) {
  return with_regularized_llt(gram, beta, what,
                              [&](const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> &llt,
                                  double) -> Eigen::VectorXd { return llt.solve(rhs); });
}

}  // namespace

std::string UpdateRuleName(UpdateRule rule) {
  switch (rule) {
    case UpdateRule::kSr: return "sr";
    case UpdateRule::kMinSr: return "minsr";
    case UpdateRule::kEpsTildeSr: return "eps_tilde_sr";
    case UpdateRule::kEpsTildeMinSr: return "eps_tilde_minsr";
    case UpdateRule::kOTildeSr: return "o_tilde_sr";
    case UpdateRule::kOTildeMinSr: return "o_tilde_minsr";
  }
  return "unknown";
}

UpdateRule ParseUpdateRule(const std::string &name) {
  for (UpdateRule r : {UpdateRule::kSr, UpdateRule::kMinSr, UpdateRule::kEpsTildeSr,
                       UpdateRule::kEpsTildeMinSr, UpdateRule::kOTildeSr,
                       UpdateRule::kOTildeMinSr}) {
    if (UpdateRuleName(r) == name) return r;
  }
  throw Error(ErrorKind::kInvalidConfig,
              "optimizer.rule: unknown update rule '" + name +
                  "' (expected sr, minsr, eps_tilde_sr, eps_tilde_minsr, o_tilde_sr, "
                  "o_tilde_minsr)");
}

std::string LrModeName(LrMode mode) { return mode == LrMode::kFixed ? "fixed" : "adaptive"; }

LrMode ParseLrMode(const std::string &name) {
  if (name == "fixed") return LrMode::kFixed;
  if (name == "adaptive") return LrMode::kAdaptive;
  throw Error(ErrorKind::kInvalidConfig,
              "optimizer.lr_mode: expected 'fixed' or 'adaptive', got '" + name + "'");
}

void OptimizerConfig::validate() const {
  auto fail = [](const std::string &key, const std::string &msg) {
    throw Error(ErrorKind::kInvalidConfig, "optimizer." + key + ": " + msg);
  };
  if (!(m >= 1.0)) fail("m", "must be >= 1");
  if (!(beta > 0.0)) fail("beta", "must be > 0");
  if (beta1 && !(*beta1 > 0.0)) fail("beta1", "must be > 0");
  if (!(learning_rate > 0.0)) fail("learning_rate", "must be > 0");
  if (!(momentum_mu >= 0.0 && momentum_mu <= 1.0)) fail("momentum_mu", "must lie in [0, 1]");
  if (!(lr_cap > 0.0)) fail("lr_cap", "must be > 0");
  if (learning_rate > lr_cap) fail("learning_rate", "must not exceed lr_cap");
  if (!(lr_growth >= 1.0)) fail("lr_growth", "must be >= 1");
}

OptimizerState OptimizerState::Initial(int n_parameters, const OptimizerConfig &config) {
  OptimizerState s;
  s.velocity = Eigen::VectorXd::Zero(n_parameters);
  s.tau = config.learning_rate;
  return s;
}

SrStatistics build_statistics(const Eigen::MatrixXcd &log_derivatives,
                              const Eigen::VectorXcd &local_energies,
                              std::span<const double> weights) {
  const Eigen::Index n = log_derivatives.rows();
  const Eigen::Index p = log_derivatives.cols();
  if (local_energies.size() != n || n == 0) {
    throw Error(ErrorKind::kInvalidArgument, "statistics need one local energy per sample");
  }
  Eigen::VectorXd w(n);
  if (weights.empty()) {
    w.setConstant(1.0 / static_cast<double>(n));
  } else {
    if (static_cast<Eigen::Index>(weights.size()) != n) {
      throw Error(ErrorKind::kInvalidArgument, "statistics weights have the wrong length");
    }
    for (Eigen::Index i = 0; i < n; ++i) w(i) = weights[static_cast<std::size_t>(i)];
    w /= w.sum();
  }

  // Shifting by the first sample before averaging makes identical samples
  // centre to exact zeros.
  SrStatistics s;
  const std::complex<double> e_pivot = local_energies(0);
  std::complex<double> e_shift(0.0, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) e_shift += w(i) * (local_energies(i) - e_pivot);
  const std::complex<double> e_mean = e_pivot + e_shift;
  double variance = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    variance += w(i) * std::norm((local_energies(i) - e_pivot) - e_shift);
  }
  s.energy_mean = e_mean;
  s.energy_variance = variance;

  Eigen::MatrixXcd centered = log_derivatives.rowwise() - log_derivatives.row(0);
  const Eigen::RowVectorXcd o_shift = w.transpose().cast<std::complex<double>>() * centered;
  const Eigen::VectorXd sw = w.cwiseSqrt();
  centered.rowwise() -= o_shift;
  centered = sw.cast<std::complex<double>>().asDiagonal() * centered;
  s.obar.resize(2 * n, p);
  s.obar.topRows(n) = centered.real();
  s.obar.bottomRows(n) = centered.imag();
  const Eigen::VectorXcd eps =
      -(sw.cast<std::complex<double>>().array() *
        ((local_energies.array() - e_pivot) - e_shift)).matrix();
  s.epsbar.resize(2 * n);
  s.epsbar.head(n) = eps.real();
  s.epsbar.tail(n) = eps.imag();
  return s;
}

SampleEvaluation evaluate_samples(const std::vector<SpinConfiguration> &configs,
                                  const NeuralQuantumState &model,
                                  std::span<const double> theta, const SymmetryGroup &group,
                                  const HamiltonianSpec &spec) {
  const int n = static_cast<int>(configs.size());
  SampleEvaluation ev;
  ev.log_derivatives.resize(n, model.n_parameters());
  ev.local_energies.resize(n);
  ev.log_psis.resize(configs.size());
  parallel_for(n, [&](int i) {
    CachedWavefunction wf(model, theta, group);
    wf.reset(configs[static_cast<std::size_t>(i)]);
    ev.log_psis[static_cast<std::size_t>(i)] = wf.log_psi();
    ev.log_derivatives.row(i) = wf.log_derivatives().transpose();
    ev.local_energies(i) = wf.local_energy(spec);
  });
  return ev;
}

SrStatistics assemble_statistics(const SampleBatch &batch, const NeuralQuantumState &model,
                                 std::span<const double> theta, const SymmetryGroup &group,
                                 const HamiltonianSpec &spec) {
  if (batch.weights.empty()) {
    const SampleEvaluation ev = evaluate_samples(batch.configs, model, theta, group, spec);
    return build_statistics(ev.log_derivatives, ev.local_energies);
  }
  // Exact batches may contain configurations where psi cancels; they carry no
  // weight and are left out.
  std::vector<SpinConfiguration> kept;
  std::vector<double> weights;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch.weights[i] > 0.0) {
      kept.push_back(batch.configs[i]);
      weights.push_back(batch.weights[i]);
    }
  }
  const SampleEvaluation ev = evaluate_samples(kept, model, theta, group, spec);
  return build_statistics(ev.log_derivatives, ev.local_energies, weights);
}

Eigen::VectorXd energy_gradient_rhs(const SrStatistics &stats) {
  return stats.obar.transpose() * stats.epsbar;
}

Eigen::VectorXd energy_gradient(const SrStatistics &stats) {
  return -2.0 * energy_gradient_rhs(stats);
}

namespace linalg {

Eigen::VectorXd regularized_normal_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &rhs,
                                         double beta) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(a.cols(), a.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  return cholesky_solve(gram, rhs, beta, "normal");
}

Eigen::VectorXd regularized_gram_solve(const Eigen::MatrixXd &a, const Eigen::VectorXd &rhs,
                                       double beta) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(a.rows(), a.rows());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a);
  return cholesky_solve(gram, rhs, beta, "sample-space");
}

Eigen::VectorXd sr(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, double beta) {
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(a.cols(), a.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
  // One refinement step with the residual a^T (b - a x) - shift x evaluated
  // from a and b, which removes the rounding of a^T b amplified by 1 / beta.
  return with_regularized_llt(
      gram, beta, "normal",
      [&](const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> &llt, double shift) -> Eigen::VectorXd {
        Eigen::VectorXd x = llt.solve(a.transpose() * b);
        const Eigen::VectorXd residual = a.transpose() * (b - a * x) - shift * x;
        x += llt.solve(residual);
        return x;
      });
}

Eigen::VectorXd minsr(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, double beta) {
  return a.transpose() * regularized_gram_solve(a, b, beta);
}

Eigen::VectorXd o_tilde_sr(const Eigen::MatrixXd &o_tilde, const Eigen::VectorXd &rhs,
                           double beta) {
  return regularized_normal_solve(o_tilde, rhs, beta);
}

Eigen::VectorXd o_tilde_minsr(const Eigen::MatrixXd &o_tilde, const Eigen::VectorXd &rhs,
                              double beta, double beta1) {
  if (beta > 0.0 && beta1 > 0.0) {
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(o_tilde.rows(), o_tilde.rows());
    gram.selfadjointView<Eigen::Lower>().rankUpdate(o_tilde);
    const Eigen::VectorXd y = o_tilde * rhs;
    const Eigen::VectorXd z1 = cholesky_solve(gram, y, beta1, "sample-space");
    const Eigen::VectorXd z2 = cholesky_solve(gram, z1, beta, "sample-space");
    return o_tilde.transpose() * z2;
  }
  // Pseudo-inverse branch: with Ot = U S V^T the operator is
  // V S f(S^2) S V^T, f(s) = g_beta(s) g_beta1(s).
  Eigen::BDCSVD<Eigen::MatrixXd> svd(o_tilde, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd &sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? sv(0) * 1e-12 * static_cast<double>(std::max(o_tilde.rows(), o_tilde.cols())) : 0.0;
  auto g = [&](double s2, double b) {
    if (b > 0.0) return 1.0 / (s2 + b);
    return 1.0 / s2;
  };
  Eigen::VectorXd coeff = svd.matrixV().transpose() * rhs;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    const double s = sv(k);
    if (s <= cutoff) {
      coeff(k) = 0.0;
      continue;
    }
    coeff(k) *= s * s * g(s * s, beta) * g(s * s, beta1);
  }
  return svd.matrixV() * coeff;
}

Eigen::MatrixXd scale_real_block(const Eigen::MatrixXd &stacked, double m) {
  Eigen::MatrixXd out = stacked;
  out.topRows(stacked.rows() / 2) *= m;
  return out;
}

Eigen::VectorXd scale_imag_block(const Eigen::VectorXd &stacked, double m) {
  Eigen::VectorXd out = stacked;
  out.tail(stacked.size() / 2) *= m;
  return out;
}

}  // namespace linalg

Eigen::VectorXd solve_sr(const SrStatistics &stats, const OptimizerConfig &config) {
  require_positive_beta(config);
  return linalg::sr(stats.obar, stats.epsbar, config.beta);
}

Eigen::VectorXd solve_minsr(const SrStatistics &stats, const OptimizerConfig &config) {
  require_positive_beta(config);
  return linalg::minsr(stats.obar, stats.epsbar, config.beta);
}

Eigen::VectorXd solve_eps_tilde(const SrStatistics &stats, const OptimizerConfig &config,
                                SolverVariant variant) {
  require_positive_beta(config);
  const Eigen::VectorXd eps_tilde = linalg::scale_imag_block(stats.epsbar, config.m);
  return variant == SolverVariant::kSr ? linalg::sr(stats.obar, eps_tilde, config.beta)
                                       : linalg::minsr(stats.obar, eps_tilde, config.beta);
}

Eigen::VectorXd solve_o_tilde(const SrStatistics &stats, const OptimizerConfig &config,
                              SolverVariant variant) {
  require_positive_beta(config);
  const Eigen::MatrixXd o_tilde = linalg::scale_real_block(stats.obar, config.m);
  if (variant == SolverVariant::kSr) {
    // Ob^T eps = Ot^T [eps_re / m; eps_im], so the least-squares form applies.
    const Eigen::VectorXd b = linalg::scale_imag_block(stats.epsbar, config.m) / config.m;
    return linalg::sr(o_tilde, b, config.beta);
  }
  return linalg::o_tilde_minsr(o_tilde, energy_gradient_rhs(stats), config.beta,
                               config.effective_beta1());
}

Eigen::VectorXd solve_update(const SrStatistics &stats, const OptimizerConfig &config) {
  switch (config.rule) {
    case UpdateRule::kSr: return solve_sr(stats, config);
    case UpdateRule::kMinSr: return solve_minsr(stats, config);
    case UpdateRule::kEpsTildeSr: return solve_eps_tilde(stats, config, SolverVariant::kSr);
    case UpdateRule::kEpsTildeMinSr: return solve_eps_tilde(stats, config, SolverVariant::kMinSr);
    case UpdateRule::kOTildeSr: return solve_o_tilde(stats, config, SolverVariant::kSr);
    case UpdateRule::kOTildeMinSr: return solve_o_tilde(stats, config, SolverVariant::kMinSr);
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown update rule");
}

void nag_step(OptimizerState &state, Eigen::VectorXd &theta, const Eigen::VectorXd &direction,
              const OptimizerConfig &config) {
  state.velocity = config.momentum_mu * state.velocity - state.tau * direction;
  theta += state.velocity;
  ++state.step;
}

double adaptive_lr(const OptimizerState &state, double grad_dot_dir_old, double grad_dot_dir_new,
                   const OptimizerConfig &config) {
  const double fallback = std::min(config.lr_growth * state.tau, config.lr_cap);
  if (grad_dot_dir_old == grad_dot_dir_new) return fallback;
  const double candidate = state.tau * grad_dot_dir_old / (grad_dot_dir_old - grad_dot_dir_new);
  if (candidate > 0.0 && candidate < state.tau) return candidate;
  return fallback;
}

}  // namespace signvmc
