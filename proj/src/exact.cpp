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

#include "signvmc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "signvmc/error.hpp"
#include "signvmc/parallel.hpp"
#include "signvmc/sampler.hpp"

namespace signvmc {
namespace {

constexpr double kAcceptResidual = 1e-9;
constexpr double kPolishResidual = 1e-13;

void fix_gauge(Eigen::VectorXd &v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0.0) v = -v;
}

}  // namespace

std::int64_t basis_index(const std::vector<SpinConfiguration> &basis,
                         const SpinConfiguration &config) {
  auto it = std::lower_bound(basis.begin(), basis.end(), config,
                             [](const SpinConfiguration &a, const SpinConfiguration &b) {
                               return a.bits() < b.bits();
                             });
  if (it == basis.end() || it->bits() != config.bits()) return -1;
  return static_cast<std::int64_t>(it - basis.begin());
}

SparseMatrixRM sector_hamiltonian(const HamiltonianSpec &spec,
                                  const std::vector<SpinConfiguration> &basis) {
  const int n = static_cast<int>(basis.size());
  std::vector<std::vector<std::pair<std::int64_t, double>>> rows(basis.size());
  parallel_for(n, [&](int i) {
    auto &row = rows[static_cast<std::size_t>(i)];
    const SpinConfiguration &c = basis[static_cast<std::size_t>(i)];
    row.emplace_back(i, diagonal_energy(spec, c));
    for_each_connection(spec, c, [&](const Connection &conn) {
      const std::int64_t j = basis_index(basis, conn.target);
      if (j < 0) throw Error(ErrorKind::kInvalidArgument, "basis is not closed under H");
      row.emplace_back(j, conn.element);
    });
    std::sort(row.begin(), row.end());
    // Merge duplicate columns.
    std::size_t out = 0;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (out > 0 && row[out - 1].first == row[k].first) {
        row[out - 1].second += row[k].second;
      } else {
        row[out++] = row[k];
      }
    }
    row.resize(out);
  });
  std::size_t nnz = 0;
  for (const auto &r : rows) nnz += r.size();
  SparseMatrixRM h(n, n);
  h.reserve(static_cast<std::int64_t>(nnz));
  for (int i = 0; i < n; ++i) {
    h.startVec(i);
    for (const auto &[j, v] : rows[static_cast<std::size_t>(i)]) h.insertBack(i, j) = v;
  }
  h.finalize();
  return h;
}

Eigen::MatrixXd dense_sector_hamiltonian(const HamiltonianSpec &spec,
                                         const std::vector<SpinConfiguration> &basis) {
  return Eigen::MatrixXd(sector_hamiltonian(spec, basis));
}

void sparse_matvec(const SparseMatrixRM &h, const Eigen::VectorXd &x, Eigen::VectorXd &y) {
  y.resize(h.rows());
  const int workers = std::max(1, thread_count());
  const std::int64_t n = h.rows();
  parallel_for(workers, [&](int w) {
    const std::int64_t begin = n * w / workers;
    const std::int64_t end = n * (w + 1) / workers;
    for (std::int64_t i = begin; i < end; ++i) {
      double acc = 0.0;
      for (SparseMatrixRM::InnerIterator it(h, i); it; ++it) acc += it.value() * x(it.col());
      y(i) = acc;
    }
  });
}

SectorSpectrum lanczos_ground_state(const SparseMatrixRM &h, const EdOptions &options) {
  const Eigen::Index n = h.rows();
  SectorSpectrum out;
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start(i) = normal(rng);
  start.normalize();

  const int m_max = static_cast<int>(std::min<Eigen::Index>(options.krylov_size, n));
  int total_iters = 0;
  Eigen::VectorXd w(n);
  double best_residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < options.max_restarts; ++restart) {
    Eigen::MatrixXd v(n, m_max);
    v.col(0) = start;
    std::vector<double> alpha, beta;
    double previous = std::numeric_limits<double>::infinity();
    int stable = 0;
    Eigen::VectorXd ritz;
    double theta = 0.0;
    int used = 0;
    for (int j = 0; j < m_max; ++j) {
      ++total_iters;
      sparse_matvec(h, v.col(j), w);
      const double a = v.col(j).dot(w);
      alpha.push_back(a);
      // Full reorthogonalization, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd proj = v.leftCols(j + 1).transpose() * w;
        w.noalias() -= v.leftCols(j + 1) * proj;
      }
      const double b = w.norm();
      used = j + 1;

      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), used);
      Eigen::VectorXd sub(std::max(0, used - 1));
      for (int k = 0; k + 1 < used; ++k) sub(k) = beta[static_cast<std::size_t>(k)];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      theta = tri.eigenvalues()(0);
      ritz = tri.eigenvectors().col(0);
      const double residual_estimate = std::abs(b * ritz(used - 1));

      const double scale = std::max(1.0, std::abs(theta));
      stable = std::abs(theta - previous) < 1e-12 * scale ? stable + 1 : 0;
      previous = theta;
      if ((stable >= 3 && residual_estimate < kPolishResidual * scale) || b < 1e-13 ||
          j + 1 == m_max) {
        break;
      }
      beta.push_back(b);
      v.col(j + 1) = w / b;
    }
    Eigen::VectorXd x = v.leftCols(used) * ritz;
    x.normalize();
    sparse_matvec(h, x, w);
    const double rayleigh = x.dot(w);
    const double residual = (w - rayleigh * x).norm();
    // Restart until the residual reaches the rounding floor or stops improving.
    const bool polished = residual < kPolishResidual * std::max(1.0, std::abs(rayleigh));
    const bool stalled = residual > 0.5 * best_residual;
    if (residual < best_residual) {
      best_residual = residual;
      out.ground_energy = rayleigh;
      out.ground_vector = x;
    }
    if (best_residual < kAcceptResidual && (polished || stalled)) {
      fix_gauge(out.ground_vector);
      out.n_lanczos_iters = total_iters;
      out.residual = best_residual;
      return out;
    }
    start = x;
  }
  throw Error(ErrorKind::kNoConvergence,
              "Lanczos did not reach residual 1e-9 after " + std::to_string(total_iters) +
                  " iterations");
}

SectorSpectrum ed_ground_state(const HamiltonianSpec &spec, const EdOptions &options) {
  std::vector<SpinConfiguration> basis = enumerate_sector_capped(spec.geometry, options.max_dimension);
  const SparseMatrixRM h = sector_hamiltonian(spec, basis);
  SectorSpectrum out;
  if (static_cast<int>(basis.size()) < options.dense_threshold) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(h)};
    out.ground_energy = es.eigenvalues()(0);
    out.ground_vector = es.eigenvectors().col(0);
    out.ground_vector.normalize();
    fix_gauge(out.ground_vector);
    Eigen::VectorXd w;
    sparse_matvec(h, out.ground_vector, w);
    out.residual = (w - out.ground_energy * out.ground_vector).norm();
  } else {
    out = lanczos_ground_state(h, options);
  }
  out.basis = std::move(basis);
  return out;
}

double sign_overlap_D(const std::vector<SpinConfiguration> &basis, const Eigen::VectorXd &vector,
                      const LatticeGeometry &geometry, Sublattice sublattice) {
  const double norm2 = vector.squaredNorm();
  double acc = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double c = vector(static_cast<Eigen::Index>(i));
    if (std::abs(c) < 1e-14) continue;
    const double sign = c > 0.0 ? 1.0 : -1.0;
    acc += c * c * sign * marshall_sign(geometry, basis[i], sublattice);
  }
  return std::abs(acc) / norm2;
}

double sign_overlap_D(const SectorSpectrum &spectrum, const LatticeGeometry &geometry,
                      Sublattice sublattice) {
  return sign_overlap_D(spectrum.basis, spectrum.ground_vector, geometry, sublattice);
}

double wrap_phase(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::fmod(angle, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> values,
                                    std::span<const double> weights) {
  std::vector<std::pair<double, double>> items;
  items.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    items.emplace_back(values[i], weights.empty() ? 1.0 : weights[i]);
  }
  std::sort(items.begin(), items.end());
  double total = 0.0;
  for (const auto &it : items) total += it.second;
  std::vector<CdfPoint> out;
  double acc = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    acc += items[i].second;
    if (i + 1 < items.size() && items[i + 1].first == items[i].first) continue;
    out.push_back({items[i].first, acc / total});
  }
  return out;
}

std::vector<CdfPoint> phase_cdf(const NeuralQuantumState &model, std::span<const double> theta,
                                const SymmetryGroup &group,
                                const std::vector<SpinConfiguration> &configs,
                                std::span<const double> weights, Sublattice sublattice) {
  std::vector<LogPsiValue> values(configs.size());
  parallel_for(static_cast<int>(configs.size()), [&](int i) {
    values[static_cast<std::size_t>(i)] =
        model.log_psi(theta, configs[static_cast<std::size_t>(i)], group);
  });
  std::vector<double> deltas;
  std::vector<double> w;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (values[i].is_zero) continue;
    const double msr =
        marshall_sign(model.geometry(), configs[i], sublattice) > 0 ? 0.0 : std::numbers::pi;
    deltas.push_back(wrap_phase(values[i].phase - msr));
    w.push_back(weights.empty() ? 1.0 : weights[i]);
  }
  return empirical_cdf(deltas, w);
}

double vmc_sign_overlap(
    const SectorSpectrum &spectrum,
    const std::function<std::optional<double>(const SpinConfiguration &)> &phase) {
  std::complex<double> acc(0.0, 0.0);
  const double norm2 = spectrum.ground_vector.squaredNorm();
  for (std::size_t i = 0; i < spectrum.basis.size(); ++i) {
    const double c = spectrum.ground_vector(static_cast<Eigen::Index>(i));
    if (c == 0.0) continue;
    const std::optional<double> phi = phase(spectrum.basis[i]);
    if (!phi) continue;
    const double exact_phase = c > 0.0 ? 0.0 : std::numbers::pi;
    acc += c * c * std::polar(1.0, *phi - exact_phase);
  }
  return std::abs(acc) / norm2;
}

double vmc_sign_overlap(const NeuralQuantumState &model, std::span<const double> theta,
                        const SymmetryGroup &group, const SectorSpectrum &spectrum) {
  std::vector<LogPsiValue> values(spectrum.basis.size());
  parallel_for(static_cast<int>(values.size()), [&](int i) {
    values[static_cast<std::size_t>(i)] =
        model.log_psi(theta, spectrum.basis[static_cast<std::size_t>(i)], group);
  });
  return vmc_sign_overlap(spectrum, [&](const SpinConfiguration &c) -> std::optional<double> {
    const LogPsiValue &v = values[static_cast<std::size_t>(basis_index(spectrum.basis, c))];
    if (v.is_zero) return std::nullopt;
    return v.phase;
  });
}

}  // namespace signvmc
