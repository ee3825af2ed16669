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

#ifndef SIGNVMC_NQS_HPP
#define SIGNVMC_NQS_HPP

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "signvmc/hamiltonian.hpp"
#include "signvmc/lattice.hpp"
#include "signvmc/log_psi.hpp"
#include "signvmc/spin_config.hpp"
#include "signvmc/symmetry.hpp"

namespace signvmc {

struct NetworkShape {
  int channels = 64;  // convolution kernels in the amplitude net
  int hidden = 8;     // width of both hidden layers of the phase net
};

// Offsets of every tensor inside the flat parameter vector.
//
// Amplitude block: kernels stored as w[k * channels + c] where
// k = row_offset * lx + col_offset indexes the (full-lattice) kernel, then the
// channel biases b[c]. Phase block: W1[h * n_sites + i], b1[h],
// W2[h2 * hidden + h1], b2[h2], W3[h], b3.
struct ParameterLayout {
  int lx = 0, ly = 0, n_sites = 0, channels = 0, hidden = 0;
  int kernel_offset = 0;
  int amp_bias_offset = 0;
  int amplitude_offset = 0;
  int amplitude_length = 0;
  int w1_offset = 0, b1_offset = 0, w2_offset = 0, b2_offset = 0, w3_offset = 0,
      b3_offset = 0;
  int phase_offset = 0;
  int phase_length = 0;
  int total = 0;

  static ParameterLayout For(int lx, int ly, NetworkShape shape);
};

// Flat real parameter vector with its partition into amplitude and phase
// blocks.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(const ParameterLayout &layout);
  ParameterVector(const ParameterLayout &layout, Eigen::VectorXd values);

  const ParameterLayout &layout() const { return layout_; }
  Eigen::VectorXd &values() { return values_; }
  const Eigen::VectorXd &values() const { return values_; }
  std::span<const double> span() const { return {values_.data(), static_cast<std::size_t>(values_.size())}; }
  std::span<double> amplitude() {
    return {values_.data() + layout_.amplitude_offset,
            static_cast<std::size_t>(layout_.amplitude_length)};
  }
  std::span<double> phase() {
    return {values_.data() + layout_.phase_offset, static_cast<std::size_t>(layout_.phase_length)};
  }
  int size() const { return static_cast<int>(values_.size()); }

 private:
  ParameterLayout layout_;
  Eigen::VectorXd values_;
};

class NeuralQuantumState {
 public:
  explicit NeuralQuantumState(const LatticeGeometry &geometry, NetworkShape shape = {});

  const ParameterLayout &layout() const { return layout_; }
  const LatticeGeometry &geometry() const { return geometry_; }
  int n_parameters() const { return layout_.total; }

  ParameterVector zero_parameters() const { return ParameterVector(layout_); }
  // Kernels and amplitude biases uniform in [-scale, scale], phase weights
  // uniform in [-phase_scale, phase_scale] (phase_scale <= 0 reuses scale);
  // phase biases zero.
  ParameterVector random_parameters(std::uint64_t seed, double scale = 0.05,
                                    double phase_scale = 0.0) const;

  // A(sigma) = sum_p max_c |sum_k w^c_k sigma_{p+k} + b^c|, periodic indices.
  double amplitude_forward(std::span<const double> theta, const SpinConfiguration &config) const;
  // Three-layer ReLU MLP on the +-1 spin vector, linear output.
  double phase_forward(std::span<const double> theta, const SpinConfiguration &config) const;

  // ln of (1/|G|) sum_g chi(g) exp(A(g sigma) + i phi(g sigma)).
  LogPsiValue log_psi(std::span<const double> theta, const SpinConfiguration &config,
                      const SymmetryGroup &group) const;

  // d ln psi / d theta_k for the symmetrized wave function. Throws
  // ZeroAmplitude when psi cancels at `config`.
  Eigen::VectorXcd log_derivatives(std::span<const double> theta,
                                   const SpinConfiguration &config,
                                   const SymmetryGroup &group) const;

  // Kernel index of the offset q - p.
  int kernel_index(int p, int q) const {
    return kernel_index_[static_cast<std::size_t>(p * layout_.n_sites + q)];
  }

 private:
  LatticeGeometry geometry_;
  NetworkShape shape_;
  ParameterLayout layout_;
  std::vector<int> kernel_index_;
};

// Forward-pass cache for one configuration and all of its group images.
// Re-evaluating after a two-site exchange costs O(n_sites * channels) per
// image instead of a full convolution. `theta` and `group` must outlive the
// cache.
class CachedWavefunction {
 public:
  CachedWavefunction(const NeuralQuantumState &model, std::span<const double> theta,
                     const SymmetryGroup &group);

  void reset(const SpinConfiguration &config);

  const SpinConfiguration &config() const { return config_; }
  const LogPsiValue &log_psi() const { return current_; }

  // ln psi of config() with sites a and b exchanged; the candidate is kept
  // until the next call so that commit() can adopt it.
  LogPsiValue log_psi_exchanged(int a, int b);
  void commit();
  // Same value without keeping a candidate.
  LogPsiValue peek_exchanged(int a, int b) const;

  Eigen::VectorXcd log_derivatives() const;

  std::complex<double> local_energy(const HamiltonianSpec &spec) const;

 private:
  struct Image {
    std::uint64_t bits = 0;
    std::vector<double> z;     // n_sites x channels pre-activations
    std::vector<double> pre1;  // first phase layer pre-activations
    double amp = 0.0;
    double phase = 0.0;
  };

  void forward_image(Image &image) const;
  double amplitude_from_z(const std::vector<double> &z) const;
  double phase_from_pre1(const double *pre1) const;
  LogPsiValue combine(const std::vector<Image> &images) const;
  LogPsiValue combine(const double *amps, const double *phases, std::size_t count) const;
  // Image g after moving an up spin from fall0 to rise0; stores into dst when
  // given.
  void exchange_image(std::size_t g, int rise0, int fall0, Image *dst, double &amp,
                      double &phase) const;
  void add_amplitude_gradient(const Image &image, std::complex<double> weight,
                              Eigen::VectorXcd &out, std::vector<double> &scratch) const;
  void add_phase_gradient(const Image &image, std::complex<double> weight,
                          Eigen::VectorXcd &out, std::vector<double> &scratch) const;

  const NeuralQuantumState *model_;
  const double *theta_;
  const SymmetryGroup *group_;
  std::vector<double> kernel_sums_;  // sum_k w^c_k per channel
  SpinConfiguration config_;
  std::vector<Image> images_;
  std::vector<Image> candidate_;
  SpinConfiguration candidate_config_;
  LogPsiValue current_;
  LogPsiValue candidate_value_;
  bool has_candidate_ = false;
  mutable std::vector<double> amp_scratch_;
  mutable std::vector<double> phase_scratch_;
};

}  // namespace signvmc

#endif  // SIGNVMC_NQS_HPP
