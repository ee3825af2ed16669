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

#include "signvmc/nqs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "signvmc/error.hpp"

namespace signvmc {
namespace {

constexpr double kLogZeroFloor = -700.0;
// Group sums cancelled below this fraction of sum |terms| are round-off.
constexpr double kCancellationTolerance = 1e-11;
constexpr int kMaxHidden = 64;

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

ParameterLayout ParameterLayout::For(int lx, int ly, NetworkShape shape) {
  ParameterLayout l;
  l.lx = lx;
  l.ly = ly;
  l.n_sites = lx * ly;
  l.channels = shape.channels;
  l.hidden = shape.hidden;
  const int n = l.n_sites;
  const int c = shape.channels;
  const int h = shape.hidden;
  l.amplitude_offset = 0;
  l.kernel_offset = 0;
  l.amp_bias_offset = n * c;
  l.amplitude_length = n * c + c;
  l.phase_offset = l.amplitude_length;
  l.w1_offset = l.phase_offset;
  l.b1_offset = l.w1_offset + h * n;
  l.w2_offset = l.b1_offset + h;
  l.b2_offset = l.w2_offset + h * h;
  l.w3_offset = l.b2_offset + h;
  l.b3_offset = l.w3_offset + h;
  l.phase_length = (h * n + h) + (h * h + h) + (h + 1);
  l.total = l.amplitude_length + l.phase_length;
  if (lx == 6 && ly == 6 && c == 64 && h == 8 && l.total != 2745) {
    throw Error(ErrorKind::kInvalidArgument, "6x6 network must have 2745 parameters");
  }
  return l;
}

ParameterVector::ParameterVector(const ParameterLayout &layout)
    : layout_(layout), values_(Eigen::VectorXd::Zero(layout.total)) {}

ParameterVector::ParameterVector(const ParameterLayout &layout, Eigen::VectorXd values)
    : layout_(layout), values_(std::move(values)) {
  if (values_.size() != layout_.total) {
    throw Error(ErrorKind::kInvalidArgument,
                "parameter vector has " + std::to_string(values_.size()) +
                    " entries, layout expects " + std::to_string(layout_.total));
  }
}

NeuralQuantumState::NeuralQuantumState(const LatticeGeometry &geometry, NetworkShape shape)
    : geometry_(geometry),
      shape_(shape),
      layout_(ParameterLayout::For(geometry.lx, geometry.ly, shape)) {
  const int n = geometry.n_sites;
  kernel_index_.resize(static_cast<std::size_t>(n * n));
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const int di = ((geometry.row(q) - geometry.row(p)) % geometry.ly + geometry.ly) % geometry.ly;
      const int dj = ((geometry.col(q) - geometry.col(p)) % geometry.lx + geometry.lx) % geometry.lx;
      kernel_index_[static_cast<std::size_t>(p * n + q)] = di * geometry.lx + dj;
    }
  }
}

ParameterVector NeuralQuantumState::random_parameters(std::uint64_t seed, double scale,
                                                      double phase_scale) const {
  ParameterVector theta(layout_);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  const double ps = phase_scale > 0.0 ? phase_scale : scale;
  std::uniform_real_distribution<double> phase_dist(-ps, ps);
  Eigen::VectorXd &v = theta.values();
  for (int i = 0; i < layout_.amplitude_length; ++i) v[layout_.amplitude_offset + i] = dist(rng);
  const int h = layout_.hidden;
  const int n = layout_.n_sites;
  for (int i = 0; i < h * n; ++i) v[layout_.w1_offset + i] = phase_dist(rng);
  for (int i = 0; i < h * h; ++i) v[layout_.w2_offset + i] = phase_dist(rng);
  for (int i = 0; i < h; ++i) v[layout_.w3_offset + i] = phase_dist(rng);
  return theta;
}

double NeuralQuantumState::amplitude_forward(std::span<const double> theta,
                                             const SpinConfiguration &config) const {
  const int n = layout_.n_sites;
  const int channels = layout_.channels;
  const double *w = theta.data() + layout_.kernel_offset;
  const double *b = theta.data() + layout_.amp_bias_offset;
  double total = 0.0;
  for (int p = 0; p < n; ++p) {
    double best = 0.0;
    for (int c = 0; c < channels; ++c) {
      double z = b[c];
      for (int q = 0; q < n; ++q) {
        z += w[kernel_index(p, q) * channels + c] * config.spin(q);
      }
      best = std::max(best, std::abs(z));
    }
    total += best;
  }
  return total;
}

double NeuralQuantumState::phase_forward(std::span<const double> theta,
                                         const SpinConfiguration &config) const {
  const int n = layout_.n_sites;
  const int h = layout_.hidden;
  const double *w1 = theta.data() + layout_.w1_offset;
  const double *b1 = theta.data() + layout_.b1_offset;
  const double *w2 = theta.data() + layout_.w2_offset;
  const double *b2 = theta.data() + layout_.b2_offset;
  const double *w3 = theta.data() + layout_.w3_offset;
  std::vector<double> h1(static_cast<std::size_t>(h));
  for (int j = 0; j < h; ++j) {
    double a = b1[j];
    for (int i = 0; i < n; ++i) a += w1[j * n + i] * config.spin(i);
    h1[static_cast<std::size_t>(j)] = relu(a);
  }
  double out = theta[static_cast<std::size_t>(layout_.b3_offset)];
  for (int j = 0; j < h; ++j) {
    double a = b2[j];
    for (int i = 0; i < h; ++i) a += w2[j * h + i] * h1[static_cast<std::size_t>(i)];
    out += w3[j] * relu(a);
  }
  return out;
}

LogPsiValue NeuralQuantumState::log_psi(std::span<const double> theta,
                                        const SpinConfiguration &config,
                                        const SymmetryGroup &group) const {
  CachedWavefunction cache(*this, theta, group);
  cache.reset(config);
  return cache.log_psi();
}

Eigen::VectorXcd NeuralQuantumState::log_derivatives(std::span<const double> theta,
                                                     const SpinConfiguration &config,
                                                     const SymmetryGroup &group) const {
  CachedWavefunction cache(*this, theta, group);
  cache.reset(config);
  return cache.log_derivatives();
}

// ---------------------------------------------------------------------------

CachedWavefunction::CachedWavefunction(const NeuralQuantumState &model,
                                       std::span<const double> theta,
                                       const SymmetryGroup &group)
    : model_(&model), theta_(theta.data()), group_(&group) {
  const ParameterLayout &l = model.layout();
  if (static_cast<int>(theta.size()) != l.total) {
    throw Error(ErrorKind::kInvalidArgument, "parameter vector length does not match the network");
  }
  if (group.n_sites != l.n_sites) {
    throw Error(ErrorKind::kInvalidArgument, "symmetry group built for a different lattice");
  }
  kernel_sums_.assign(static_cast<std::size_t>(l.channels), 0.0);
  const double *w = theta_ + l.kernel_offset;
  for (int k = 0; k < l.n_sites; ++k) {
    for (int c = 0; c < l.channels; ++c) kernel_sums_[static_cast<std::size_t>(c)] += w[k * l.channels + c];
  }
  images_.resize(group.size());
  candidate_.resize(group.size());
  for (auto *set : {&images_, &candidate_}) {
    for (Image &im : *set) {
      im.z.resize(static_cast<std::size_t>(l.n_sites * l.channels));
      im.pre1.resize(static_cast<std::size_t>(l.hidden));
    }
  }
}

double CachedWavefunction::amplitude_from_z(const std::vector<double> &z) const {
  const int n = model_->layout().n_sites;
  const int channels = model_->layout().channels;
  double total = 0.0;
  for (int p = 0; p < n; ++p) {
    const double *zp = z.data() + p * channels;
    double best = 0.0;
    for (int c = 0; c < channels; ++c) best = std::max(best, std::abs(zp[c]));
    total += best;
  }
  return total;
}

double CachedWavefunction::phase_from_pre1(const double *pre1) const {
  const ParameterLayout &l = model_->layout();
  const int h = l.hidden;
  const double *w2 = theta_ + l.w2_offset;
  const double *b2 = theta_ + l.b2_offset;
  const double *w3 = theta_ + l.w3_offset;
  double out = theta_[l.b3_offset];
  for (int j = 0; j < h; ++j) {
    double a = b2[j];
    for (int i = 0; i < h; ++i) a += w2[j * h + i] * relu(pre1[i]);
    out += w3[j] * relu(a);
  }
  return out;
}

void CachedWavefunction::forward_image(Image &image) const {
  const ParameterLayout &l = model_->layout();
  const int n = l.n_sites;
  const int channels = l.channels;
  const double *w = theta_ + l.kernel_offset;
  const double *b = theta_ + l.amp_bias_offset;
  // sum_q w_{q-p} sigma_q = 2 sum_{q up} w_{q-p} - sum_k w_k.
  for (int p = 0; p < n; ++p) {
    double *zp = image.z.data() + p * channels;
    for (int c = 0; c < channels; ++c) zp[c] = b[c] - kernel_sums_[static_cast<std::size_t>(c)];
    std::uint64_t bits = image.bits;
    while (bits != 0) {
      const int q = std::countr_zero(bits);
      bits &= bits - 1;
      const double *wk = w + model_->kernel_index(p, q) * channels;
      for (int c = 0; c < channels; ++c) zp[c] += 2.0 * wk[c];
    }
  }
  image.amp = amplitude_from_z(image.z);

  const double *w1 = theta_ + l.w1_offset;
  const double *b1 = theta_ + l.b1_offset;
  for (int j = 0; j < l.hidden; ++j) {
    double a = b1[j];
    for (int i = 0; i < n; ++i) a += ((image.bits >> i) & 1u) ? w1[j * n + i] : -w1[j * n + i];
    image.pre1[static_cast<std::size_t>(j)] = a;
  }
  image.phase = phase_from_pre1(image.pre1.data());
}

LogPsiValue CachedWavefunction::combine(const double *amps, const double *phases,
                                        std::size_t count) const {
  if (count == 1 && group_->characters[0] == std::complex<double>(1.0, 0.0)) {
    return {amps[0], phases[0], false};
  }
  double amax = amps[0];
  for (std::size_t g = 1; g < count; ++g) amax = std::max(amax, amps[g]);
  std::complex<double> sum(0.0, 0.0);
  double scale = 0.0;
  for (std::size_t g = 0; g < count; ++g) {
    const std::complex<double> term =
        group_->characters[g] * std::polar(std::exp(amps[g] - amax), phases[g]);
    sum += term;
    scale += std::abs(term);
  }
  const double size = static_cast<double>(count);
  const double magnitude = std::abs(sum);
  if (magnitude <= kCancellationTolerance * scale || std::log(magnitude / size) < kLogZeroFloor) {
    return LogPsiValue::Zero();
  }
  return {amax + std::log(magnitude) - std::log(size), std::arg(sum), false};
}

LogPsiValue CachedWavefunction::combine(const std::vector<Image> &images) const {
  amp_scratch_.resize(images.size());
  phase_scratch_.resize(images.size());
  for (std::size_t g = 0; g < images.size(); ++g) {
    amp_scratch_[g] = images[g].amp;
    phase_scratch_[g] = images[g].phase;
  }
  return combine(amp_scratch_.data(), phase_scratch_.data(), images.size());
}

void CachedWavefunction::reset(const SpinConfiguration &config) {
  config_ = config;
  for (std::size_t g = 0; g < images_.size(); ++g) {
    images_[g].bits = apply(group_->ops[g], config).bits();
    forward_image(images_[g]);
  }
  current_ = combine(images_);
  has_candidate_ = false;
}

void CachedWavefunction::exchange_image(std::size_t g, int rise0, int fall0, Image *dst,
                                        double &amp, double &phase) const {
  const ParameterLayout &l = model_->layout();
  const int n = l.n_sites;
  const int channels = l.channels;
  const double *w = theta_ + l.kernel_offset;
  const double *w1 = theta_ + l.w1_offset;
  const std::vector<int> &perm = group_->ops[g].site_permutation;
  const int rise = perm[static_cast<std::size_t>(rise0)];
  const int fall = perm[static_cast<std::size_t>(fall0)];
  const Image &src = images_[g];
  using ConstArray = Eigen::Map<const Eigen::ArrayXd>;
  double total = 0.0;
  for (int p = 0; p < n; ++p) {
    const ConstArray zp(src.z.data() + p * channels, channels);
    const ConstArray wr(w + model_->kernel_index(p, rise) * channels, channels);
    const ConstArray wf(w + model_->kernel_index(p, fall) * channels, channels);
    if (dst != nullptr) {
      Eigen::Map<Eigen::ArrayXd> out(dst->z.data() + p * channels, channels);
      out = zp + 2.0 * (wr - wf);
      total += out.abs().maxCoeff();
    } else {
      total += (zp + 2.0 * (wr - wf)).abs().maxCoeff();
    }
  }
  amp = total;
  double pre1[kMaxHidden] = {};
  const int h = l.hidden;
  std::vector<double> heap;
  double *pre = pre1;
  if (h > kMaxHidden) {
    heap.resize(static_cast<std::size_t>(h));
    pre = heap.data();
  }
  for (int j = 0; j < h; ++j) {
    pre[j] = src.pre1[static_cast<std::size_t>(j)] + 2.0 * (w1[j * n + rise] - w1[j * n + fall]);
  }
  phase = phase_from_pre1(pre);
  if (dst != nullptr) {
    dst->bits = src.bits ^ ((std::uint64_t{1} << rise) | (std::uint64_t{1} << fall));
    std::copy(pre, pre + h, dst->pre1.begin());
    dst->amp = amp;
    dst->phase = phase;
  }
}

LogPsiValue CachedWavefunction::log_psi_exchanged(int a, int b) {
  if (config_.up(a) == config_.up(b)) {
    candidate_config_ = config_;
    for (std::size_t g = 0; g < images_.size(); ++g) candidate_[g] = images_[g];
    candidate_value_ = current_;
    has_candidate_ = true;
    return candidate_value_;
  }
  // Site `rise` goes down -> up, `fall` goes up -> down.
  const int rise0 = config_.up(a) ? b : a;
  const int fall0 = config_.up(a) ? a : b;
  candidate_config_ = config_.exchanged(a, b);
  double amp = 0.0, phase = 0.0;
  for (std::size_t g = 0; g < images_.size(); ++g) {
    exchange_image(g, rise0, fall0, &candidate_[g], amp, phase);
  }
  candidate_value_ = combine(candidate_);
  has_candidate_ = true;
  return candidate_value_;
}

LogPsiValue CachedWavefunction::peek_exchanged(int a, int b) const {
  if (config_.up(a) == config_.up(b)) return current_;
  const int rise0 = config_.up(a) ? b : a;
  const int fall0 = config_.up(a) ? a : b;
  amp_scratch_.resize(images_.size());
  phase_scratch_.resize(images_.size());
  for (std::size_t g = 0; g < images_.size(); ++g) {
    exchange_image(g, rise0, fall0, nullptr, amp_scratch_[g], phase_scratch_[g]);
  }
  return combine(amp_scratch_.data(), phase_scratch_.data(), images_.size());
}

void CachedWavefunction::commit() {
  if (!has_candidate_) return;
  std::swap(images_, candidate_);
  config_ = candidate_config_;
  current_ = candidate_value_;
  has_candidate_ = false;
}

void CachedWavefunction::add_amplitude_gradient(const Image &image, std::complex<double> weight,
                                                Eigen::VectorXcd &out,
                                                std::vector<double> &scratch) const {
  const ParameterLayout &l = model_->layout();
  const int n = l.n_sites;
  const int channels = l.channels;
  std::fill(scratch.begin(), scratch.end(), 0.0);
  for (int p = 0; p < n; ++p) {
    const double *zp = image.z.data() + p * channels;
    int winner = 0;
    double best = std::abs(zp[0]);
    for (int c = 1; c < channels; ++c) {
      const double v = std::abs(zp[c]);
      if (v > best) {
        best = v;
        winner = c;
      }
    }
    const double z = zp[winner];
    const double sign = z > 0.0 ? 1.0 : (z < 0.0 ? -1.0 : 0.0);
    if (sign == 0.0) continue;
    scratch[static_cast<std::size_t>(l.amp_bias_offset + winner)] += sign;
    for (int q = 0; q < n; ++q) {
      const double spin = ((image.bits >> q) & 1u) ? sign : -sign;
      scratch[static_cast<std::size_t>(l.kernel_offset + model_->kernel_index(p, q) * channels + winner)] += spin;
    }
  }
  for (int i = 0; i < l.amplitude_length; ++i) {
    const double v = scratch[static_cast<std::size_t>(i)];
    if (v != 0.0) out[l.amplitude_offset + i] += weight * v;
  }
}

void CachedWavefunction::add_phase_gradient(const Image &image, std::complex<double> weight,
                                            Eigen::VectorXcd &out,
                                            std::vector<double> &scratch) const {
  const ParameterLayout &l = model_->layout();
  const int n = l.n_sites;
  const int h = l.hidden;
  const double *w2 = theta_ + l.w2_offset;
  const double *b2 = theta_ + l.b2_offset;
  const double *w3 = theta_ + l.w3_offset;
  std::vector<double> h1(static_cast<std::size_t>(h)), pre2(static_cast<std::size_t>(h)),
      delta2(static_cast<std::size_t>(h)), delta1(static_cast<std::size_t>(h), 0.0);
  for (int j = 0; j < h; ++j) h1[static_cast<std::size_t>(j)] = relu(image.pre1[static_cast<std::size_t>(j)]);
  for (int j = 0; j < h; ++j) {
    double a = b2[j];
    for (int i = 0; i < h; ++i) a += w2[j * h + i] * h1[static_cast<std::size_t>(i)];
    pre2[static_cast<std::size_t>(j)] = a;
  }
  std::fill(scratch.begin(), scratch.end(), 0.0);
  auto at = [&](int offset) -> double & { return scratch[static_cast<std::size_t>(offset - l.phase_offset)]; };
  at(l.b3_offset) = 1.0;
  for (int j = 0; j < h; ++j) {
    at(l.w3_offset + j) = relu(pre2[static_cast<std::size_t>(j)]);
    delta2[static_cast<std::size_t>(j)] = pre2[static_cast<std::size_t>(j)] > 0.0 ? w3[j] : 0.0;
  }
  for (int j = 0; j < h; ++j) {
    const double d2 = delta2[static_cast<std::size_t>(j)];
    at(l.b2_offset + j) = d2;
    for (int i = 0; i < h; ++i) {
      at(l.w2_offset + j * h + i) = d2 * h1[static_cast<std::size_t>(i)];
      delta1[static_cast<std::size_t>(i)] += w2[j * h + i] * d2;
    }
  }
  for (int i = 0; i < h; ++i) {
    const double d1 = image.pre1[static_cast<std::size_t>(i)] > 0.0 ? delta1[static_cast<std::size_t>(i)] : 0.0;
    at(l.b1_offset + i) = d1;
    if (d1 == 0.0) continue;
    for (int s = 0; s < n; ++s) at(l.w1_offset + i * n + s) = ((image.bits >> s) & 1u) ? d1 : -d1;
  }
  const std::complex<double> iw = std::complex<double>(0.0, 1.0) * weight;
  for (int i = 0; i < l.phase_length; ++i) {
    const double v = scratch[static_cast<std::size_t>(i)];
    if (v != 0.0) out[l.phase_offset + i] += iw * v;
  }
}

Eigen::VectorXcd CachedWavefunction::log_derivatives() const {
  if (current_.is_zero) {
    throw Error(ErrorKind::kZeroAmplitude,
                "symmetrized wave function vanishes at " + config_.to_string());
  }
  const ParameterLayout &l = model_->layout();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(l.total);
  // d ln(sum_g chi_g e^{L_g}) = sum_g r_g dL_g with r_g the complex softmax.
  std::vector<std::complex<double>> r(images_.size());
  if (images_.size() == 1) {
    r[0] = 1.0;
  } else {
    double amax = images_[0].amp;
    for (const Image &im : images_) amax = std::max(amax, im.amp);
    std::complex<double> sum(0.0, 0.0);
    for (std::size_t g = 0; g < images_.size(); ++g) {
      r[g] = group_->characters[g] * std::polar(std::exp(images_[g].amp - amax), images_[g].phase);
      sum += r[g];
    }
    for (auto &x : r) x /= sum;
  }
  std::vector<double> amp_scratch(static_cast<std::size_t>(l.amplitude_length));
  std::vector<double> phase_scratch(static_cast<std::size_t>(l.phase_length));
  for (std::size_t g = 0; g < images_.size(); ++g) {
    add_amplitude_gradient(images_[g], r[g], out, amp_scratch);
    add_phase_gradient(images_[g], r[g], out, phase_scratch);
  }
  return out;
}

std::complex<double> CachedWavefunction::local_energy(const HamiltonianSpec &spec) const {
  return local_energy_from(spec, config_, current_, [&](const Connection &c) {
    return peek_exchanged(c.site_a, c.site_b);
  });
}

}  // namespace signvmc
