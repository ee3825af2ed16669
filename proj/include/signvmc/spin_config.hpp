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

#ifndef SIGNVMC_SPIN_CONFIG_HPP
#define SIGNVMC_SPIN_CONFIG_HPP

#include <bit>
#include <cassert>
#include <compare>
#include <cstdint>
#include <string>

namespace signvmc {

// Sz-basis configuration of up to 64 spin-1/2 sites. Bit s set means site s
// is up (sigma_s = +1); cleared means down (sigma_s = -1).
class SpinConfiguration {
 public:
  static constexpr int kMaxSites = 64;

  SpinConfiguration() = default;
  SpinConfiguration(std::uint64_t bits, int n_sites)
      : bits_(bits & Mask(n_sites)), n_sites_(n_sites) {
    assert(n_sites >= 0 && n_sites <= kMaxSites);
  }

  static SpinConfiguration AllUp(int n_sites) {
    return SpinConfiguration(Mask(n_sites), n_sites);
  }
  static SpinConfiguration AllDown(int n_sites) {
    return SpinConfiguration(0, n_sites);
  }

  std::uint64_t bits() const { return bits_; }
  int n_sites() const { return n_sites_; }

  bool up(int site) const { return (bits_ >> site) & 1u; }
  // +1 for up, -1 for down.
  int spin(int site) const { return up(site) ? 1 : -1; }

  int n_up() const { return std::popcount(bits_); }
  // Sum of sigma_i (in units where sigma = +-1).
  int magnetization() const { return 2 * n_up() - n_sites_; }

  void flip(int site) { bits_ ^= (std::uint64_t{1} << site); }
  void set(int site, bool up_spin) {
    if (up_spin) {
      bits_ |= (std::uint64_t{1} << site);
    } else {
      bits_ &= ~(std::uint64_t{1} << site);
    }
  }

  // Swaps the spins on two sites (a no-op when they are parallel).
  SpinConfiguration exchanged(int a, int b) const {
    SpinConfiguration out = *this;
    if (up(a) != up(b)) {
      out.flip(a);
      out.flip(b);
    }
    return out;
  }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(n_sites_), '0');
    for (int i = 0; i < n_sites_; ++i) s[static_cast<std::size_t>(i)] = up(i) ? '1' : '0';
    return s;
  }

  friend bool operator==(const SpinConfiguration &, const SpinConfiguration &) = default;
  friend auto operator<=>(const SpinConfiguration &a, const SpinConfiguration &b) {
    return a.bits_ <=> b.bits_;
  }

  static constexpr std::uint64_t Mask(int n_sites) {
    return n_sites >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_sites) - 1);
  }

 private:
  std::uint64_t bits_ = 0;
  int n_sites_ = 0;
};

}  // namespace signvmc

#endif  // SIGNVMC_SPIN_CONFIG_HPP
