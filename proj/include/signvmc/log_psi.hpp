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

#ifndef SIGNVMC_LOG_PSI_HPP
#define SIGNVMC_LOG_PSI_HPP

#include <cmath>
#include <complex>
#include <limits>

namespace signvmc {

// ln psi = log_amplitude + i * phase. `is_zero` marks an amplitude that
// cancelled to round-off (log_amplitude is then -inf).
struct LogPsiValue {
  double log_amplitude = 0.0;
  double phase = 0.0;
  bool is_zero = false;

  std::complex<double> log() const { return {log_amplitude, phase}; }
  std::complex<double> value() const {
    if (is_zero) return {0.0, 0.0};
    return std::polar(std::exp(log_amplitude), phase);
  }

  static LogPsiValue Zero() {
    return {-std::numeric_limits<double>::infinity(), 0.0, true};
  }
  static LogPsiValue FromLog(std::complex<double> log) {
    return {log.real(), log.imag(), false};
  }
};

}  // namespace signvmc

#endif  // SIGNVMC_LOG_PSI_HPP
