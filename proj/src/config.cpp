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

#include "signvmc/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "signvmc/error.hpp"

namespace signvmc {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string &key, const std::string &message) {
  throw Error(ErrorKind::kInvalidConfig, key + ": " + message);
}

void check_keys(const json &section, const std::string &name,
                const std::set<std::string> &allowed) {
  if (!section.is_object()) config_error(name, "expected an object");
  for (const auto &[key, value] : section.items()) {
    if (!allowed.count(key)) config_error(name + "." + key, "unknown key");
  }
}

template <typename T>
void read(const json &section, const std::string &prefix, const char *key, T &out) {
  if (!section.contains(key)) return;
  const json &v = section.at(key);
  const std::string full = prefix + "." + key;
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) config_error(full, "expected a boolean");
    out = v.get<bool>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) config_error(full, "expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) {
        config_error(full, "expected a non-negative integer");
      }
    }
    out = v.get<T>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) config_error(full, "expected a number");
    out = v.get<T>();
  } else {
    if (!v.is_string()) config_error(full, "expected a string");
    out = v.get<std::string>();
  }
}

GroupKind parse_group(const std::string &s) {
  if (s == "c4v") return GroupKind::kC4v;
  if (s == "space_group") return GroupKind::kSpaceGroup;
  if (s == "none") return GroupKind::kNone;
  config_error("symmetry.group", "expected c4v, space_group or none, got '" + s + "'");
}

SymmetryMode parse_symmetry_mode(const std::string &s) {
  if (s == "augment") return SymmetryMode::kAugment;
  if (s == "representative") return SymmetryMode::kRepresentative;
  config_error("symmetry.mode", "expected augment or representative, got '" + s + "'");
}

RunMode parse_run_mode(const std::string &s) {
  if (s == "mc") return RunMode::kMonteCarlo;
  if (s == "exact_sum") return RunMode::kExactSum;
  config_error("run.mode", "expected mc or exact_sum, got '" + s + "'");
}

void apply_document(RunConfig &c, const json &doc) {
  check_keys(doc, "config",
             {"preset", "lattice", "hamiltonian", "symmetry", "network", "sampler", "optimizer",
              "run"});
  if (doc.contains("lattice")) {
    const json &s = doc.at("lattice");
    check_keys(s, "lattice", {"lx", "ly"});
    read(s, "lattice", "lx", c.lx);
    read(s, "lattice", "ly", c.ly);
  }
  if (doc.contains("hamiltonian")) {
    const json &s = doc.at("hamiltonian");
    check_keys(s, "hamiltonian", {"j1", "j2"});
    read(s, "hamiltonian", "j1", c.hamiltonian.j1);
    read(s, "hamiltonian", "j2", c.hamiltonian.j2);
  }
  if (doc.contains("symmetry")) {
    const json &s = doc.at("symmetry");
    check_keys(s, "symmetry", {"group", "irrep", "k", "mode"});
    std::string text;
    if (s.contains("group")) {
      read(s, "symmetry", "group", text);
      c.symmetry.group = parse_group(text);
    }
    read(s, "symmetry", "irrep", c.symmetry.irrep);
    if (s.contains("k")) {
      const json &k = s.at("k");
      if (!k.is_array() || k.size() != 2 || !k[0].is_number_integer() ||
          !k[1].is_number_integer()) {
        config_error("symmetry.k", "expected [qx, qy] integer grid indices");
      }
      c.symmetry.k = {k[0].get<int>(), k[1].get<int>()};
    }
    if (s.contains("mode")) {
      read(s, "symmetry", "mode", text);
      c.symmetry.mode = parse_symmetry_mode(text);
    }
  }
  if (doc.contains("network")) {
    const json &s = doc.at("network");
    check_keys(s, "network", {"channels", "hidden", "init_scale", "phase_init_scale"});
    read(s, "network", "channels", c.network.shape.channels);
    read(s, "network", "hidden", c.network.shape.hidden);
    read(s, "network", "init_scale", c.network.init_scale);
    read(s, "network", "phase_init_scale", c.network.phase_init_scale);
  }
  if (doc.contains("sampler")) {
    const json &s = doc.at("sampler");
    check_keys(s, "sampler",
               {"n_samples", "n_chains", "n_thermalize", "n_thermalize_step", "n_sweeps_between",
                "p_nn"});
    read(s, "sampler", "n_samples", c.sampler.n_samples);
    read(s, "sampler", "n_chains", c.sampler.n_chains);
    read(s, "sampler", "n_thermalize", c.sampler.n_thermalize);
    read(s, "sampler", "n_thermalize_step", c.sampler.n_thermalize_step);
    read(s, "sampler", "n_sweeps_between", c.sampler.n_sweeps_between);
    read(s, "sampler", "p_nn", c.sampler.p_nn);
  }
  if (doc.contains("optimizer")) {
    const json &s = doc.at("optimizer");
    check_keys(s, "optimizer",
               {"rule", "m", "beta", "beta1", "learning_rate", "lr_mode", "momentum_mu", "lr_cap",
                "lr_growth"});
    std::string text;
    if (s.contains("rule")) {
      read(s, "optimizer", "rule", text);
      c.optimizer.rule = ParseUpdateRule(text);
    }
    read(s, "optimizer", "m", c.optimizer.m);
    read(s, "optimizer", "beta", c.optimizer.beta);
    if (s.contains("beta1")) {
      if (s.at("beta1").is_null()) {
        c.optimizer.beta1.reset();
      } else {
        double b1 = 0.0;
        read(s, "optimizer", "beta1", b1);
        c.optimizer.beta1 = b1;
      }
    }
    read(s, "optimizer", "learning_rate", c.optimizer.learning_rate);
    if (s.contains("lr_mode")) {
      read(s, "optimizer", "lr_mode", text);
      c.optimizer.lr_mode = ParseLrMode(text);
    }
    read(s, "optimizer", "momentum_mu", c.optimizer.momentum_mu);
    read(s, "optimizer", "lr_cap", c.optimizer.lr_cap);
    read(s, "optimizer", "lr_growth", c.optimizer.lr_growth);
  }
  if (doc.contains("run")) {
    const json &s = doc.at("run");
    check_keys(s, "run",
               {"max_steps", "checkpoint_every", "output_dir", "seed", "mode",
                "nonergodic_patience", "wall_clock", "ed_reference"});
    read(s, "run", "max_steps", c.run.max_steps);
    read(s, "run", "checkpoint_every", c.run.checkpoint_every);
    read(s, "run", "output_dir", c.run.output_dir);
    read(s, "run", "seed", c.run.seed);
    if (s.contains("mode")) {
      std::string text;
      read(s, "run", "mode", text);
      c.run.mode = parse_run_mode(text);
    }
    read(s, "run", "nonergodic_patience", c.run.nonergodic_patience);
    read(s, "run", "wall_clock", c.run.wall_clock);
    read(s, "run", "ed_reference", c.run.ed_reference);
  }
}

RunConfig table_preset(UpdateRule rule, double j2, double lr, LrMode mode, double m, double beta) {
  RunConfig c;
  c.lx = 6;
  c.ly = 6;
  c.hamiltonian.j1 = 1.0;
  c.hamiltonian.j2 = j2;
  c.sampler.n_samples = 2000;
  c.optimizer.rule = rule;
  c.optimizer.learning_rate = lr;
  c.optimizer.lr_mode = mode;
  c.optimizer.m = m;
  c.optimizer.beta = beta;
  c.optimizer.momentum_mu = 0.5;
  return c;
}

struct PresetEntry {
  const char *name;
  UpdateRule rule;
  double j2;
  double lr;
  LrMode mode;
  double m;
  double beta;
};

const std::vector<PresetEntry> &preset_table() {
  using R = UpdateRule;
  constexpr LrMode F = LrMode::kFixed;
  constexpr LrMode A = LrMode::kAdaptive;
  static const std::vector<PresetEntry> table = {
      // Hyperparameter tables, J2 = 0.
      {"epstilde-sr-j2-0", R::kEpsTildeSr, 0.0, 0.006, F, 11.0, 0.1},
      {"epstilde-minsr-j2-0", R::kEpsTildeMinSr, 0.0, 0.006, F, 11.0, 0.1},
      {"otilde-sr-j2-0", R::kOTildeSr, 0.0, 0.04, A, 4.0, 0.2},
      {"otilde-minsr-j2-0", R::kOTildeMinSr, 0.0, 0.04, A, 4.0, 0.05},
      // J2 = 0.5.
      {"epstilde-sr-j2-0.5", R::kEpsTildeSr, 0.5, 0.009, F, 11.0, 0.1},
      {"epstilde-minsr-j2-0.5", R::kEpsTildeMinSr, 0.5, 0.009, F, 11.0, 0.1},
      {"otilde-sr-j2-0.5", R::kOTildeSr, 0.5, 0.04, A, 4.0, 0.2},
      {"otilde-minsr-j2-0.5", R::kOTildeMinSr, 0.5, 0.04, A, 4.0, 0.09},
      // Same rows with the step-size ratios of the learning-curve figure
      // (m = 4 for eps-tilde, m = 11 for O-tilde).
      {"epstilde-sr-j2-0-text-m", R::kEpsTildeSr, 0.0, 0.006, F, 4.0, 0.1},
      {"epstilde-minsr-j2-0-text-m", R::kEpsTildeMinSr, 0.0, 0.006, F, 4.0, 0.1},
      {"otilde-sr-j2-0-text-m", R::kOTildeSr, 0.0, 0.04, A, 11.0, 0.2},
      {"otilde-minsr-j2-0-text-m", R::kOTildeMinSr, 0.0, 0.04, A, 11.0, 0.05},
      {"epstilde-sr-j2-0.5-text-m", R::kEpsTildeSr, 0.5, 0.009, F, 4.0, 0.1},
      {"epstilde-minsr-j2-0.5-text-m", R::kEpsTildeMinSr, 0.5, 0.009, F, 4.0, 0.1},
      {"otilde-sr-j2-0.5-text-m", R::kOTildeSr, 0.5, 0.04, A, 11.0, 0.2},
      {"otilde-minsr-j2-0.5-text-m", R::kOTildeMinSr, 0.5, 0.04, A, 11.0, 0.09},
      // Plain SR baseline (m = 1) on the O-tilde SR settings.
      {"sr-j2-0", R::kSr, 0.0, 0.04, A, 1.0, 0.2},
      {"sr-j2-0.5", R::kSr, 0.5, 0.04, A, 1.0, 0.2},
  };
  return table;
}

std::string fnv1a_hex(const std::string &text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string GroupKindName(GroupKind kind) {
  switch (kind) {
    case GroupKind::kC4v: return "c4v";
    case GroupKind::kSpaceGroup: return "space_group";
    case GroupKind::kNone: return "none";
  }
  return "none";
}

std::string RunModeName(RunMode mode) {
  return mode == RunMode::kMonteCarlo ? "mc" : "exact_sum";
}

std::string SymmetryModeName(SymmetryMode mode) {
  return mode == SymmetryMode::kAugment ? "augment" : "representative";
}

LatticeGeometry RunConfig::geometry() const { return build_square_lattice(lx, ly); }

HamiltonianSpec RunConfig::hamiltonian_spec() const {
  HamiltonianSpec spec = hamiltonian;
  spec.geometry = geometry();
  return spec;
}

SymmetryGroup RunConfig::sector_group() const {
  const LatticeGeometry g = geometry();
  switch (symmetry.group) {
    case GroupKind::kC4v: return build_c4v(g, symmetry.irrep);
    case GroupKind::kSpaceGroup: return build_space_group(g, symmetry.k, symmetry.irrep);
    case GroupKind::kNone: return build_trivial_group(g);
  }
  return build_trivial_group(g);
}

SymmetryGroup RunConfig::wavefunction_group() const {
  if (symmetry.mode == SymmetryMode::kRepresentative) return build_trivial_group(geometry());
  return sector_group();
}

void RunConfig::validate() const {
  try {
    (void)geometry();
  } catch (const Error &e) {
    config_error("lattice", e.what());
  }
  if (network.shape.channels < 1) config_error("network.channels", "must be >= 1");
  if (network.shape.hidden < 1) config_error("network.hidden", "must be >= 1");
  if (!(network.init_scale > 0.0)) config_error("network.init_scale", "must be > 0");
  try {
    (void)sector_group();
  } catch (const Error &e) {
    config_error("symmetry", e.what());
  }
  if (sampler.n_chains < 1) config_error("sampler.n_chains", "must be >= 1");
  if (sampler.n_samples < 1) config_error("sampler.n_samples", "must be >= 1");
  if (sampler.n_samples % sampler.n_chains != 0) {
    config_error("sampler.n_samples", "must be divisible by sampler.n_chains");
  }
  if (sampler.n_thermalize < 0) config_error("sampler.n_thermalize", "must be >= 0");
  if (sampler.n_thermalize_step < 0) config_error("sampler.n_thermalize_step", "must be >= 0");
  if (sampler.n_sweeps_between < 1) config_error("sampler.n_sweeps_between", "must be >= 1");
  if (!(sampler.p_nn >= 0.0 && sampler.p_nn <= 1.0)) config_error("sampler.p_nn", "must lie in [0, 1]");
  optimizer.validate();
  if (run.max_steps < 0) config_error("run.max_steps", "must be >= 0");
  if (run.checkpoint_every < 0) config_error("run.checkpoint_every", "must be >= 0");
  if (run.nonergodic_patience < 1) config_error("run.nonergodic_patience", "must be >= 1");
  const int n_sites = lx * ly;
  if (run.mode == RunMode::kExactSum && n_sites > 20) {
    config_error("run.mode", "exact_sum needs the Sz = 0 sector to fit the enumeration cap of 20 sites; lattice has " +
                                 std::to_string(n_sites));
  }
  if (symmetry.mode == SymmetryMode::kRepresentative && run.mode != RunMode::kExactSum) {
    config_error("symmetry.mode", "representative mode requires run.mode = exact_sum");
  }
}

nlohmann::json RunConfig::to_json() const {
  json j;
  j["lattice"] = {{"lx", lx}, {"ly", ly}};
  j["hamiltonian"] = {{"j1", hamiltonian.j1}, {"j2", hamiltonian.j2}};
  j["symmetry"] = {{"group", GroupKindName(symmetry.group)},
                   {"irrep", symmetry.irrep},
                   {"k", {symmetry.k.qx, symmetry.k.qy}},
                   {"mode", SymmetryModeName(symmetry.mode)}};
  j["network"] = {{"channels", network.shape.channels},
                  {"hidden", network.shape.hidden},
                  {"init_scale", network.init_scale},
                  {"phase_init_scale", network.phase_init_scale}};
  j["sampler"] = {{"n_samples", sampler.n_samples},
                  {"n_chains", sampler.n_chains},
                  {"n_thermalize", sampler.n_thermalize},
                  {"n_thermalize_step", sampler.n_thermalize_step},
                  {"n_sweeps_between", sampler.n_sweeps_between},
                  {"p_nn", sampler.p_nn}};
  j["optimizer"] = {{"rule", UpdateRuleName(optimizer.rule)},
                    {"m", optimizer.m},
                    {"beta", optimizer.beta},
                    {"beta1", optimizer.effective_beta1()},
                    {"learning_rate", optimizer.learning_rate},
                    {"lr_mode", LrModeName(optimizer.lr_mode)},
                    {"momentum_mu", optimizer.momentum_mu},
                    {"lr_cap", optimizer.lr_cap},
                    {"lr_growth", optimizer.lr_growth}};
  j["run"] = {{"max_steps", run.max_steps},
              {"checkpoint_every", run.checkpoint_every},
              {"output_dir", run.output_dir},
              {"seed", run.seed},
              {"mode", RunModeName(run.mode)},
              {"nonergodic_patience", run.nonergodic_patience},
              {"wall_clock", run.wall_clock},
              {"ed_reference", run.ed_reference}};
  return j;
}

std::string RunConfig::hash() const {
  json j = to_json();
  j["run"].erase("output_dir");
  return fnv1a_hex(j.dump());
}

RunConfig parse_run_config(const nlohmann::json &document) {
  RunConfig c;
  if (document.is_object() && document.contains("preset")) {
    const json &p = document.at("preset");
    if (!p.is_string()) config_error("preset", "expected a preset name");
    c = preset(p.get<std::string>());
  }
  apply_document(c, document);
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw Error(ErrorKind::kInvalidConfig, path + ": " + e.what());
  }
  try {
    return parse_run_config(doc);
  } catch (const Error &e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto &p : preset_table()) names.emplace_back(p.name);
  return names;
}

RunConfig preset(const std::string &name) {
  for (const auto &p : preset_table()) {
    if (name == p.name) return table_preset(p.rule, p.j2, p.lr, p.mode, p.m, p.beta);
  }
  config_error("preset", "unknown preset '" + name + "'");
}

}  // namespace signvmc
