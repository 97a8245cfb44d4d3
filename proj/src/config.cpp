// Copyright 2026 The qmemsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmemsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qmemsim {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

const char* type_name(const json& j) {
  if (j.is_null()) return "null";
  if (j.is_boolean()) return "boolean";
  if (j.is_number_integer()) return "integer";
  if (j.is_number()) return "number";
  if (j.is_string()) return "string";
  if (j.is_array()) return "array";
  return "object";
}

// Overlay `user` onto `base` (a defaults tree), checking keys and types.
void overlay(json& base, const json& user, const std::string& path) {
  if (!user.is_object()) throw ConfigError("expected an object at '" + path + "'");
  for (const auto& [key, value] : user.items()) {
    const std::string where = path.empty() ? key : path + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown key '" + key + "' at '" + where + "'");
    json& slot = base[key];
    bool ok = false;
    if (slot.is_object()) {
      overlay(slot, value, where);
      continue;
    }
    if (slot.is_null()) {
      ok = value.is_null() || value.is_number();
    } else if (slot.is_number_integer()) {
      ok = value.is_number_integer() || (value.is_number_float() && value.get<double>() ==
                                                                         std::floor(value.get<double>()));
    } else if (slot.is_number()) {
      ok = value.is_number();
    } else if (slot.is_boolean()) {
      ok = value.is_boolean();
    } else if (slot.is_string()) {
      ok = value.is_string();
    } else if (slot.is_array()) {
      ok = value.is_array();
      for (const json& e : value) ok = ok && e.is_number();
    }
    if (!ok) {
      throw ConfigError("type mismatch at '" + where + "': expected " + type_name(slot) + ", got " +
                        type_name(value));
    }
    if (slot.is_number_integer() && value.is_number_float()) {
      slot = static_cast<long long>(value.get<double>());
    } else if (slot.is_number_unsigned() && value.is_number_integer() && value.get<long long>() < 0) {
      throw ConfigError("negative value at '" + where + "'");
    } else {
      slot = value;
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& path) {
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value at '" + path + key + "': " + e.what());
  }
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["mot_rate"] = c.mot_rate;
  j["trials_per_cycle"] = c.trials_per_cycle;
  j["generation_phase"] = c.generation_phase;
  j["delay_line_transmission"] = c.delay_line_transmission;
  j["propagation_transmission"] = c.propagation_transmission;
  j["filter_transmission"] = c.filter_transmission;
  j["detector_efficiency"] = c.detector_efficiency;
  j["detector_dark_prob"] = c.detector_dark_prob;
  j["split_transmittance"] = c.split_transmittance;
  j["reference_path_correction"] = c.reference_path_correction;
  j["interferometer_visibility"] = c.interferometer_visibility;
  j["memory_visibility"] = c.memory_visibility;
  j["target_raw_visibility"] = c.target_raw_visibility;
  j["storage_time"] = c.storage_time;
  j["pulse_fwhm"] = c.pulse_fwhm;
  j["od_grid"] = c.od_grid;
  j["rng"] = kRngName;

  json& s = j["source"];
  s["p1_target"] = c.p1_target;
  s["field1_transmission"] = c.source.field1_transmission;
  s["heralding_efficiency"] = c.source.heralding_efficiency;
  s["herald_efficiency"] = c.source.herald_detector.efficiency;
  s["herald_dark_prob"] = c.source.herald_detector.dark_prob;
  s["n_max"] = c.source.n_max;

  json& m = j["memory"];
  m["od"] = c.memory.od;
  m["gamma"] = c.memory.gamma;
  m["gamma0"] = c.memory.gamma0;
  m["lifetime_tau"] = c.memory.lifetime_tau;
  m["od_penalty"] = c.memory.od_penalty;
  m["ramp_duration"] = c.memory.control.ramp_duration;
  m["background_mean"] = optional_number(c.background_mean);

  json& so = j["solver"];
  so["z_points"] = c.solver.z_points;
  so["dt_fraction"] = c.solver.dt_fraction;
  so["max_refinements"] = c.solver.max_refinements;
  so["tolerance"] = c.solver.tolerance;

  json& r = j["run"];
  r["pij_trials_input"] = c.run.pij_trials_input;
  r["pij_trials_output"] = c.run.pij_trials_output;
  r["fringe_trials_per_point"] = c.run.fringe_trials_per_point;
  r["hbt_trials"] = c.run.hbt_trials;
  r["fringe_points"] = c.run.fringe_points;
  r["repeater_runs"] = c.run.repeater_runs;

  json& rp = j["repeater"];
  rp["total_length_km"] = c.repeater.total_length_km;
  rp["link_count"] = c.repeater.link_count;
  rp["attenuation_length_km"] = c.repeater.attenuation_length_km;
  rp["detector_efficiency"] = c.repeater.detector_efficiency;
  rp["source_probability"] = c.repeater.source_probability;
  rp["attempt_period"] = optional_number(c.repeater.attempt_period);
  rp["memory_efficiencies"] = c.repeater.memory_efficiencies;
  return j;
}

ExperimentConfig config_from_json(const json& tree) {
  json j = config_to_json(ExperimentConfig{});
  overlay(j, tree, "");
  if (j["rng"] != kRngName) throw ConfigError("unsupported rng '" + j["rng"].dump() + "'");

  ExperimentConfig c;
  read(j, "seed", c.seed, "");
  read(j, "workers", c.workers, "");
  read(j, "mot_rate", c.mot_rate, "");
  read(j, "trials_per_cycle", c.trials_per_cycle, "");
  read(j, "generation_phase", c.generation_phase, "");
  read(j, "delay_line_transmission", c.delay_line_transmission, "");
  read(j, "propagation_transmission", c.propagation_transmission, "");
  read(j, "filter_transmission", c.filter_transmission, "");
  read(j, "detector_efficiency", c.detector_efficiency, "");
  read(j, "detector_dark_prob", c.detector_dark_prob, "");
  read(j, "split_transmittance", c.split_transmittance, "");
  read(j, "reference_path_correction", c.reference_path_correction, "");
  read(j, "interferometer_visibility", c.interferometer_visibility, "");
  read(j, "memory_visibility", c.memory_visibility, "");
  read(j, "target_raw_visibility", c.target_raw_visibility, "");
  read(j, "storage_time", c.storage_time, "");
  read(j, "pulse_fwhm", c.pulse_fwhm, "");
  read(j, "od_grid", c.od_grid, "");

  const json& s = j["source"];
  read(s, "p1_target", c.p1_target, "source.");
  read(s, "field1_transmission", c.source.field1_transmission, "source.");
  read(s, "heralding_efficiency", c.source.heralding_efficiency, "source.");
  read(s, "herald_efficiency", c.source.herald_detector.efficiency, "source.");
  read(s, "herald_dark_prob", c.source.herald_detector.dark_prob, "source.");
  read(s, "n_max", c.source.n_max, "source.");

  const json& m = j["memory"];
  read(m, "od", c.memory.od, "memory.");
  read(m, "gamma", c.memory.gamma, "memory.");
  read(m, "gamma0", c.memory.gamma0, "memory.");
  read(m, "lifetime_tau", c.memory.lifetime_tau, "memory.");
  read(m, "od_penalty", c.memory.od_penalty, "memory.");
  read(m, "ramp_duration", c.memory.control.ramp_duration, "memory.");
  c.background_mean = read_optional(m["background_mean"]);

  const json& so = j["solver"];
  read(so, "z_points", c.solver.z_points, "solver.");
  read(so, "dt_fraction", c.solver.dt_fraction, "solver.");
  read(so, "max_refinements", c.solver.max_refinements, "solver.");
  read(so, "tolerance", c.solver.tolerance, "solver.");

  const json& r = j["run"];
  read(r, "pij_trials_input", c.run.pij_trials_input, "run.");
  read(r, "pij_trials_output", c.run.pij_trials_output, "run.");
  read(r, "fringe_trials_per_point", c.run.fringe_trials_per_point, "run.");
  read(r, "hbt_trials", c.run.hbt_trials, "run.");
  read(r, "fringe_points", c.run.fringe_points, "run.");
  read(r, "repeater_runs", c.run.repeater_runs, "run.");

  const json& rp = j["repeater"];
  read(rp, "total_length_km", c.repeater.total_length_km, "repeater.");
  read(rp, "link_count", c.repeater.link_count, "repeater.");
  read(rp, "attenuation_length_km", c.repeater.attenuation_length_km, "repeater.");
  read(rp, "detector_efficiency", c.repeater.detector_efficiency, "repeater.");
  read(rp, "source_probability", c.repeater.source_probability, "repeater.");
  c.repeater.attempt_period = read_optional(rp["attempt_period"]);
  read(rp, "memory_efficiencies", c.repeater.memory_efficiencies, "repeater.");

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

json read_config_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in '" + path.string() + "': " + e.what());
  }
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  return config_from_json(read_config_tree(path));
}

void apply_override(json& tree, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &tree;
  std::size_t start = 0;
  for (;;) {
    const std::size_t dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty component in override key '" + key + "'");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

std::string config_digest(const ExperimentConfig& config) {
  const std::string canonical = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qmemsim
