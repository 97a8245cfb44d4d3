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

#include "qmemsim/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "qmemsim/analysis.hpp"
#include "qmemsim/config.hpp"
#include "qmemsim/eit.hpp"
#include "qmemsim/engine.hpp"
#include "qmemsim/interferometer.hpp"
#include "qmemsim/reference.hpp"
#include "qmemsim/repeater.hpp"

namespace qmemsim {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Context {
  ExperimentConfig config;
  std::string digest;
  fs::path out_dir;
  std::vector<std::string> outputs;

  fs::path path(const std::string& name) {
    outputs.push_back(name);
    return out_dir / name;
  }

  void write_csv(const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::ofstream f(path(name));
    if (!f) throw std::runtime_error("cannot write " + name);
    f << "# config_digest: " << digest << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
      f << "\n";
    }
  }

  void write_json(const std::string& name, ordered_json body) {
    ordered_json doc;
    doc["config_digest"] = digest;
    for (auto& [k, v] : body.items()) doc[k] = std::move(v);
    std::ofstream f(path(name));
    if (!f) throw std::runtime_error("cannot write " + name);
    f << doc.dump(2) << "\n";
  }
};

ordered_json to_json(const Estimate& e) {
  ordered_json j;
  j["value"] = e.value;
  j["sigma_minus"] = e.minus ? ordered_json(*e.minus) : ordered_json(nullptr);
  j["sigma_plus"] = e.plus ? ordered_json(*e.plus) : ordered_json(nullptr);
  return j;
}

ordered_json to_json(const PathProbabilities& p) {
  return ordered_json{{"p00", p.p00}, {"p01", p.p01}, {"p10", p.p10}, {"p11", p.p11}};
}

ordered_json to_json(const ReducedDM& dm) {
  ordered_json j = to_json(PathProbabilities{dm.p00, dm.p01, dm.p10, dm.p11});
  j["d"] = dm.d;
  j["P"] = dm.P();
  j["physical"] = dm.physical();
  const Eigen::Matrix4d m = dm.matrix().real();
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < 4; ++r) {
    rows.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
  }
  j["matrix"] = rows;
  return j;
}

ordered_json to_json(const EntanglementReport& r) {
  ordered_json j;
  j["p00"] = to_json(r.pij.p00);
  j["p01"] = to_json(r.pij.p01);
  j["p10"] = to_json(r.pij.p10);
  j["p11"] = to_json(r.pij.p11);
  j["visibility"] = to_json(r.visibility);
  j["d"] = to_json(r.d);
  j["concurrence"] = to_json(r.concurrence);
  j["suppression"] = r.suppression_defined ? to_json(r.suppression) : ordered_json(nullptr);
  j["physical"] = r.physical;
  return j;
}

ordered_json to_json(const PairedReport& r) {
  ordered_json j;
  j["input"] = to_json(r.in);
  j["output"] = to_json(r.out);
  j["eta"] = to_json(r.eta);
  j["lambda"] = r.lambda ? to_json(*r.lambda) : ordered_json(nullptr);
  return j;
}

ordered_json to_json(const CountsTable& t) {
  ordered_json j;
  j["mode"] = to_string(t.mode);
  j["stage"] = to_string(t.stage);
  j["n_trials"] = t.n_trials;
  j["n_heralds"] = t.n_heralds;
  j["n_singles_d2"] = t.n_singles_d2;
  j["n_singles_d3"] = t.n_singles_d3;
  j["n_coinc_00"] = t.n_coinc_00;
  j["n_coinc_01"] = t.n_coinc_01;
  j["n_coinc_10"] = t.n_coinc_10;
  j["n_coinc_11"] = t.n_coinc_11;
  j["n_triples"] = t.n_triples;
  if (!t.fringe.empty()) {
    ordered_json pts = ordered_json::array();
    for (const FringePointCounts& p : t.fringe) {
      pts.push_back({{"phase", p.phase}, {"n_trials", p.n_trials}, {"n_heralds", p.n_heralds},
                     {"n_d1", p.n_d1}, {"n_d2", p.n_d2}, {"n_coinc", p.n_coinc}});
    }
    j["fringe"] = pts;
  }
  return j;
}

ordered_json to_json(const VisibilityFit& f) {
  return ordered_json{{"visibility", f.visibility},   {"sigma_visibility", f.sigma_visibility},
                      {"phase_offset", f.phase_offset}, {"mean_level", f.mean_level},
                      {"rms_residual", f.rms_residual}, {"clamped", f.clamped}};
}

ordered_json to_json(const RateReport& r) {
  ordered_json j;
  j["duty_factor"] = r.duty_factor;
  j["generation_seconds"] = r.generation_seconds;
  j["in_phase"] = {{"herald_rate", r.herald_rate},
                   {"heralded_photon_rate", r.heralded_photon_rate},
                   {"entanglement_rate", r.entanglement_rate},
                   {"detection_rate", r.detection_rate}};
  j["overall"] = {{"herald_rate", r.overall_herald_rate},
                  {"heralded_photon_rate", r.overall_heralded_photon_rate},
                  {"entanglement_rate", r.overall_entanglement_rate},
                  {"detection_rate", r.overall_detection_rate}};
  return j;
}

ordered_json to_json(const StorageResult& s) {
  return ordered_json{{"efficiency", s.efficiency},
                      {"leakage_fraction", s.leakage_fraction},
                      {"dissipated_fraction", s.dissipated_fraction},
                      {"residual_fraction", s.residual_fraction},
                      {"energy_balance", s.energy_balance()},
                      {"z_points", s.diagnostics.z_points},
                      {"time_steps", s.diagnostics.time_steps},
                      {"refinements", s.diagnostics.refinements},
                      {"refinement_delta", s.diagnostics.refinement_delta},
                      {"converged", s.diagnostics.converged}};
}

ordered_json setup_summary(const Setup& s) {
  return ordered_json{{"chi", s.config.source.chi},
                      {"p1", s.photon.p1},
                      {"storage_efficiency", s.storage.efficiency},
                      {"memory_transmission", s.memory_transmission},
                      {"background_mean", s.background_mean}};
}

// ---------------------------------------------------------------- curves

MemoryParams memory_params(const ExperimentConfig& c) {
  MemoryParams m = c.memory;
  m.storage_time = c.storage_time;
  return m;
}

PulseEnvelope config_pulse(const ExperimentConfig& c) {
  return gaussian_pulse(c.pulse_fwhm, 2.5 * c.pulse_fwhm, c.pulse_fwhm * c.solver.dt_fraction,
                        5.0 * c.pulse_fwhm);
}

std::vector<EfficiencyPoint> curve(const ExperimentConfig& c) {
  return efficiency_vs_od(c.od_grid, memory_params(c), config_pulse(c), c.solver);
}

std::vector<std::vector<std::string>> curve_rows(const std::vector<EfficiencyPoint>& pts,
                                                 double lifetime) {
  std::vector<std::vector<std::string>> rows;
  for (const EfficiencyPoint& p : pts) {
    rows.push_back({fmt(p.od), fmt(p.result.efficiency), fmt(p.result.leakage_fraction),
                    p.result.diagnostics.converged ? "1" : "0", fmt(p.result.efficiency * lifetime),
                    fmt(p.result.dissipated_fraction), fmt(p.result.residual_fraction),
                    fmt(p.result.energy_balance()),
                    std::to_string(p.result.diagnostics.refinements)});
  }
  return rows;
}

const std::vector<std::string> kCurveHeader{"od",         "efficiency", "leakage",        "converged",
                                            "with_lifetime", "dissipated", "residual", "energy_balance",
                                            "refinements"};

ordered_json cmd_efficiency_curve(Context& ctx) {
  const auto pts = curve(ctx.config);
  const double lf = lifetime_factor(ctx.config.storage_time, ctx.config.memory.lifetime_tau);
  ctx.write_csv("efficiency_curve.csv", kCurveHeader, curve_rows(pts, lf));
  ordered_json j;
  j["lifetime_factor"] = lf;
  ordered_json arr = ordered_json::array();
  for (const auto& p : pts) {
    ordered_json e = to_json(p.result);
    e["od"] = p.od;
    arr.push_back(e);
  }
  j["points"] = arr;
  ctx.write_json("efficiency_curve.json", j);
  return {{"points", pts.size()}, {"efficiency_at_last_od", pts.empty() ? 0.0 : pts.back().result.efficiency}};
}

ordered_json cmd_fig2c(Context& ctx) {
  const auto pts = curve(ctx.config);
  const double lf = lifetime_factor(ctx.config.storage_time, ctx.config.memory.lifetime_tau);
  ctx.write_csv("fig2c.csv", kCurveHeader, curve_rows(pts, lf));
  bool monotone = true;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    monotone = monotone &&
               pts[i].result.efficiency >= pts[i - 1].result.efficiency - ctx.config.solver.tolerance;
  }
  const double last = pts.empty() ? 0.0 : pts.back().result.efficiency;
  const double lo = reference::kMemoryEfficiency - reference::kMemoryEfficiencySigma;
  const double hi = reference::kMemoryEfficiency + reference::kMemoryEfficiencySigma;
  ordered_json j;
  j["od_max"] = pts.empty() ? 0.0 : pts.back().od;
  j["efficiency_at_od_max"] = last;
  j["target"] = {{"value", reference::kMemoryEfficiency}, {"band", {lo, hi}}};
  j["within_band"] = last >= lo && last <= hi;
  j["monotone"] = monotone;
  ctx.write_json("fig2c.json", j);
  return {{"efficiency_at_od_max", last}, {"monotone", monotone}};
}

// ---------------------------------------------------------------- source

Estimate hbt_from_counts(const CountsTable& t) {
  if (t.n_singles_d2 == 0 || t.n_singles_d3 == 0) return Estimate::exact(0.0);
  const double n = static_cast<double>(t.n_heralds);
  const double a = static_cast<double>(t.n_singles_d2);
  const double b = static_cast<double>(t.n_singles_d3);
  if (t.n_triples == 0) return Estimate{0.0, 0.0, n * kZeroCountUpper / (a * b)};
  const double w = n * t.n_triples / (a * b);
  return Estimate::symmetric(w, w * std::sqrt(1.0 / t.n_triples + 1.0 / a + 1.0 / b));
}

ordered_json cmd_hbt(Context& ctx) {
  const Setup base = prepare(ctx.config);
  const std::vector<double> p1_grid{0.25e-3, 0.5e-3, 1e-3, 2e-3, 4e-3};
  const ClickDetector det = base.detector;
  const BeamSplitter half{1, 0.5, 0.0};
  std::vector<std::vector<std::string>> rows;
  for (double p1 : p1_grid) {
    ExperimentConfig c = ctx.config;
    c.p1_target = p1;
    c.background_mean = base.background_mean;
    const Setup s = prepare(c, base.storage);
    const Ratio w_src = s.photon.w_source;
    const Ratio w_in = hbt_suppression(hbt_input(s, Stage::Input), half, det, det);
    const Ratio w_out = hbt_suppression(hbt_input(s, Stage::Output), half, det, det);
    auto cell = [](const Ratio& r) { return r.defined() ? fmt(r.get()) : std::string("nan"); };
    rows.push_back({fmt(p1), fmt(s.config.source.chi), cell(w_src), cell(w_in), cell(w_out)});
  }
  ctx.write_csv("hbt.csv", {"p1", "chi", "w_source", "w_before", "w_after"}, rows);

  ordered_json j;
  j["setup"] = setup_summary(base);
  for (Stage st : {Stage::Input, Stage::Output}) {
    const CountsTable t = run_trials(base, ctx.config.run.hbt_trials, TrialMode::Hbt, st);
    ordered_json e;
    e["counts"] = to_json(t);
    e["w"] = to_json(hbt_from_counts(t));
    const Ratio exact = hbt_suppression(hbt_input(base, st), half, det, det);
    e["w_exact"] = exact.defined() ? ordered_json(exact.get()) : ordered_json(nullptr);
    j[to_string(st)] = e;
  }
  ctx.write_json("hbt.json", j);
  return {{"rows", rows.size()}};
}

// ---------------------------------------------------------------- fringes

struct FringeRun {
  CountsTable table;
  VisibilityFit fit;
  VisibilityFit exact_fit;
  FringeData exact;
};

FringeRun run_fringe(const Setup& s, Stage stage) {
  const std::vector<double> phases = fringe_phases(s.config.run.fringe_points);
  FringeRun r;
  r.table = run_trials(s, s.config.run.fringe_trials_per_point, TrialMode::Fringe, stage, phases);
  r.fit = fit_visibility(r.table.fringe_data());
  r.exact = scan_fringes(path_state(s, stage), phases, s.detector, s.detector);
  r.exact_fit = fit_visibility(r.exact);
  return r;
}

void write_fringe_csv(Context& ctx, const std::string& name, const FringeRun& r) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < r.table.fringe.size(); ++k) {
    const FringePointCounts& p = r.table.fringe[k];
    const double n = static_cast<double>(std::max(1LL, p.n_heralds));
    const double fit = r.fit.mean_level *
                       (1.0 + r.fit.visibility * std::sin(p.phase + r.fit.phase_offset));
    rows.push_back({fmt(p.phase), fmt(p.n_d1 / n), fmt(p.n_d2 / n), fmt(p.n_coinc / n),
                    std::to_string(p.n_heralds), std::to_string(p.n_d1), std::to_string(p.n_d2),
                    std::to_string(p.n_coinc), fmt(fit), fmt(r.exact.p_d1[k])});
  }
  ctx.write_csv(name,
                {"phase", "p_d1", "p_d2", "p_coinc", "n_heralds", "n_d1", "n_d2", "n_coinc", "fit_d1",
                 "exact_d1"},
                rows);
}

ordered_json fringe_summary(const FringeRun& r) {
  return ordered_json{{"fit", to_json(r.fit)}, {"exact_fit", to_json(r.exact_fit)}};
}

ordered_json cmd_fringes(Context& ctx) {
  const Setup s = prepare(ctx.config);
  const FringeRun in = run_fringe(s, Stage::Input);
  const FringeRun out = run_fringe(s, Stage::Output);
  write_fringe_csv(ctx, "fringes_input.csv", in);
  write_fringe_csv(ctx, "fringes_output.csv", out);
  ctx.write_json("fringes.json", {{"setup", setup_summary(s)},
                                  {"input", fringe_summary(in)},
                                  {"output", fringe_summary(out)}});
  return {{"v_input", in.fit.visibility}, {"v_output", out.fit.visibility}};
}

// ---------------------------------------------------------------- tomography

struct Tomography {
  Setup setup;
  CountsTable pij_in, pij_out;
  FringeRun fringe_in, fringe_out;
  PairedReport report;
  CorrectedVisibility corrected;
  double signal = 0.0;
  double background = 0.0;
};

Tomography tomography(const ExperimentConfig& c) {
  Tomography t{prepare(c), {}, {}, {}, {}, {}, {}, 0.0, 0.0};
  t.pij_in = run_trials(t.setup, c.run.pij_trials_input, TrialMode::Pij, Stage::Input);
  t.pij_out = run_trials(t.setup, c.run.pij_trials_output, TrialMode::Pij, Stage::Output);
  t.fringe_in = run_fringe(t.setup, Stage::Input);
  t.fringe_out = run_fringe(t.setup, Stage::Output);
  auto v = [](const VisibilityFit& f) { return Estimate::symmetric(f.visibility, f.sigma_visibility); };
  t.report = paired_report(t.pij_in.pij_counts(), v(t.fringe_in.fit), t.pij_out.pij_counts(),
                           v(t.fringe_out.fit));
  // Background share of the output one-photon signal, from exact probabilities.
  const PathProbabilities with_bg =
      measure_pij(path_state(t.setup, Stage::Output), t.setup.detector, t.setup.detector);
  const PathProbabilities no_bg =
      measure_pij(path_state(t.setup, Stage::Output, 0.0), t.setup.detector, t.setup.detector);
  t.signal = no_bg.single();
  t.background = std::max(0.0, with_bg.single() - no_bg.single());
  t.corrected = background_correct_visibility(t.fringe_out.fit.visibility, t.signal, t.background);
  return t;
}

ordered_json cmd_tomography(Context& ctx) {
  const Tomography t = tomography(ctx.config);
  ctx.write_json("counts_input.json", {{"counts", to_json(t.pij_in)}});
  ctx.write_json("counts_output.json", {{"counts", to_json(t.pij_out)}});
  ordered_json j;
  j["setup"] = setup_summary(t.setup);
  j["report"] = to_json(t.report);
  j["background_correction"] = {{"signal", t.signal},
                                {"background", t.background},
                                {"visibility", t.corrected.visibility},
                                {"clamped", t.corrected.clamped}};
  ctx.write_json("tomography.json", j);
  return {{"c_in", t.report.in.concurrence.value}, {"c_out", t.report.out.concurrence.value}};
}

// ---------------------------------------------------------------- rates

ordered_json cmd_rates(Context& ctx) {
  const Setup s = prepare(ctx.config);
  const CountsTable in = run_trials(s, ctx.config.run.pij_trials_input, TrialMode::Pij, Stage::Input);
  const CountsTable out = run_trials(s, ctx.config.run.pij_trials_output, TrialMode::Pij, Stage::Output);
  const RateReport r_in = rates_report(ctx.config, in);
  const RateReport r_out = rates_report(ctx.config, out);
  ordered_json j;
  j["setup"] = setup_summary(s);
  j["input"] = to_json(r_in);
  j["output"] = to_json(r_out);
  ctx.write_json("rates.json", j);
  ctx.write_json("counts_input.json", {{"counts", to_json(in)}});
  ctx.write_json("counts_output.json", {{"counts", to_json(out)}});
  return {{"heralded_photon_rate", r_in.heralded_photon_rate}, {"detection_rate", r_out.detection_rate}};
}

// ---------------------------------------------------------------- repeater

ordered_json cmd_repeater(Context& ctx) {
  const RepeaterConfig& rc = ctx.config.repeater;
  std::vector<std::vector<std::string>> rows;
  std::map<double, double> times;
  for (double eta : rc.memory_efficiencies) {
    const RepeaterParams p = rc.params(eta);
    const RepeaterResult r = repeater_distribution_time(p, ctx.config.run.repeater_runs,
                                                        ctx.config.seed, ctx.config.workers > 0
                                                            ? ctx.config.workers
                                                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency())));
    times[eta] = r.mean_time;
    rows.push_back({fmt(eta), fmt(p.swap_success()), fmt(p.link_success()), fmt(p.period()),
                    fmt(r.mean_time), fmt(r.std_error), fmt(r.analytic_time)});
  }
  ctx.write_csv("repeater.csv",
                {"memory_efficiency", "swap_success", "link_success", "attempt_period", "mean_time",
                 "std_error", "analytic_time"},
                rows);
  ordered_json j;
  j["total_length_km"] = rc.total_length_km;
  j["link_count"] = rc.link_count;
  j["swap_model"] = "(eta_m eta_d)^2 / 2";
  ordered_json ratio = nullptr;
  if (times.size() >= 2) ratio = times.begin()->second / times.rbegin()->second;
  j["time_ratio_lowest_to_highest_efficiency"] = ratio;
  ctx.write_json("repeater.json", j);
  return {{"time_ratio", ratio}};
}

// ---------------------------------------------------------------- reproductions

ordered_json reference_column(const reference::Column& c) {
  return ordered_json{{"pij", to_json(c.pij)}, {"sigma", to_json(c.sigma)},
                      {"visibility", c.visibility}, {"concurrence", c.concurrence}};
}

ordered_json cmd_table1(Context& ctx) {
  using namespace reference;
  // Analysis of the reference columns alone.
  const PijCounts k_in = counts_for(kInput);
  const PijCounts k_out = counts_for(kOutput);
  const PairedReport ref = paired_report(k_in, Estimate::exact(kInput.visibility), k_out,
                                         Estimate::exact(kOutput.visibility));
  const PairedReport ref_corr = paired_report(k_in, Estimate::exact(kInput.visibility), k_out,
                                              Estimate::exact(kCorrectedOutputVisibility));

  const Tomography t = tomography(ctx.config);
  auto z = [](const Estimate& sim, double ref_value) {
    const double s = sim.sigma();
    return s > 0.0 ? ordered_json((sim.value - ref_value) / s) : ordered_json(nullptr);
  };
  ordered_json cmp;
  for (const auto& [name, sim, col] :
       {std::tuple{"input", &t.report.in, &kInput}, std::tuple{"output", &t.report.out, &kOutput}}) {
    cmp[name] = {{"p01_z", z(sim->pij.p01, col->pij.p01)},
                 {"p10_z", z(sim->pij.p10, col->pij.p10)},
                 {"p11_z", z(sim->pij.p11, col->pij.p11)},
                 {"p00_z", z(sim->pij.p00, col->pij.p00)}};
  }
  ordered_json j;
  j["reference"] = {{"input", reference_column(kInput)}, {"output", reference_column(kOutput)}};
  j["reference_analysis"] = to_json(ref);
  j["reference_analysis_corrected_output"] = to_json(ref_corr);
  j["simulated"] = to_json(t.report);
  j["simulated_setup"] = setup_summary(t.setup);
  j["simulated_vs_reference_z"] = cmp;
  ctx.write_json("table1.json", j);
  std::vector<std::vector<std::string>> rows;
  auto row = [&](const char* q, const Estimate& a, const Estimate& b) {
    rows.push_back({q, fmt(a.value), fmt(a.sigma()), fmt(b.value), fmt(b.sigma())});
  };
  row("p00_in", ref.in.pij.p00, t.report.in.pij.p00);
  row("p01_in", ref.in.pij.p01, t.report.in.pij.p01);
  row("p10_in", ref.in.pij.p10, t.report.in.pij.p10);
  row("p11_in", ref.in.pij.p11, t.report.in.pij.p11);
  row("p00_out", ref.out.pij.p00, t.report.out.pij.p00);
  row("p01_out", ref.out.pij.p01, t.report.out.pij.p01);
  row("p10_out", ref.out.pij.p10, t.report.out.pij.p10);
  row("p11_out", ref.out.pij.p11, t.report.out.pij.p11);
  row("C_in", ref.in.concurrence, t.report.in.concurrence);
  row("C_out", ref.out.concurrence, t.report.out.concurrence);
  row("w_in", ref.in.suppression, t.report.in.suppression);
  row("w_out", ref.out.suppression, t.report.out.suppression);
  row("eta", ref.eta, t.report.eta);
  if (ref.lambda && t.report.lambda) row("lambda", *ref.lambda, *t.report.lambda);
  ctx.write_csv("table1.csv", {"quantity", "reference", "reference_sigma", "simulated", "simulated_sigma"},
                rows);
  return {{"c_in", ref.in.concurrence.value}, {"c_out", ref.out.concurrence.value},
          {"simulated_c_in", t.report.in.concurrence.value}};
}

ordered_json cmd_fig3(Context& ctx) {
  const Tomography t = tomography(ctx.config);
  write_fringe_csv(ctx, "fig3_fringes_input.csv", t.fringe_in);
  write_fringe_csv(ctx, "fig3_fringes_output.csv", t.fringe_out);
  const PathProbabilities p_in = t.pij_in.pij_counts().probabilities();
  const PathProbabilities p_out = t.pij_out.pij_counts().probabilities();
  const ReducedDM dm_in = reduced_density_matrix(p_in, t.fringe_in.fit.visibility);
  const ReducedDM dm_out = reduced_density_matrix(p_out, t.fringe_out.fit.visibility);
  const ReducedDM dm_corr = reduced_density_matrix(p_out, t.corrected.visibility);
  ordered_json j;
  j["setup"] = setup_summary(t.setup);
  j["fringes"] = {{"input", fringe_summary(t.fringe_in)}, {"output", fringe_summary(t.fringe_out)}};
  j["density_matrix"] = {{"input", to_json(dm_in)}, {"output", to_json(dm_out)},
                         {"output_background_corrected", to_json(dm_corr)}};
  j["concurrence"] = {{"input", to_json(t.report.in.concurrence)},
                      {"output", to_json(t.report.out.concurrence)},
                      {"output_background_corrected", concurrence(dm_corr)}};
  j["corrected_visibility"] = t.corrected.visibility;
  ctx.write_json("fig3.json", j);
  return {{"v_in", t.fringe_in.fit.visibility}, {"v_out", t.fringe_out.fit.visibility}};
}

using Command = std::function<ordered_json(Context&)>;

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table{
      {"efficiency-curve", cmd_efficiency_curve},
      {"hbt", cmd_hbt},
      {"fringes", cmd_fringes},
      {"tomography", cmd_tomography},
      {"rates", cmd_rates},
      {"repeater", cmd_repeater},
      {"reproduce-table1", cmd_table1},
      {"reproduce-fig2c", cmd_fig2c},
      {"reproduce-fig3", cmd_fig3},
  };
  return table;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void print_error(std::ostream& err, const char* kind, const std::string& message) {
  err << ordered_json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

const std::vector<std::string>& cli_commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : command_table()) v.push_back(name);
    return v;
  }();
  return names;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Single-photon entanglement storage simulator", "qmemsim"};
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir = "qmemsim-out";
  std::vector<std::string> overrides;
  app.add_option("command", command, "one of: efficiency-curve, hbt, fringes, tomography, rates, "
                                     "repeater, reproduce-table1, reproduce-fig2c, reproduce-fig3")
      ->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--workers", workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--set", overrides, "override key=value (dotted key path), repeatable");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  }

  const auto& table = command_table();
  const auto it = table.find(command);
  if (it == table.end()) {
    print_error(err, "usage", "unknown command '" + command + "'");
    return kExitUsage;
  }

  Context ctx;
  try {
    json tree = config_path.empty() ? json::object() : read_config_tree(config_path);
    for (const std::string& o : overrides) apply_override(tree, o);
    if (seed) tree["seed"] = *seed;
    if (workers) tree["workers"] = *workers;
    ctx.config = config_from_json(tree);
  } catch (const ConfigError& e) {
    print_error(err, "usage", e.what());
    return kExitUsage;
  }
  ctx.digest = config_digest(ctx.config);
  ctx.out_dir = out_dir;

  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  ordered_json summary;
  try {
    fs::create_directories(ctx.out_dir);
    {
      std::ofstream f(ctx.path("config.json"));
      f << config_to_json(ctx.config).dump(2) << "\n";
    }
    summary = it->second(ctx);
  } catch (const std::exception& e) {
    print_error(err, "runtime", e.what());
    return kExitRuntime;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  ordered_json manifest;
  manifest["command"] = command;
  manifest["config_digest"] = ctx.digest;
  manifest["seed"] = ctx.config.seed;
  manifest["rng"] = kRngName;
  manifest["versions"] = {{"qmemsim", kVersion},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                        std::to_string(EIGEN_MINOR_VERSION)},
                          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                          {"cli11", CLI11_VERSION}};
  manifest["outputs"] = ctx.outputs;
  manifest["summary"] = summary;
  manifest["started_utc"] = started;
  manifest["wall_clock_seconds"] = seconds;
  try {
    std::ofstream f(ctx.out_dir / "manifest.json");
    f << manifest.dump(2) << "\n";
  } catch (const std::exception& e) {
    print_error(err, "runtime", e.what());
    return kExitRuntime;
  }
  out << manifest.dump(2) << "\n";
  return kExitOk;
}

}  // namespace qmemsim
