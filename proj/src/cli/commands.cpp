#include "omx/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "omx/analysis.hpp"
#include "omx/cli/presets.hpp"
#include "omx/dynamics.hpp"

#ifndef OMX_VERSION
#define OMX_VERSION "0.0.0"
#endif

namespace omx::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string tool_version() { return OMX_VERSION; }

namespace {

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json metadata(const ScenarioConfig& c, const std::string& command) {
  return {{"tool", "omx"}, {"version", tool_version()}, {"config_hash", config_hash(c)},
          {"command", command}};
}

std::string csv_comment(const ScenarioConfig& c, const std::string& command) {
  return "# omx " + tool_version() + " config_hash=" + config_hash(c) + " command=" + command + "\n";
}

fs::path output_file(const fs::path& dir, const ScenarioConfig& c, const std::string& suffix) {
  return dir / (c.output.prefix + "_" + suffix);
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json warnings_json(const std::vector<TruncationWarning>& ws) {
  json out = json::array();
  for (const auto& w : ws)
    out.push_back({{"mode", w.mode}, {"dim", w.dim}, {"recommended_dim", w.recommended_dim}});
  return out;
}

std::vector<int> optical_dims(const Scenario& s) { return {s.dims.begin(), s.dims.end() - 1}; }

CompositeSpace scenario_space(const Scenario& s) {
  return optomechanical_space(optical_dims(s), s.dims.back());
}

template <typename F>
CommandResult guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return {kExitConfig, {}, e.what()};
  } catch (const DivergenceError& e) {
    return {kExitDivergence, {}, e.what()};
  } catch (const InvalidArgument& e) {
    return {kExitConfig, {}, e.what()};
  } catch (const DomainError& e) {
    return {kExitConfig, {}, e.what()};
  } catch (const SpaceMismatch& e) {
    return {kExitConfig, {}, e.what()};
  } catch (const std::exception& e) {
    return {kExitFailure, {}, e.what()};
  }
}

// -- spectrum -------------------------------------------------------------------

CommandResult spectrum(const ScenarioConfig& c, const fs::path& dir) {
  const Scenario s = resolve(c);
  const CompositeSpace space = scenario_space(s);
  const SpectrumReport rep = undriven_spectrum(space, s.device);
  json levels = json::array();
  for (const auto& l : rep.levels)
    levels.push_back({{"occupations", l.occupations},
                      {"eigenvalue", l.eigenvalue},
                      {"predicted", l.predicted},
                      {"deviation", l.eigenvalue - l.predicted},
                      {"trusted", l.trusted}});
  json out{{"meta", metadata(c, "spectrum")},
           {"config", to_json(c)},
           {"space", space.describe()},
           {"max_deviation", rep.max_deviation},
           {"max_deviation_all_levels", rep.max_deviation_all},
           {"trusted_levels", rep.trusted_levels},
           {"total_levels", rep.levels.size()},
           {"off_sector_coupling", rep.off_sector_norm},
           {"levels", levels}};
  const fs::path file = output_file(dir, c, "spectrum.json");
  write_json(file, out);
  char msg[160];
  std::snprintf(msg, sizeof msg, "spectrum: max deviation %.3e over %d trusted levels",
                rep.max_deviation, rep.trusted_levels);
  return {kExitOk, {file}, msg};
}

// -- groundstate ------------------------------------------------------------------

json axis_json(const AxisSpec& a) { return {{"min", a.min}, {"max", a.max}, {"count", a.count}}; }

CommandResult groundstate(const ScenarioConfig& c, const fs::path& dir) {
  const Scenario s = resolve(c);
  if (!s.parametric) throw ConfigError("config.analysis.parametric: required by groundstate");
  const ParametricModel model = *s.parametric;
  const auto& gcfg = c.analysis.groundstate;

  json analytic{{"regime", to_string(regime_of(model))}};
  try {
    analytic["proximity"] = classify_regime(model).proximity;
  } catch (const DomainError&) {
    analytic["proximity"] = nullptr;
  }
  try {
    const QuadraticForm q = quadratic_form(model);
    analytic["omega_x"] = q.omega_x;
    analytic["omega_y"] = q.omega_y;
    analytic["xi"] = q.xi;
    if (q.regime == Regime::harmonic) {
      analytic["var_x"] = 0.5 * std::sqrt(q.omega_y / q.omega_x);
      analytic["var_y"] = 0.5 * std::sqrt(q.omega_x / q.omega_y);
    }
  } catch (const DomainError& e) {
    analytic["xi"] = nullptr;
    analytic["note"] = e.what();
  }

  const GroundState gs = ground_state(
      [&](int d) { return parametric_oscillator(model, CompositeSpace::single(d, kMechMode)); },
      gcfg.start_dim, gcfg.max_dim);
  const SqueezingReport sq = quadrature_variances(gs.state);
  const GridSpec grid = default_grid(sq, c.analysis.grid.points, c.analysis.grid.span_sigma);
  const QFunctionGrid q = husimi_q(gs.state, grid);
  const auto [pr, pi] = q.peak();

  std::string csv = csv_comment(c, "groundstate") + "re_beta,im_beta,q_value\n";
  for (int i = 0; i < grid.im.count; ++i)
    for (int r = 0; r < grid.re.count; ++r)
      csv += csv_number(grid.re.at(r)) + "," + csv_number(grid.im.at(i)) + "," +
             csv_number(q.value(r, i)) + "\n";
  const fs::path csv_file = output_file(dir, c, "q.csv");
  write_file(csv_file, csv);

  json out{{"meta", metadata(c, "groundstate")},
           {"config", to_json(c)},
           {"model", {{"epsilon", model.epsilon}, {"g1", model.g1}, {"g2", model.g2}}},
           {"analytic", analytic},
           {"energy", gs.energy},
           {"residual", gs.residual},
           {"dim", gs.dim},
           {"converged", gs.converged},
           {"convergence_fidelity", gs.convergence_fidelity},
           {"squeezing",
            {{"var_x", sq.var_x},
             {"var_y", sq.var_y},
             {"uncertainty_product", sq.uncertainty_product},
             {"squeezing_db", sq.squeezing_db},
             {"mean_b", complex_json(sq.mean_b)}}},
           {"q_function",
            {{"file", csv_file.filename().string()},
             {"re_axis", axis_json(grid.re)},
             {"im_axis", axis_json(grid.im)},
             {"normalization", q.normalization()},
             {"peak", {grid.re.at(pr), grid.im.at(pi)}},
             {"peak_value", q.value(pr, pi)}}}};
  const fs::path json_file = output_file(dir, c, "groundstate.json");
  write_json(json_file, out);

  CommandResult res{kExitOk, {json_file, csv_file}, ""};
  char msg[200];
  std::snprintf(msg, sizeof msg, "groundstate: var_x %.6g var_y %.6g dim %d converged %s", sq.var_x,
                sq.var_y, gs.dim, gs.converged ? "true" : "false");
  res.message = msg;
  if (!gs.converged && c.analysis.require_convergence) {
    res.exit_code = kExitNotConverged;
    res.message += " (convergence required by config)";
  }
  return res;
}

// -- evolve ---------------------------------------------------------------------------

Operator observable(const CompositeSpace& space, const std::string& name) {
  const auto colon = name.find(':');
  const std::string kind = name.substr(0, colon);
  const std::string mode = name.substr(colon + 1);
  if (!space.has_mode(mode)) {
    std::string valid;
    for (const auto& l : space.labels()) valid += (valid.empty() ? "" : ", ") + l;
    throw ConfigError("config.analysis.evolve.observables: unknown mode '" + mode +
                      "' (valid: " + valid + ")");
  }
  if (kind == "n") return number_operator(space, mode);
  if (kind == "a") return mode_annihilation(space, mode);
  if (kind == "x") return quadrature_x(space, mode);
  return quadrature_y(space, mode);
}

Generator parametric_generator(const ParametricModel& m, const CompositeSpace& space) {
  return Generator(parametric_oscillator(m, space));
}

StateVector initial_state(const InitialState& init, const CompositeSpace& space) {
  const std::size_t n = space.num_modes();
  if (init.type == "fock") {
    std::vector<int> occ = init.occupations;
    if (occ.empty()) occ.assign(n, 0);
    if (occ.size() != n)
      throw ConfigError("config.analysis.evolve.initial.occupations: expected " + std::to_string(n) +
                        " entries for " + space.describe());
    for (std::size_t k = 0; k < n; ++k)
      if (occ[k] < 0 || occ[k] >= space.dims()[k])
        throw ConfigError("config.analysis.evolve.initial.occupations[" + std::to_string(k) +
                          "]: outside the truncation");
    return fock_state(space, occ);
  }
  if (init.amplitudes.size() != n)
    throw ConfigError("config.analysis.evolve.initial.amplitudes: expected " + std::to_string(n) +
                      " entries for " + space.describe());
  std::vector<Vector> factors;
  std::vector<TruncationWarning> warnings;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::abs(init.amplitudes[k]);
    if (space.dims()[k] < recommended_dim(a))
      warnings.push_back({space.labels()[k], space.dims()[k], recommended_dim(a)});
    factors.push_back(coherent_amplitudes(space.dims()[k], init.amplitudes[k]));
  }
  StateVector psi = product_state(space, factors);
  for (auto& w : warnings) psi.add_warning(std::move(w));
  return psi;
}

void write_evolution_csv(const fs::path& file, const ScenarioConfig& c,
                         const std::vector<std::string>& names, const Trajectory& traj,
                         const std::string& trailer) {
  std::string csv = csv_comment(c, "evolve") + "t,observable_name,value_re,value_im\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k)
    for (const auto& name : names) {
      const cplx v = traj.observables.at(name)[k];
      csv += csv_number(traj.times[k]) + "," + name + "," + csv_number(v.real()) + "," +
             csv_number(v.imag()) + "\n";
    }
  csv += trailer;
  write_file(file, csv);
}

CommandResult evolve(const ScenarioConfig& c, const fs::path& dir) {
  const Scenario s = resolve(c);
  const EvolveBlock& e = c.analysis.evolve;
  const DeviceParams& dev = s.device;

  std::optional<CompositeSpace> space;
  std::optional<Generator> gen;
  if (e.model == "parametric") {
    if (!s.parametric) throw ConfigError("config.analysis.parametric: required by the parametric model");
    space = CompositeSpace::single(s.dims.back(), kMechMode);
    gen = parametric_generator(*s.parametric, *space);
  } else {
    space = scenario_space(s);
    if (e.model == "lab")
      gen = multimode_om_generator(*space, dev, s.drive);
    else if (e.model == "drive_frame")
      gen = drive_frame_generator(*space, dev, s.drive);
    else if (e.model == "effective")
      gen = effective_generator(*space, dev, s.drive, c.simulation.p_max);
    else if (e.model == "sideband")
      gen = sideband_generator(*space, dev, s.drive.channels.at(0).strength, e.order, e.sign);
    else
      gen = bichromatic_generator(*space, dev, s.drive);
  }

  std::vector<std::string> names = e.observables;
  if (names.empty())
    for (const auto& l : space->labels()) names.push_back("n:" + l);

  EvolutionSpec spec{*gen, s.horizon, s.dt, c.simulation.samples};
  spec.store_states = false;
  for (const auto& n : names) spec.observables.emplace_back(n, observable(*space, n));
  const bool open = e.dissipation && dev.loss_rate > 0.0 && e.model != "parametric";
  if (open)
    for (std::size_t j = 0; j < dev.num_optical(); ++j)
      spec.collapse.push_back({mode_annihilation(*space, optical_mode(j)), dev.loss_rate});

  const StateVector psi0 = initial_state(e.initial, *space);
  const fs::path csv_file = output_file(dir, c, "evolve.csv");
  const fs::path json_file = output_file(dir, c, "evolve.json");

  json out{{"meta", metadata(c, "evolve")},
           {"config", to_json(c)},
           {"space", space->describe()},
           {"model", e.model},
           {"open_system", open},
           {"observables", names},
           {"warnings", warnings_json(psi0.warnings())}};
  if (dev.loss_rate > 0.0 && e.model != "parametric") {
    json ss = json::array();
    for (std::size_t j = 0; j < dev.num_optical(); ++j) {
      const auto& ch = s.drive.channels[j];
      const cplx beta = cavity_steady_state(ch.detuning, dev.loss_rate, ch.strength(s.horizon));
      ss.push_back({{"mode", optical_mode(j)},
                    {"beta", complex_json(beta)},
                    {"photon_number", std::norm(beta)}});
    }
    out["steady_state"] = ss;
  }

  Trajectory traj;
  bool diverged = false;
  std::string divergence_message;
  try {
    traj = open ? propagate_lindblad(spec, DensityMatrix::from_pure(psi0))
                : propagate_schrodinger(spec, psi0);
  } catch (const DivergenceError& err) {
    traj = err.partial();
    diverged = true;
    divergence_message = err.what();
    out["last_good_time"] = err.last_good_time();
  }

  std::string trailer;
  if (diverged) trailer = "# truncated: " + divergence_message + "\n";
  // A zero horizon has no time series, only the header.
  write_evolution_csv(csv_file, c, names, s.horizon > 0.0 ? traj : Trajectory{}, trailer);

  json decay = json::object();
  for (const auto& n : names) {
    if (n.rfind("n:", 0) != 0 || traj.times.size() < 3) continue;
    const auto& vals = traj.observables.at(n);
    bool positive = true;
    for (const auto& v : vals) positive = positive && v.real() > 0.0;
    if (!positive) continue;
    double st = 0, sy = 0, stt = 0, sty = 0;
    const double m = static_cast<double>(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const double tk = traj.times[k];
      const double y = std::log(vals[k].real());
      st += tk;
      sy += y;
      stt += tk * tk;
      sty += tk * y;
    }
    const double denom = m * stt - st * st;
    if (denom > 0.0) decay[n] = -(m * sty - st * sy) / denom;
  }

  out["diagnostics"] = {{"samples", traj.times.size()},
                        {"dt", traj.dt},
                        {"steps", traj.steps},
                        {"max_norm_drift", traj.max_norm_drift}};
  if (open) {
    out["diagnostics"]["max_hermiticity_error"] = traj.max_hermiticity_error;
    out["diagnostics"]["min_eigenvalue"] =
        traj.times.empty() ? json(nullptr) : json(traj.min_eigenvalue);
  }
  out["decay_rates"] = decay;
  out["truncated"] = diverged;
  out["csv"] = csv_file.filename().string();
  write_json(json_file, out);

  if (diverged) return {kExitDivergence, {csv_file, json_file}, divergence_message};
  return {kExitOk, {csv_file, json_file},
          "evolve: " + std::to_string(traj.times.size()) + " samples, " + std::to_string(traj.steps) +
              " steps"};
}

// -- validate ---------------------------------------------------------------------------

CommandResult validate(const ScenarioConfig& c, const fs::path& dir) {
  const Scenario s = resolve(c);
  const ValidateBlock& v = c.analysis.validate;
  json out{{"meta", metadata(c, "validate")}, {"config", to_json(c)}, {"kind", v.kind}};
  double min_f = 0.0;
  double mean_f = 0.0;
  if (v.kind == "sideband") {
    if (s.device.num_optical() != 1)
      throw ConfigError("config.device: sideband validation needs exactly one optical mode");
    SidebandValidation sv{s.device, s.drive, v.order, v.sign, s.horizon, s.dims[0], s.dims[1],
                          v.initial, c.simulation.samples, s.dt};
    const SidebandValidationReport r = validate_effective(sv);
    min_f = r.min_fidelity;
    mean_f = r.mean_fidelity;
    out["max_photon_deviation"] = r.max_photon_deviation;
    out["max_phonon_deviation"] = r.max_phonon_deviation;
    out["times"] = r.times;
    out["fidelity"] = r.fidelity;
    out["phonons_full"] = r.phonons_full;
    out["phonons_effective"] = r.phonons_effective;
  } else {
    if (s.device.num_optical() != 2)
      throw ConfigError("config.device: mean_field validation needs exactly two optical modes");
    if (s.dims[0] != s.dims[1])
      throw ConfigError("config.simulation.dims: mean_field validation needs equal optical dims");
    if (v.beta.size() != 2) throw ConfigError("config.analysis.validate.beta: expected two amplitudes");
    MeanFieldValidation mv{s.device, s.drive, v.beta[0], v.beta[1], s.horizon, s.dims[0], s.dims[2],
                           v.coupling_convention == "substitution"
                               ? CouplingConvention::substitution
                               : CouplingConvention::first_power_alpha,
                           c.simulation.samples, s.dt};
    const MeanFieldValidationReport r = validate_mean_field(mv);
    min_f = r.min_fidelity;
    mean_f = r.mean_fidelity;
    out["g1"] = r.g1;
    out["g2"] = r.g2;
    out["times"] = r.times;
    out["fidelity"] = r.fidelity;
  }
  const bool pass = min_f >= v.threshold;
  out["min_fidelity"] = min_f;
  out["mean_fidelity"] = mean_f;
  out["threshold"] = v.threshold;
  out["pass"] = pass;
  const fs::path file = output_file(dir, c, "validate.json");
  write_json(file, out);
  char msg[200];
  std::snprintf(msg, sizeof msg, "validate %s: min fidelity %.6f (threshold %.4g) %s", v.kind.c_str(),
                min_f, v.threshold, pass ? "PASS" : "FAIL");
  return {kExitOk, {file}, msg};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

CommandResult run_spectrum(const ScenarioConfig& c, const fs::path& d) {
  return guarded([&] { return spectrum(c, d); });
}
CommandResult run_groundstate(const ScenarioConfig& c, const fs::path& d) {
  return guarded([&] { return groundstate(c, d); });
}
CommandResult run_evolve(const ScenarioConfig& c, const fs::path& d) {
  return guarded([&] { return evolve(c, d); });
}
CommandResult run_validate(const ScenarioConfig& c, const fs::path& d) {
  return guarded([&] { return validate(c, d); });
}

CommandResult run_command(const std::string& command, const ScenarioConfig& c, const fs::path& d) {
  if (command == "spectrum") return run_spectrum(c, d);
  if (command == "groundstate") return run_groundstate(c, d);
  if (command == "evolve") return run_evolve(c, d);
  if (command == "validate") return run_validate(c, d);
  return {kExitConfig, {}, "unknown command '" + command + "'"};
}

ScenarioConfig load_config(const std::string& preset_name, const std::string& config_path) {
  if (preset_name.empty() && config_path.empty())
    throw ConfigError("either --config or --preset is required");
  if (preset_name.empty()) return parse_config_text(read_text(config_path));
  json base = to_json(preset(preset_name));
  if (!config_path.empty()) base.merge_patch(parse_json_text(read_text(config_path)));
  return parse_config(base);
}

}  // namespace omx::cli
