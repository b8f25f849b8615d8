#include "omx/cli/presets.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

namespace omx::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Quantity w(double v) { return {"unit_omega_m", v}; }
Quantity t(double v) { return {"inv_omega_m", v}; }
Schedule constant(double v) { return {"unit_omega_m", "inv_omega_m", {{0.0, v}}}; }

// Nondimensional device with omega_m = 1 and the given optical modes.
DeviceBlock desk_device(std::vector<double> optical, std::vector<double> couplings, double kappa) {
  DeviceBlock d;
  d.optical_frequencies = {"unit_omega_m", std::move(optical)};
  d.mechanical_frequencies = {"unit_omega_m", {1.0}};
  d.mechanical_mode = 0;
  d.couplings = {"unit_omega_m", std::move(couplings)};
  d.loss_rate = w(kappa);
  return d;
}

ScenarioConfig parametric_preset(const std::string& name, double g2) {
  ScenarioConfig c;
  c.notes = {"Ground state of eps b^dagger b + g1 (b^dagger + b) + g2 (b^dagger^2 + b^2) with "
             "eps = 10 g1, g2 = " + fmt(g2) + " g1.",
             "Energies are in units of g1; the mechanical frequency only fixes the unit system."};
  c.device = desk_device({0.0}, {0.0}, 0.0);
  c.simulation.dims = {2, 32};
  c.analysis.parametric = ParametricBlock{w(10.0), w(1.0), w(g2)};
  c.output.prefix = name;
  return c;
}

ScenarioConfig sideband_preset(const std::string& name, int sign) {
  ScenarioConfig c;
  const double g0 = 0.05;
  const double omega = 0.02;
  c.notes = {"Full model in the drive frame against the resonant sideband model of order 1, sign " +
                 std::to_string(sign) + ".",
             "Assumed desk-scale values: omega_m = 1, g0 = " + fmt(g0) + " (alpha = " + fmt(g0) +
                 "), Omega = " + fmt(omega) + ", detuning = " + fmt(sign) + " omega_m.",
             "The optical frequency drops out in the drive frame; 100 omega_m is recorded for the lab "
             "model only."};
  c.device = desk_device({100.0}, {g0}, 0.0);
  c.drive.modes = {DriveMode{w(sign * 1.0), constant(omega)}};
  c.simulation.dims = {5, 10};
  c.simulation.horizon = t(200.0);
  c.simulation.samples = 200;
  c.analysis.validate.kind = "sideband";
  c.analysis.validate.order = 1;
  c.analysis.validate.sign = sign;
  if (sign > 0) {
    c.analysis.validate.initial = {1, 0};
    c.analysis.validate.threshold = 0.98;
  } else {
    c.analysis.validate.initial = {0, 0};
    c.analysis.validate.threshold = 0.95;
  }
  c.output.prefix = name;
  return c;
}

ScenarioConfig meanfield_preset() {
  const double alpha = 0.05;
  const double beta = 3.0;
  const double eps = 0.1;
  const double g1 = 0.01;
  const double g2 = 0.002;
  const double omega1 = drive_for_coupling(g1, alpha, beta, 1);
  const double omega2 = drive_for_coupling(g2, alpha, beta, 2);
  ScenarioConfig c;
  c.notes = {"Bichromatic scheme from coherent optical states against the parametric oscillator with "
             "mean-field couplings.",
             "Assumed desk-scale values: omega_m = 1, alpha_1 = alpha_2 = " + fmt(alpha) +
                 ", beta_1 = beta_2 = " + fmt(beta) + ", eps = " + fmt(eps) + ".",
             "Drives tuned with the substitution coupling formula to g1 = " + fmt(g1) + ", g2 = " +
                 fmt(g2) + ": Omega_1 = " + fmt(omega1) + ", Omega_2 = " + fmt(omega2) + ".",
             "Detunings Delta_j = j (omega_m + eps) are recorded for completeness; the bichromatic model "
             "keeps only the resonant terms."};
  c.device = desk_device({100.0, 100.0}, {alpha, alpha}, 0.0);
  c.drive.modes = {DriveMode{w(1.0 + eps), constant(omega1)},
                   DriveMode{w(2.0 * (1.0 + eps)), constant(omega2)}};
  c.drive.offset = constant(eps);
  c.simulation.dims = {30, 30, 12};
  c.simulation.horizon = t(50.0);
  c.simulation.samples = 50;
  c.analysis.validate.kind = "mean_field";
  c.analysis.validate.threshold = 0.95;
  c.analysis.validate.beta = {beta, beta};
  c.output.prefix = "meanfield";
  return c;
}

ScenarioConfig polaron_preset() {
  ScenarioConfig c;
  c.notes = {"Undriven single-mode model in the frame omega = 0 with omega_m = 1, g0 = 0.1."};
  c.device = desk_device({0.0}, {0.1}, 0.0);
  c.simulation.dims = {4, 64};
  c.output.prefix = "polaron";
  return c;
}

ScenarioConfig free_evolution_preset() {
  ScenarioConfig c;
  c.notes = {"Free mechanical rotation of a coherent state, eps = 1, g1 = g2 = 0."};
  c.device = desk_device({0.0}, {0.0}, 0.0);
  c.simulation.dims = {2, 40};
  c.simulation.horizon = t(20.0);
  c.simulation.samples = 100;
  c.analysis.parametric = ParametricBlock{w(1.0), w(0.0), w(0.0)};
  c.analysis.evolve.model = "parametric";
  c.analysis.evolve.initial = {"coherent", {}, {{0.5, 0.0}}};
  c.analysis.evolve.observables = {"a:mech", "n:mech"};
  c.output.prefix = "free_evolution";
  return c;
}

ScenarioConfig decay_preset() {
  ScenarioConfig c;
  c.notes = {"Undriven lossy cavity from Fock state 4 with kappa = 0.1 omega_m and g0 = 0."};
  c.device = desk_device({0.0}, {0.0}, 0.1);
  c.drive.modes = {DriveMode{w(0.0), constant(0.0)}};
  c.simulation.dims = {6, 2};
  c.simulation.horizon = t(20.0);
  c.simulation.samples = 100;
  c.analysis.evolve.model = "drive_frame";
  c.analysis.evolve.initial = {"fock", {4, 0}, {}};
  c.analysis.evolve.observables = {"n:opt1"};
  c.output.prefix = "decay";
  return c;
}

ScenarioConfig steady_state_preset() {
  ScenarioConfig c;
  c.notes = {"Driven lossy cavity relaxing from vacuum: Delta = 0.5, kappa = 1, Omega = 2, g0 = 0."};
  c.device = desk_device({0.0}, {0.0}, 1.0);
  c.drive.modes = {DriveMode{w(0.5), constant(2.0)}};
  c.simulation.dims = {16, 2};
  c.simulation.horizon = t(30.0);
  c.simulation.samples = 60;
  c.analysis.evolve.model = "drive_frame";
  c.analysis.evolve.observables = {"a:opt1", "n:opt1"};
  c.output.prefix = "steady_state";
  return c;
}

ScenarioConfig anchor_preset() {
  const double kappa_ghz = 1.34;
  const double omega_ghz = kappa_ghz * std::sqrt(120.0);
  ScenarioConfig c;
  c.notes = {"Resonantly driven cavity with the quoted loss rate: kappa = " + fmt(kappa_ghz) +
                 " GHz, Omega = kappa sqrt(120) = " + fmt(omega_ghz) + " GHz, Delta = 0.",
             "Nondimensional with omega_m = 2.23 GHz: kappa = " + fmt(kappa_ghz / 2.23) +
                 ", Omega = " + fmt(omega_ghz / 2.23) + ".",
             "Zero horizon: evolve only reports the predicted steady state, |beta|^2 = 120."};
  c.device.optical_frequencies = {"THz", {204.0}};
  c.device.couplings = {"MHz", {2.23}};
  c.drive.modes = {DriveMode{{"GHz", 0.0}, {"GHz", "inv_omega_m", {{0.0, omega_ghz}}}}};
  c.simulation.dims = {4, 2};
  c.analysis.evolve.model = "drive_frame";
  c.analysis.evolve.observables = {"n:opt1"};
  c.output.prefix = "anchor";
  return c;
}

const std::map<std::string, std::function<ScenarioConfig()>>& registry() {
  static const std::map<std::string, std::function<ScenarioConfig()>> r{
      {"fig2a", [] { return parametric_preset("fig2a", 0.0); }},
      {"fig2b", [] { return parametric_preset("fig2b", 2.5); }},
      {"fig2c", [] { return parametric_preset("fig2c", 4.95); }},
      {"sideband_p1", [] { return sideband_preset("sideband_p1", +1); }},
      {"sideband_m1", [] { return sideband_preset("sideband_m1", -1); }},
      {"meanfield", meanfield_preset},
      {"polaron", polaron_preset},
      {"free_evolution", free_evolution_preset},
      {"decay", decay_preset},
      {"steady_state", steady_state_preset},
      {"anchor", anchor_preset},
  };
  return r;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, f] : registry()) names.push_back(name);
  return names;
}

ScenarioConfig preset(const std::string& name) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return it->second();
}

}  // namespace omx::cli
