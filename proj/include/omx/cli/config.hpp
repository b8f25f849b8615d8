#pragma once

// Scenario configuration: JSON schema, unit handling and canonical form.
//
// Frequencies carry a unit tag. Laboratory units (Hz ... THz) are ordinary
// frequencies; they are multiplied by 2 pi on ingestion and divided by the
// angular mechanical frequency, so the internal unit is always omega_m = 1.
// "unit_omega_m" values are taken as already nondimensional. Times use
// "inv_omega_m" or s/ms/us/ns/ps.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "omx/dynamics.hpp"
#include "omx/errors.hpp"
#include "omx/hamiltonians.hpp"

namespace omx::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Quantity {
  std::string unit = "unit_omega_m";
  double value = 0.0;

  bool operator==(const Quantity&) const = default;
};

struct QuantityList {
  std::string unit = "unit_omega_m";
  std::vector<double> values;

  bool operator==(const QuantityList&) const = default;
};

struct Schedule {
  std::string unit = "unit_omega_m";
  std::string time_unit = "inv_omega_m";
  std::vector<std::pair<double, double>> knots{{0.0, 0.0}};

  bool operator==(const Schedule&) const = default;
};

struct DeviceBlock {
  QuantityList optical_frequencies{"THz", {204.0, 195.0, 188.0}};
  QuantityList mechanical_frequencies{"GHz", {2.23, 1.55, 0.885}};
  int mechanical_mode = 0;
  // alpha ~ 1e-3 against the 2.23 GHz mode.
  QuantityList couplings{"MHz", {2.23, 2.23, 2.23}};
  Quantity loss_rate{"GHz", 1.34};

  bool operator==(const DeviceBlock&) const = default;
};

struct DriveMode {
  Quantity detuning;
  Schedule strength;

  bool operator==(const DriveMode&) const = default;
};

struct DriveBlock {
  // Empty means undriven, zero detuning, for every optical mode.
  std::vector<DriveMode> modes;
  Schedule offset;

  bool operator==(const DriveBlock&) const = default;
};

struct SimulationBlock {
  // Optical dims in mode order, then the mechanical dim. Empty selects 4 per
  // optical mode and 16 for the mechanics.
  std::vector<int> dims;
  Quantity horizon{"inv_omega_m", 0.0};
  Quantity dt{"inv_omega_m", 0.0};  // 0 selects the default step
  int samples = 100;
  std::uint64_t seed = 0;
  int p_max = kDefaultSidebandOrder;

  bool operator==(const SimulationBlock&) const = default;
};

struct ParametricBlock {
  Quantity epsilon;
  Quantity g1;
  Quantity g2;

  bool operator==(const ParametricBlock&) const = default;
};

struct GridBlock {
  int points = 201;
  double span_sigma = 5.0;

  bool operator==(const GridBlock&) const = default;
};

struct GroundStateBlock {
  int start_dim = 32;
  int max_dim = 256;

  bool operator==(const GroundStateBlock&) const = default;
};

struct ValidateBlock {
  std::string kind = "sideband";  // or "mean_field"
  int order = 1;
  int sign = 1;
  double threshold = 0.98;
  std::vector<int> initial{1, 0};
  std::vector<double> beta{3.0, 3.0};
  std::string coupling_convention = "substitution";  // or "first_power_alpha"

  bool operator==(const ValidateBlock&) const = default;
};

struct InitialState {
  std::string type = "fock";     // or "coherent"
  std::vector<int> occupations;  // fock: one per mode, default vacuum
  std::vector<std::complex<double>> amplitudes;  // coherent: one per mode

  bool operator==(const InitialState&) const = default;
};

struct EvolveBlock {
  // lab | drive_frame | effective | sideband | bichromatic | parametric
  std::string model = "drive_frame";
  InitialState initial;
  // "n:<mode>", "a:<mode>", "x:<mode>", "y:<mode>"
  std::vector<std::string> observables;
  int order = 1;  // sideband model
  int sign = 1;
  bool dissipation = true;  // sqrt(kappa) a_j channels when kappa > 0

  bool operator==(const EvolveBlock&) const = default;
};

struct AnalysisBlock {
  std::optional<ParametricBlock> parametric;
  GridBlock grid;
  GroundStateBlock groundstate;
  ValidateBlock validate;
  EvolveBlock evolve;
  bool require_convergence = false;

  bool operator==(const AnalysisBlock&) const = default;
};

struct OutputBlock {
  std::string directory = ".";
  std::string prefix = "omx";

  bool operator==(const OutputBlock&) const = default;
};

struct ScenarioConfig {
  std::vector<std::string> notes;
  DeviceBlock device;
  DriveBlock drive;
  SimulationBlock simulation;
  AnalysisBlock analysis;
  OutputBlock output;

  bool operator==(const ScenarioConfig&) const = default;
};

// Throws ConfigError naming the offending key path.
ScenarioConfig parse_config(const nlohmann::json& j);
// JSON syntax errors are reported with line and column.
nlohmann::json parse_json_text(const std::string& text);
ScenarioConfig parse_config_text(const std::string& text);

// Canonical form with every default filled in; parse(to_json(c)) == c.
nlohmann::json to_json(const ScenarioConfig& c);

// FNV-1a 64 of the canonical form without the output block, as 16 hex digits.
std::string config_hash(const ScenarioConfig& c);

// Conversion of tagged quantities into the omega_m = 1 unit system.
class UnitSystem {
 public:
  // omega_m_hz = 0 for a nondimensional device.
  explicit UnitSystem(double omega_m_hz) : omega_m_hz_(omega_m_hz) {}
  static UnitSystem from(const DeviceBlock& device);

  bool dimensional() const { return omega_m_hz_ > 0.0; }
  double omega_m_hz() const { return omega_m_hz_; }

  double frequency(double value, const std::string& unit, const std::string& key) const;
  double frequency(const Quantity& q, const std::string& key) const {
    return frequency(q.value, q.unit, key);
  }
  double time(double value, const std::string& unit, const std::string& key) const;
  double time(const Quantity& q, const std::string& key) const { return time(q.value, q.unit, key); }

 private:
  double omega_m_hz_;
};

// Fully resolved, nondimensional scenario.
struct Scenario {
  ScenarioConfig config;
  UnitSystem units{0.0};
  DeviceParams device;
  DriveSchedule drive;
  std::vector<int> dims;  // optical..., mech
  double horizon = 0.0;
  double dt = 0.0;
  std::optional<ParametricModel> parametric;
};

Scenario resolve(const ScenarioConfig& c);

}  // namespace omx::cli
