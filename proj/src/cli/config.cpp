#include "omx/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>

namespace omx::cli {

using nlohmann::json;

namespace {

const std::map<std::string, double>& frequency_units() {
  static const std::map<std::string, double> units{
      {"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}, {"THz", 1e12}};
  return units;
}

const std::map<std::string, double>& time_units() {
  static const std::map<std::string, double> units{
      {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}};
  return units;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

std::string type_name(const json& j) { return j.type_name(); }

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object, got " + type_name(j_));
  }

  const std::string& path() const { return path_; }
  std::string child(const std::string& key) const { return path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) fail(child(key), "required key is missing");
    return *v;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) {
        std::string valid;
        for (const auto& s : seen_) valid += (valid.empty() ? "" : ", ") + s;
        fail(child(key), "unknown key (valid keys: " + valid + ")");
      }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number, got " + type_name(j));
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "value must be finite");
  return v;
}

int read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer, got " + type_name(j));
  return j.get<int>();
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string, got " + type_name(j));
  return j.get<std::string>();
}

bool read_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false, got " + type_name(j));
  return j.get<bool>();
}

const json& read_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array, got " + type_name(j));
  return j;
}

template <typename T, typename F>
void optional_field(ObjectReader& r, const std::string& key, T& out, F&& reader) {
  if (const json* v = r.find(key)) out = reader(*v, r.child(key));
}

void check_frequency_unit(const std::string& unit, const std::string& path) {
  if (unit != "unit_omega_m" && !frequency_units().count(unit))
    fail(path, "unknown frequency unit '" + unit + "' (use Hz, kHz, MHz, GHz, THz or unit_omega_m)");
}

void check_time_unit(const std::string& unit, const std::string& path) {
  if (unit != "inv_omega_m" && !time_units().count(unit))
    fail(path, "unknown time unit '" + unit + "' (use inv_omega_m, s, ms, us, ns or ps)");
}

Quantity read_quantity(const json& j, const std::string& path, bool is_time) {
  ObjectReader r(j, path);
  Quantity q;
  q.unit = read_string(r.require("unit"), r.child("unit"));
  q.value = read_number(r.require("value"), r.child("value"));
  r.finish();
  is_time ? check_time_unit(q.unit, r.child("unit")) : check_frequency_unit(q.unit, r.child("unit"));
  return q;
}

Quantity read_frequency(const json& j, const std::string& path) { return read_quantity(j, path, false); }
Quantity read_time(const json& j, const std::string& path) { return read_quantity(j, path, true); }

QuantityList read_quantity_list(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  QuantityList q;
  q.unit = read_string(r.require("unit"), r.child("unit"));
  check_frequency_unit(q.unit, r.child("unit"));
  const json& vals = read_array(r.require("values"), r.child("values"));
  for (std::size_t i = 0; i < vals.size(); ++i)
    q.values.push_back(read_number(vals[i], r.child("values") + "[" + std::to_string(i) + "]"));
  r.finish();
  return q;
}

Schedule read_schedule(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  Schedule s;
  s.unit = read_string(r.require("unit"), r.child("unit"));
  check_frequency_unit(s.unit, r.child("unit"));
  optional_field(r, "time_unit", s.time_unit, read_string);
  check_time_unit(s.time_unit, r.child("time_unit"));
  const json& knots = read_array(r.require("knots"), r.child("knots"));
  if (knots.empty()) fail(r.child("knots"), "at least one knot is required");
  s.knots.clear();
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const std::string kp = r.child("knots") + "[" + std::to_string(i) + "]";
    if (!knots[i].is_array() || knots[i].size() != 2) fail(kp, "expected [time, value]");
    s.knots.emplace_back(read_number(knots[i][0], kp + "[0]"), read_number(knots[i][1], kp + "[1]"));
    if (i > 0 && !(s.knots[i].first > s.knots[i - 1].first))
      fail(kp, "knot times must be strictly increasing");
  }
  r.finish();
  return s;
}

DeviceBlock read_device(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  DeviceBlock d;
  optional_field(r, "optical_frequencies", d.optical_frequencies, read_quantity_list);
  optional_field(r, "mechanical_frequencies", d.mechanical_frequencies, read_quantity_list);
  optional_field(r, "mechanical_mode", d.mechanical_mode, read_int);
  optional_field(r, "couplings", d.couplings, read_quantity_list);
  optional_field(r, "loss_rate", d.loss_rate, read_frequency);
  r.finish();
  return d;
}

DriveBlock read_drive(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  DriveBlock d;
  if (const json* modes = r.find("modes")) {
    read_array(*modes, r.child("modes"));
    for (std::size_t i = 0; i < modes->size(); ++i) {
      ObjectReader m((*modes)[i], r.child("modes") + "[" + std::to_string(i) + "]");
      DriveMode dm;
      optional_field(m, "detuning", dm.detuning, read_frequency);
      optional_field(m, "strength", dm.strength, read_schedule);
      m.finish();
      d.modes.push_back(std::move(dm));
    }
  }
  optional_field(r, "offset", d.offset, read_schedule);
  r.finish();
  return d;
}

std::vector<int> read_int_list(const json& j, const std::string& path) {
  read_array(j, path);
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(read_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

SimulationBlock read_simulation(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  SimulationBlock s;
  optional_field(r, "dims", s.dims, read_int_list);
  for (std::size_t i = 0; i < s.dims.size(); ++i)
    if (s.dims[i] < 2) fail(r.child("dims") + "[" + std::to_string(i) + "]", "dimension must be >= 2");
  optional_field(r, "horizon", s.horizon, read_time);
  if (s.horizon.value < 0.0) fail(r.child("horizon"), "must be >= 0");
  optional_field(r, "dt", s.dt, read_time);
  if (s.dt.value < 0.0) fail(r.child("dt"), "must be >= 0");
  optional_field(r, "samples", s.samples, read_int);
  if (s.samples < 1) fail(r.child("samples"), "must be >= 1");
  if (const json* v = r.find("seed")) {
    if (!v->is_number_unsigned()) fail(r.child("seed"), "expected a non-negative integer");
    s.seed = v->get<std::uint64_t>();
  }
  optional_field(r, "p_max", s.p_max, read_int);
  if (s.p_max < 0) fail(r.child("p_max"), "must be >= 0");
  r.finish();
  return s;
}

ParametricBlock read_parametric(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ParametricBlock p;
  p.epsilon = read_frequency(r.require("epsilon"), r.child("epsilon"));
  p.g1 = read_frequency(r.require("g1"), r.child("g1"));
  p.g2 = read_frequency(r.require("g2"), r.child("g2"));
  r.finish();
  return p;
}

GridBlock read_grid(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  GridBlock g;
  optional_field(r, "points", g.points, read_int);
  optional_field(r, "span_sigma", g.span_sigma, read_number);
  r.finish();
  if (g.points < 8) fail(r.child("points"), "grid too coarse, need at least 8 points per axis");
  if (!(g.span_sigma > 0.0)) fail(r.child("span_sigma"), "must be > 0");
  return g;
}

GroundStateBlock read_groundstate(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  GroundStateBlock g;
  optional_field(r, "start_dim", g.start_dim, read_int);
  optional_field(r, "max_dim", g.max_dim, read_int);
  r.finish();
  if (g.start_dim < 2) fail(r.child("start_dim"), "must be >= 2");
  if (g.max_dim < 2 * g.start_dim) fail(r.child("max_dim"), "must be >= 2 * start_dim");
  return g;
}

int read_sign(const json& j, const std::string& path) {
  const int s = read_int(j, path);
  if (s != 1 && s != -1) fail(path, "sign must be +1 or -1");
  return s;
}

ValidateBlock read_validate(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  ValidateBlock v;
  optional_field(r, "kind", v.kind, read_string);
  if (v.kind != "sideband" && v.kind != "mean_field")
    fail(r.child("kind"), "must be 'sideband' or 'mean_field'");
  optional_field(r, "order", v.order, read_int);
  optional_field(r, "sign", v.sign, read_sign);
  optional_field(r, "threshold", v.threshold, read_number);
  optional_field(r, "initial", v.initial, read_int_list);
  if (const json* b = r.find("beta")) {
    read_array(*b, r.child("beta"));
    v.beta.clear();
    for (std::size_t i = 0; i < b->size(); ++i)
      v.beta.push_back(read_number((*b)[i], r.child("beta") + "[" + std::to_string(i) + "]"));
  }
  optional_field(r, "coupling_convention", v.coupling_convention, read_string);
  if (v.coupling_convention != "substitution" && v.coupling_convention != "first_power_alpha")
    fail(r.child("coupling_convention"), "must be 'substitution' or 'first_power_alpha'");
  r.finish();
  return v;
}

InitialState read_initial(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  InitialState s;
  optional_field(r, "type", s.type, read_string);
  if (s.type != "fock" && s.type != "coherent") fail(r.child("type"), "must be 'fock' or 'coherent'");
  optional_field(r, "occupations", s.occupations, read_int_list);
  if (const json* a = r.find("amplitudes")) {
    read_array(*a, r.child("amplitudes"));
    for (std::size_t i = 0; i < a->size(); ++i) {
      const std::string ap = r.child("amplitudes") + "[" + std::to_string(i) + "]";
      if (!(*a)[i].is_array() || (*a)[i].size() != 2) fail(ap, "expected [re, im]");
      s.amplitudes.emplace_back(read_number((*a)[i][0], ap + "[0]"), read_number((*a)[i][1], ap + "[1]"));
    }
  }
  r.finish();
  return s;
}

const std::set<std::string>& evolve_models() {
  static const std::set<std::string> models{"lab",      "drive_frame", "effective",
                                            "sideband", "bichromatic", "parametric"};
  return models;
}

EvolveBlock read_evolve(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  EvolveBlock e;
  optional_field(r, "model", e.model, read_string);
  if (!evolve_models().count(e.model))
    fail(r.child("model"),
         "unknown model '" + e.model + "' (lab, drive_frame, effective, sideband, bichromatic, parametric)");
  optional_field(r, "initial", e.initial, read_initial);
  if (const json* o = r.find("observables")) {
    read_array(*o, r.child("observables"));
    for (std::size_t i = 0; i < o->size(); ++i) {
      const std::string op = r.child("observables") + "[" + std::to_string(i) + "]";
      const std::string name = read_string((*o)[i], op);
      const auto colon = name.find(':');
      const std::string kind = name.substr(0, colon);
      if (colon == std::string::npos || colon + 1 == name.size() ||
          (kind != "n" && kind != "a" && kind != "x" && kind != "y"))
        fail(op, "expected '<n|a|x|y>:<mode label>', got '" + name + "'");
      e.observables.push_back(name);
    }
  }
  optional_field(r, "order", e.order, read_int);
  optional_field(r, "sign", e.sign, read_sign);
  optional_field(r, "dissipation", e.dissipation, read_bool);
  r.finish();
  return e;
}

AnalysisBlock read_analysis(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  AnalysisBlock a;
  if (const json* p = r.find("parametric")) a.parametric = read_parametric(*p, r.child("parametric"));
  optional_field(r, "grid", a.grid, read_grid);
  optional_field(r, "groundstate", a.groundstate, read_groundstate);
  optional_field(r, "validate", a.validate, read_validate);
  optional_field(r, "evolve", a.evolve, read_evolve);
  optional_field(r, "require_convergence", a.require_convergence, read_bool);
  r.finish();
  return a;
}

OutputBlock read_output(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  OutputBlock o;
  optional_field(r, "directory", o.directory, read_string);
  optional_field(r, "prefix", o.prefix, read_string);
  r.finish();
  if (o.prefix.empty()) fail(r.child("prefix"), "must not be empty");
  return o;
}

json quantity_json(const Quantity& q) { return {{"unit", q.unit}, {"value", q.value}}; }
json list_json(const QuantityList& q) { return {{"unit", q.unit}, {"values", q.values}}; }
json schedule_json(const Schedule& s) {
  json knots = json::array();
  for (const auto& [t, v] : s.knots) knots.push_back({t, v});
  return {{"unit", s.unit}, {"time_unit", s.time_unit}, {"knots", knots}};
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  ObjectReader r(j, "config");
  ScenarioConfig c;
  if (const json* n = r.find("notes")) {
    read_array(*n, r.child("notes"));
    for (std::size_t i = 0; i < n->size(); ++i)
      c.notes.push_back(read_string((*n)[i], r.child("notes") + "[" + std::to_string(i) + "]"));
  }
  optional_field(r, "device", c.device, read_device);
  optional_field(r, "drive", c.drive, read_drive);
  optional_field(r, "simulation", c.simulation, read_simulation);
  optional_field(r, "analysis", c.analysis, read_analysis);
  optional_field(r, "output", c.output, read_output);
  r.finish();
  return c;
}

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("config: JSON syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
}

ScenarioConfig parse_config_text(const std::string& text) { return parse_config(parse_json_text(text)); }

json to_json(const ScenarioConfig& c) {
  json device{{"optical_frequencies", list_json(c.device.optical_frequencies)},
              {"mechanical_frequencies", list_json(c.device.mechanical_frequencies)},
              {"mechanical_mode", c.device.mechanical_mode},
              {"couplings", list_json(c.device.couplings)},
              {"loss_rate", quantity_json(c.device.loss_rate)}};
  json modes = json::array();
  for (const auto& m : c.drive.modes)
    modes.push_back({{"detuning", quantity_json(m.detuning)}, {"strength", schedule_json(m.strength)}});
  json drive{{"modes", modes}, {"offset", schedule_json(c.drive.offset)}};
  const SimulationBlock& s = c.simulation;
  json simulation{{"dims", s.dims},       {"horizon", quantity_json(s.horizon)},
                  {"dt", quantity_json(s.dt)}, {"samples", s.samples},
                  {"seed", s.seed},       {"p_max", s.p_max}};
  const AnalysisBlock& a = c.analysis;
  json amplitudes = json::array();
  for (const auto& z : a.evolve.initial.amplitudes) amplitudes.push_back({z.real(), z.imag()});
  json analysis{
      {"grid", {{"points", a.grid.points}, {"span_sigma", a.grid.span_sigma}}},
      {"groundstate", {{"start_dim", a.groundstate.start_dim}, {"max_dim", a.groundstate.max_dim}}},
      {"validate",
       {{"kind", a.validate.kind},
        {"order", a.validate.order},
        {"sign", a.validate.sign},
        {"threshold", a.validate.threshold},
        {"initial", a.validate.initial},
        {"beta", a.validate.beta},
        {"coupling_convention", a.validate.coupling_convention}}},
      {"evolve",
       {{"model", a.evolve.model},
        {"initial",
         {{"type", a.evolve.initial.type},
          {"occupations", a.evolve.initial.occupations},
          {"amplitudes", amplitudes}}},
        {"observables", a.evolve.observables},
        {"order", a.evolve.order},
        {"sign", a.evolve.sign},
        {"dissipation", a.evolve.dissipation}}},
      {"require_convergence", a.require_convergence}};
  if (a.parametric)
    analysis["parametric"] = {{"epsilon", quantity_json(a.parametric->epsilon)},
                              {"g1", quantity_json(a.parametric->g1)},
                              {"g2", quantity_json(a.parametric->g2)}};
  return {{"notes", c.notes},
          {"device", device},
          {"drive", drive},
          {"simulation", simulation},
          {"analysis", analysis},
          {"output", {{"directory", c.output.directory}, {"prefix", c.output.prefix}}}};
}

std::string config_hash(const ScenarioConfig& c) {
  json j = to_json(c);
  j.erase("output");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

UnitSystem UnitSystem::from(const DeviceBlock& device) {
  const auto& mech = device.mechanical_frequencies;
  if (mech.values.empty()) fail("config.device.mechanical_frequencies", "at least one frequency is required");
  if (device.mechanical_mode < 0 || device.mechanical_mode >= static_cast<int>(mech.values.size()))
    fail("config.device.mechanical_mode",
         "index " + std::to_string(device.mechanical_mode) + " out of range for " +
             std::to_string(mech.values.size()) + " mechanical frequencies");
  const double f = mech.values[device.mechanical_mode];
  if (!(f > 0.0)) fail("config.device.mechanical_frequencies", "selected frequency must be > 0");
  if (mech.unit == "unit_omega_m") {
    if (f != 1.0)
      fail("config.device.mechanical_frequencies",
           "in unit_omega_m the selected mechanical frequency is 1 by definition");
    return UnitSystem(0.0);
  }
  return UnitSystem(f * frequency_units().at(mech.unit));
}

double UnitSystem::frequency(double value, const std::string& unit, const std::string& key) const {
  if (unit == "unit_omega_m") return value;
  const auto it = frequency_units().find(unit);
  if (it == frequency_units().end()) fail(key, "unknown frequency unit '" + unit + "'");
  if (!dimensional())
    fail(key, "laboratory unit '" + unit + "' needs a mechanical frequency in laboratory units");
  // Both sides carry the same factor 2 pi, which cancels.
  return value * it->second / omega_m_hz_;
}

double UnitSystem::time(double value, const std::string& unit, const std::string& key) const {
  if (unit == "inv_omega_m") return value;
  const auto it = time_units().find(unit);
  if (it == time_units().end()) fail(key, "unknown time unit '" + unit + "'");
  if (!dimensional())
    fail(key, "time unit '" + unit + "' needs a mechanical frequency in laboratory units");
  return value * it->second * 2.0 * std::numbers::pi * omega_m_hz_;
}

Scenario resolve(const ScenarioConfig& c) {
  Scenario s;
  s.config = c;
  s.units = UnitSystem::from(c.device);
  const UnitSystem& u = s.units;

  const auto& opt = c.device.optical_frequencies;
  const auto& cpl = c.device.couplings;
  if (opt.values.empty()) fail("config.device.optical_frequencies", "at least one optical mode is required");
  if (cpl.values.size() != opt.values.size())
    fail("config.device.couplings", "expected " + std::to_string(opt.values.size()) +
                                        " couplings, one per optical mode, got " +
                                        std::to_string(cpl.values.size()));
  for (double w : opt.values)
    s.device.optical_frequencies.push_back(u.frequency(w, opt.unit, "config.device.optical_frequencies"));
  for (double g : cpl.values) s.device.couplings.push_back(u.frequency(g, cpl.unit, "config.device.couplings"));
  s.device.mechanical_frequency = 1.0;
  s.device.loss_rate = u.frequency(c.device.loss_rate, "config.device.loss_rate");
  if (s.device.loss_rate < 0.0) fail("config.device.loss_rate", "must be >= 0");

  const std::size_t n = opt.values.size();
  s.dims = c.simulation.dims;
  if (s.dims.empty()) {
    s.dims.assign(n, 4);
    s.dims.push_back(16);
  }
  if (s.dims.size() != n + 1)
    fail("config.simulation.dims", "expected " + std::to_string(n + 1) +
                                       " dimensions (optical modes, then mechanics), got " +
                                       std::to_string(s.dims.size()));

  auto ramp = [&](const Schedule& sch, const std::string& key) {
    std::vector<Ramp::Knot> knots;
    for (const auto& [t, v] : sch.knots)
      knots.emplace_back(u.time(t, sch.time_unit, key), u.frequency(v, sch.unit, key));
    return make_ramp(std::move(knots));
  };
  if (c.drive.modes.empty()) {
    s.drive.channels.assign(n, DriveChannel{});
  } else {
    if (c.drive.modes.size() != n)
      fail("config.drive.modes", "expected " + std::to_string(n) + " entries, one per optical mode, got " +
                                     std::to_string(c.drive.modes.size()));
    for (std::size_t j = 0; j < n; ++j) {
      const std::string key = "config.drive.modes[" + std::to_string(j) + "]";
      DriveChannel ch{ramp(c.drive.modes[j].strength, key + ".strength"),
                      u.frequency(c.drive.modes[j].detuning, key + ".detuning")};
      if (ch.strength.min_value() < 0.0) fail(key + ".strength", "drive strengths must be >= 0");
      s.drive.channels.push_back(std::move(ch));
    }
  }
  s.drive.offset = ramp(c.drive.offset, "config.drive.offset");

  s.horizon = u.time(c.simulation.horizon, "config.simulation.horizon");
  s.dt = u.time(c.simulation.dt, "config.simulation.dt");

  if (c.analysis.parametric) {
    const auto& p = *c.analysis.parametric;
    s.parametric = ParametricModel{u.frequency(p.epsilon, "config.analysis.parametric.epsilon"),
                                   u.frequency(p.g1, "config.analysis.parametric.g1"),
                                   u.frequency(p.g2, "config.analysis.parametric.g2")};
  }
  return s;
}

}  // namespace omx::cli
