#include "optomech/config.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "optomech/format.hpp"

namespace optomech {

using nlohmann::json;

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"unit_system", KeyKind::string, "natural", "natural (hbar = c = 1) or SI"},
      {"mass", KeyKind::number, 1.0, "mirror mass m"},
      {"length", KeyKind::number, 1.0, "equilibrium cavity length l"},
      {"omega_mech", KeyKind::number, 1.0, "mechanical angular frequency Omega"},
      {"omega_opt", KeyKind::number, 10.0, "optical angular frequency omega"},
      {"light_speed", KeyKind::number, nullptr, "speed of light (default 1, or SI value)"},
      {"hbar", KeyKind::number, nullptr, "reduced Planck constant (default 1, or SI value)"},
      {"abar_mag", KeyKind::number, 0.0, "optical drive amplitude |abar|"},
      {"abar_phase", KeyKind::number, 0.0, "optical drive phase phi"},
      {"bbar_mag", KeyKind::number, 0.0, "mechanical amplitude |bbar|"},
      {"bbar_phase", KeyKind::number, 0.0, "mechanical phase vartheta"},
      {"chi0", KeyKind::number, 0.0, "mirror relative susceptibility"},
      {"d_mirror", KeyKind::number, 0.0, "mirror thickness"},
      {"r_convention", KeyKind::string, "exact", "R = r_1/4 (exact) or R = 0.95 (prose)"},
      {"theta_low_omega", KeyKind::boolean, false, "use theta = R Omega^2 x_zp/(omega^2 l) in rates"},
      {"kmax", KeyKind::integer, 4, "number of field modes / coefficient table size"},
      {"jmax", KeyKind::integer, 10000, "truncation of the squared-coefficient series"},
      {"ltrunc", KeyKind::integer, 10000, "truncation of the Gram sums"},
      {"tail_correct", KeyKind::boolean, true, "add the leading 1/L tail estimate"},
      {"field", KeyKind::string, "new", "field equations: new or law"},
      {"mirror", KeyKind::string, "lagrangian", "mirror model: lagrangian, radiation_pressure or prescribed"},
      {"t_end", KeyKind::number, nullptr, "final time (default 10 mechanical periods)"},
      {"q0", KeyKind::number, nullptr, "initial mirror position (default 1.01 l)"},
      {"qdot0", KeyKind::number, 0.0, "initial mirror velocity"},
      {"Q0", KeyKind::number_list, json::array({0.1}), "initial field amplitudes (zero padded to kmax)"},
      {"Qdot0", KeyKind::number_list, json::array({0.05}), "initial field velocities (zero padded to kmax)"},
      {"rel_tol", KeyKind::number, 1e-10, "integrator relative tolerance"},
      {"abs_tol", KeyKind::number, 1e-12, "integrator absolute tolerance"},
      {"q_min", KeyKind::number, 0.0, "stop when q falls to this floor (0: l/100)"},
      {"inner_cutoff", KeyKind::integer, 0, "law-form inner sum cutoff (0: 16 kmax)"},
      {"samples", KeyKind::integer, 201, "uniform output samples"},
      {"drive_amplitude", KeyKind::number, 0.01, "prescribed motion q = l (1 + A sin(w t))"},
      {"drive_omega", KeyKind::number, nullptr, "prescribed motion frequency (default Omega)"},
      {"n_mech", KeyKind::integer, 8, "mechanical Fock cutoff"},
      {"n_opt", KeyKind::integer, 8, "optical Fock cutoff per mode"},
      {"n_modes_opt", KeyKind::integer, 1, "optical modes (2 only for delta_relativistic)"},
      {"cap", KeyKind::integer, 4096, "maximum Hilbert space dimension"},
      {"variant", KeyKind::string_list, json::array({"H012"}), "Hamiltonian variants"},
      {"order", KeyKind::integer, 1, "expansion order in x/l (0, 1, 2)"},
      {"branch", KeyKind::string, "full", "full, omega_large or omega_small"},
      {"field_quadratic", KeyKind::string, "taylor", "quadratic frequency coefficient: taylor (3) or printed (4)"},
      {"relativistic_part", KeyKind::string, "total", "total, first or second"},
      {"special_eta_form", KeyKind::string, "literal", "literal or rederived"},
      {"eta", KeyKind::number, 0.5, "special-case eta"},
      {"spectrum_count", KeyKind::integer, 10, "eigenvalues to report"},
      {"pad", KeyKind::integer, 8, "padding levels for polynomial construction"},
      {"out_dir", KeyKind::string, "", "output directory (empty: stdout)"},
      {"format", KeyKind::string, "", "csv or json (empty: subcommand default)"},
      {"sweep", KeyKind::grid, json::object(), "grid of overrides {key: [values]}"},
      {"sweep_target", KeyKind::string, "rates", "rates, spectrum or evolve"},
      {"threads", KeyKind::integer, 0, "sweep worker threads (0: hardware)"},
  };
  return keys;
}

const ConfigKey* find_key(const std::string& name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte_offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte_offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

namespace {

void check_type(const ConfigKey& key, const json& v, const std::string& origin) {
  auto fail = [&](const char* expected) {
    throw ConfigError(origin + ": key '" + key.name + "' expects " + expected + ", got " + v.dump());
  };
  if (v.is_null() && key.default_value.is_null()) return;
  switch (key.kind) {
    case KeyKind::number:
      if (!v.is_number()) fail("a number");
      break;
    case KeyKind::integer:
      if (!v.is_number_integer()) fail("an integer");
      break;
    case KeyKind::boolean:
      if (!v.is_boolean()) fail("a boolean");
      break;
    case KeyKind::string:
      if (!v.is_string()) fail("a string");
      break;
    case KeyKind::string_list:
      if (!v.is_array()) fail("an array of strings");
      for (const auto& e : v)
        if (!e.is_string()) fail("an array of strings");
      break;
    case KeyKind::number_list:
      if (!v.is_array()) fail("an array of numbers");
      for (const auto& e : v)
        if (!e.is_number()) fail("an array of numbers");
      break;
    case KeyKind::grid:
      if (!v.is_object()) fail("an object of arrays");
      for (const auto& [name, values] : v.items()) {
        const ConfigKey* inner = find_key(name);
        if (!inner || inner->kind == KeyKind::grid || name == "out_dir" || name == "format")
          throw ConfigError(origin + ": key '" + name + "' cannot be swept");
        if (!values.is_array() || values.empty()) fail("an object of nonempty arrays");
        for (const auto& e : values) check_type(*inner, e, origin);
      }
      break;
  }
}

json parse_scalar(const ConfigKey& key, const std::string& text) {
  switch (key.kind) {
    case KeyKind::string:
      return text;
    case KeyKind::boolean:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw ConfigError("--" + key.name + ": expected true or false, got '" + text + "'");
    default: {
      json v = json::parse(text, nullptr, false);
      if (v.is_discarded()) throw ConfigError("--" + key.name + ": cannot parse '" + text + "'");
      return v;
    }
  }
}

}  // namespace

RunConfig::RunConfig() {
  values_ = json::object();
  for (const auto& k : config_keys()) values_[k.name] = k.default_value;
}

void RunConfig::merge_json_text(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
  merge_json(doc, origin);
}

void RunConfig::merge_json(const json& object, const std::string& origin) {
  if (!object.is_object()) throw ConfigError(origin + ": top level must be a JSON object");
  for (const auto& [name, value] : object.items()) {
    const ConfigKey* key = find_key(name);
    if (!key) throw ConfigError(origin + ": unknown key '" + name + "'");
    check_type(*key, value, origin);
    values_[name] = value;
  }
}

void RunConfig::set(const std::string& name, json value) {
  const ConfigKey* key = find_key(name);
  if (!key) throw ConfigError("unknown key '" + name + "'");
  check_type(*key, value, "--" + name);
  values_[name] = std::move(value);
}

void RunConfig::set_from_string(const std::string& name, const std::string& text) {
  const ConfigKey* key = find_key(name);
  if (!key) throw ConfigError("unknown key '" + name + "'");
  switch (key->kind) {
    case KeyKind::string_list:
      set(name, json::array({text}));
      return;
    case KeyKind::number_list: {
      json arr = json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) arr.push_back(parse_scalar(ConfigKey{name, KeyKind::number, 0.0, ""}, item));
      set(name, arr);
      return;
    }
    case KeyKind::grid: {
      // key=v1,v2,...
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw ConfigError("--sweep expects key=v1,v2,...");
      const std::string inner = text.substr(0, eq);
      const ConfigKey* ik = find_key(inner);
      if (!ik) throw ConfigError("--sweep: unknown key '" + inner + "'");
      json arr = json::array();
      std::stringstream ss(text.substr(eq + 1));
      std::string item;
      while (std::getline(ss, item, ',')) arr.push_back(parse_scalar(*ik, item));
      json grid = values_["sweep"];
      grid[inner] = arr;
      set("sweep", grid);
      return;
    }
    default:
      set(name, parse_scalar(*key, text));
  }
}

json RunConfig::resolved() const {
  json r = values_;
  const std::string units = r["unit_system"].get<std::string>();
  if (units != "natural" && units != "SI") throw ConfigError("unit_system must be natural or SI");
  if (r["hbar"].is_null()) r["hbar"] = units == "SI" ? kHbarSI : 1.0;
  if (r["light_speed"].is_null()) r["light_speed"] = units == "SI" ? kLightSpeedSI : 1.0;
  if (r["q0"].is_null()) r["q0"] = 1.01 * r["length"].get<double>();
  if (r["drive_omega"].is_null()) r["drive_omega"] = r["omega_mech"];
  if (r["t_end"].is_null()) r["t_end"] = 10.0 * 2.0 * std::numbers::pi / r["omega_mech"].get<double>();
  return r;
}

std::string RunConfig::canonical() const {
  json r = resolved();
  r.erase("out_dir");
  return r.dump();
}

std::string RunConfig::hash() const { return hex64(fnv1a64(canonical())); }

double RunConfig::number(const std::string& key) const { return resolved().at(key).get<double>(); }
long RunConfig::integer(const std::string& key) const { return values_.at(key).get<long>(); }
bool RunConfig::boolean(const std::string& key) const { return values_.at(key).get<bool>(); }
std::string RunConfig::string(const std::string& key) const { return values_.at(key).get<std::string>(); }
std::vector<std::string> RunConfig::strings(const std::string& key) const {
  return values_.at(key).get<std::vector<std::string>>();
}
std::vector<double> RunConfig::numbers(const std::string& key) const {
  return values_.at(key).get<std::vector<double>>();
}

CavityParams RunConfig::cavity() const {
  const json r = resolved();
  CavityParams p;
  p.mass = r["mass"];
  p.length = r["length"];
  p.omega_mech = r["omega_mech"];
  p.omega_opt = r["omega_opt"];
  p.light_speed = r["light_speed"];
  p.hbar = r["hbar"];
  p.abar_mag = r["abar_mag"];
  p.abar_phase = r["abar_phase"];
  p.bbar_mag = r["bbar_mag"];
  p.bbar_phase = r["bbar_phase"];
  p.chi0 = r["chi0"];
  p.d_mirror = r["d_mirror"];
  return p;
}

RateOptions RunConfig::rate_options() const {
  return RateOptions{parse_r_convention(string("r_convention")), boolean("theta_low_omega")};
}

MirrorParams RunConfig::mirror() const {
  const json r = resolved();
  MirrorParams m;
  m.mass = r["mass"];
  m.length = r["length"];
  m.omega_mech = r["omega_mech"];
  m.light_speed = r["light_speed"];
  m.kmax = static_cast<int>(integer("kmax"));
  return m;
}

ClassicalState RunConfig::initial_state() const {
  const MirrorParams m = mirror();
  ClassicalState s = ClassicalState::at_rest(m, number("q0"));
  s.qdot = number("qdot0");
  auto fill = [&](const char* key, Eigen::VectorXd& v) {
    const auto values = numbers(key);
    if (static_cast<int>(values.size()) > m.kmax)
      throw ConfigError(std::string(key) + " has more entries than kmax");
    for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  };
  fill("Q0", s.Q);
  fill("Qdot0", s.Qdot);
  return s;
}

IntegrateOptions RunConfig::integrate_options() const {
  IntegrateOptions o;
  o.field = parse_field_model(string("field"));
  o.mirror = parse_mirror_model(string("mirror"));
  o.rel_tol = number("rel_tol");
  o.abs_tol = number("abs_tol");
  o.q_min = number("q_min");
  o.inner_cutoff = static_cast<int>(integer("inner_cutoff"));
  o.samples = static_cast<int>(integer("samples"));
  if (o.mirror == MirrorModel::prescribed)
    o.motion = sinusoidal_motion(number("length"), number("drive_amplitude"), number("drive_omega"));
  return o;
}

FockSpace RunConfig::space() const {
  return make_space(static_cast<int>(integer("n_mech")), static_cast<int>(integer("n_opt")),
                    static_cast<int>(integer("n_modes_opt")), integer("cap"));
}

HamiltonianOptions RunConfig::hamiltonian_options() const {
  HamiltonianOptions o;
  o.order = static_cast<int>(integer("order"));
  o.branch = parse_branch(string("branch"));
  o.field_quadratic = parse_field_quadratic(string("field_quadratic"));
  o.relativistic_part = parse_relativistic_part(string("relativistic_part"));
  o.special_eta_form = parse_special_eta_form(string("special_eta_form"));
  o.eta = number("eta");
  o.r_convention = parse_r_convention(string("r_convention"));
  o.pad = static_cast<int>(integer("pad"));
  return o;
}

std::vector<HamiltonianVariant> RunConfig::variants() const {
  std::vector<HamiltonianVariant> out;
  for (const auto& name : strings("variant")) out.push_back(parse_variant(name));
  if (out.empty()) throw ConfigError("at least one variant is required");
  return out;
}

}  // namespace optomech
