#pragma once

#include <stdexcept>
#include <string>
#include <vector>
#include <json.hpp>

#include "optomech/classical_dynamics.hpp"
#include "optomech/fock_space.hpp"
#include "optomech/hamiltonians.hpp"
#include "optomech/rates.hpp"

namespace optomech {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class KeyKind { number, integer, boolean, string, string_list, number_list, grid };

struct ConfigKey {
  std::string name;
  KeyKind kind;
  nlohmann::json default_value;  // null: derived from other keys
  std::string help;
};

const std::vector<ConfigKey>& config_keys();
const ConfigKey* find_key(const std::string& name);

// A fully resolved flat configuration. Values are kept as JSON so the
// canonical dump (sorted keys) identifies the run.
class RunConfig {
 public:
  RunConfig();

  // Parse a JSON document; throws ConfigError with line/column on syntax
  // errors and on unknown keys or mistyped values.
  void merge_json_text(const std::string& text, const std::string& origin = "config");
  void merge_json(const nlohmann::json& object, const std::string& origin = "config");
  // Set one key from a command-line string.
  void set_from_string(const std::string& key, const std::string& value);
  void set(const std::string& key, nlohmann::json value);

  const nlohmann::json& raw() const { return values_; }
  // Derived defaults filled in (hbar and c from the unit system, q0 = length, ...).
  nlohmann::json resolved() const;
  // Resolved values minus output plumbing; hashed for file names.
  std::string canonical() const;
  std::string hash() const;

  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool boolean(const std::string& key) const;
  std::string string(const std::string& key) const;
  std::vector<std::string> strings(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;

  CavityParams cavity() const;
  RateOptions rate_options() const;
  MirrorParams mirror() const;
  ClassicalState initial_state() const;
  IntegrateOptions integrate_options() const;
  FockSpace space() const;
  HamiltonianOptions hamiltonian_options() const;
  std::vector<HamiltonianVariant> variants() const;

 private:
  nlohmann::json values_;
};

// Line and column (1-based) of a 1-based byte offset in text.
std::pair<int, int> line_column(const std::string& text, std::size_t byte_offset);

}  // namespace optomech
