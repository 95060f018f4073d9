#pragma once

#include <string>
#include <utility>
#include <vector>
#include <json.hpp>

#include "optomech/config.hpp"

namespace optomech {

struct CheckEntry {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string relation;  // "<=" or a description of the condition
};

class CheckReport {
 public:
  // pass iff |value| <= tolerance (NaN fails).
  void add(const std::string& name, double value, double tolerance);
  // Arbitrary condition; tolerance kept for reporting.
  void add_condition(const std::string& name, double value, double tolerance, bool pass, const std::string& relation);
  // Quantities reported without a pass/fail verdict.
  void observe(const std::string& name, double value);
  void note(const std::string& key, const std::string& text);
  void merge(const CheckReport& other);

  bool passed() const;
  const std::vector<CheckEntry>& entries() const { return entries_; }
  std::string first_failure() const;
  nlohmann::ordered_json to_json() const;

 private:
  std::vector<CheckEntry> entries_;
  std::vector<std::pair<std::string, double>> observations_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

// Difference in units in the last place of `reference`.
double ulp_distance(double value, double reference);

// Series and Gram identities for k, j <= kmax.
CheckReport verify_coefficients(int kmax, long jmax, long ltrunc, bool tail_correct);

// Convention notes attached to rate and check reports.
void add_convention_notes(CheckReport& report, const RunConfig& config);

// The full identity battery at the configured parameters.
CheckReport run_checks(const RunConfig& config);

}  // namespace optomech
