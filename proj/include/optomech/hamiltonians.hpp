#pragma once

#include <complex>
#include <string>
#include <vector>

#include "optomech/fock_space.hpp"
#include "optomech/rates.hpp"

namespace optomech {

enum class HamiltonianVariant {
  new_full,
  law_full,
  H012,
  H3,
  H4,
  H5,
  H4_linear_optical,
  H3_linear_optical,
  H4_linear_mechanical,
  H4_special_eta,
  H4_bogoliubov_form,
  delta_relativistic,
};

std::string to_string(HamiltonianVariant v);
HamiltonianVariant parse_variant(const std::string& name);
const std::vector<HamiltonianVariant>& all_variants();

// Which part of a two-regime term to keep: the x^2 (omega >> Omega) part,
// the p^2 (omega << Omega) part, or their sum.
enum class Branch { full, omega_large, omega_small };
std::string to_string(Branch b);
Branch parse_branch(const std::string& name);

// Quadratic coefficient of omega^2(q)/omega^2 in x/l: 3 from the Taylor
// series, 4 as printed in the quantized expansion.
enum class FieldQuadraticCoefficient { taylor, printed };
std::string to_string(FieldQuadraticCoefficient c);
FieldQuadraticCoefficient parse_field_quadratic(const std::string& name);

enum class RelativisticPart { total, first, second };
std::string to_string(RelativisticPart p);
RelativisticPart parse_relativistic_part(const std::string& name);

// literal: the published four-term linearized form.
// rederived: first-order expansion of the quadratic Hamiltonian at omega = sqrt(eta R) Omega.
enum class SpecialEtaForm { literal, rederived };
std::string to_string(SpecialEtaForm f);
SpecialEtaForm parse_special_eta_form(const std::string& name);

struct HamiltonianOptions {
  int order = 1;  // expansion order in x/l for new_full and law_full
  Branch branch = Branch::full;
  FieldQuadraticCoefficient field_quadratic = FieldQuadraticCoefficient::taylor;
  RelativisticPart relativistic_part = RelativisticPart::total;
  SpecialEtaForm special_eta_form = SpecialEtaForm::literal;
  double eta = 0.5;
  RConvention r_convention = RConvention::exact;
  int pad = 8;  // extra levels used while forming polynomials
};

class UnknownVariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

OperatorMatrix build_hamiltonian(HamiltonianVariant variant, const CavityParams& params, const FockSpace& space,
                                 const HamiltonianOptions& options = {});

struct BogoliubovPair {
  ComplexMatrix A;  // a^+ sinh rho + a cosh rho
  ComplexMatrix B;  // b^+ cosh rho + b sinh rho
};

BogoliubovPair bogoliubov_pair(std::complex<double> rho, const FockSpace& space);

struct SquaredAnnihilator {
  ComplexMatrix c;           // b^2 / 2
  ComplexMatrix commutator;  // [c, c^+]
};

SquaredAnnihilator squared_annihilator(const FockSpace& space);

struct GroundStateComparison {
  double e0_new = 0.0;
  double e0_law = 0.0;
  double exact_shift = 0.0;
  double first_order = 0.0;  // <0,0| new_full - law_full |0,0>
  double relative_error = 0.0;
};

GroundStateComparison compare_ground_states(const CavityParams& params, const FockSpace& space,
                                            const HamiltonianOptions& options = {});

}  // namespace optomech
