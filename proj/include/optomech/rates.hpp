#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <Eigen/Dense>

namespace optomech {

inline constexpr double kHbarSI = 1.054571817e-34;
inline constexpr double kLightSpeedSI = 299792458.0;

struct CavityParams {
  double mass = 1.0;
  double length = 1.0;
  double omega_mech = 1.0;
  double omega_opt = 10.0;
  double light_speed = 1.0;
  double hbar = 1.0;
  double abar_mag = 0.0;
  double abar_phase = 0.0;  // phi = arg(abar)
  double bbar_mag = 0.0;
  double bbar_phase = 0.0;  // vartheta = arg(bbar)
  double chi0 = 0.0;
  double d_mirror = 0.0;

  void validate() const;
};

// Which value of R = r_1/4 to use.
enum class RConvention {
  exact,  // (pi^2/3 + 1/4)/4
  prose,  // 0.95
};

std::string to_string(RConvention c);
RConvention parse_r_convention(const std::string& name);

struct RateOptions {
  RConvention r_convention = RConvention::exact;
  // theta = R Omega^2 x_zp / (omega^2 l) instead of x_zp / l.
  bool theta_low_omega = false;
};

double r_parameter(RConvention c);

struct BaseRates {
  double x_zp = 0.0;
  double theta = 0.0;
  double R = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double g0 = 0.0;
  // hbar omega / (m Omega l^2) evaluated directly, and the omega-less hbar / (l^2 m Omega).
  double beta_closed = 0.0;
  double beta_printed = 0.0;
};

struct LinearizedRates {
  double g3 = 0.0;
  double g4_plus = 0.0;
  double g4_minus = 0.0;
  double G4_plus = 0.0;
  double G4_minus = 0.0;
  double J = 0.0;
  double lambda = 0.0;
  double J_mech = 0.0;   // 2 J |bbar|
  double theta_G = 0.0;  // theta * g3, the alternative reading of g4_plus
};

struct SqueezeParameters {
  std::complex<double> rho_arctanh;
  std::complex<double> rho_closed;
  bool branch_cut = false;
  std::string note;
};

struct RelativisticRates {
  Eigen::MatrixXd w;
  double w11 = 0.0;
  double w_over_beta = 0.0;
};

struct RateSet {
  CavityParams params;
  RateOptions options;
  BaseRates base;
  LinearizedRates linear;
  SqueezeParameters squeeze;
  RelativisticRates relativistic;
  double r1 = 0.0;
};

class SingularRatioError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

BaseRates base_rates(const CavityParams& p, const RateOptions& options = {});
LinearizedRates linearized_rates(const CavityParams& p, const BaseRates& base);

// Both forms of the squeeze ratio for couplings G4p, G4m and optical phase
// p.abar_phase. Throws SingularRatioError when G4p + G4m e^{i phi} == 0.
SqueezeParameters squeeze_parameters(const CavityParams& p, double G4p, double G4m,
                                     const RateOptions& options = {});

// omega = sqrt(eta R) Omega.
double special_case_frequency(double eta, const CavityParams& p, const RateOptions& options = {});

RelativisticRates relativistic_rates(const CavityParams& p, int kmax);

// Everything above. The squeeze ratio is evaluated from the ratio
// G4m/G4p = R (Omega/omega)^2, which is independent of the drive amplitudes.
RateSet compute_rates(const CavityParams& p, int kmax = 1, const RateOptions& options = {});

}  // namespace optomech
