#include "optomech/rates.hpp"

#include <cmath>
#include <numbers>

#include "optomech/coefficients.hpp"

namespace optomech {

void CavityParams::validate() const {
  if (!(mass > 0.0) || !(length > 0.0) || !(omega_mech > 0.0) || !(omega_opt > 0.0) || !(light_speed > 0.0) ||
      !(hbar > 0.0))
    throw std::invalid_argument("m, l, Omega, omega, c and hbar must be strictly positive");
  if (!(abar_mag >= 0.0) || !(bbar_mag >= 0.0)) throw std::invalid_argument("drive amplitudes must be >= 0");
  if (!(chi0 >= 0.0) || !(d_mirror >= 0.0)) throw std::invalid_argument("chi0 and d_mirror must be >= 0");
  if (!std::isfinite(abar_phase) || !std::isfinite(bbar_phase)) throw std::invalid_argument("phases must be finite");
}

std::string to_string(RConvention c) { return c == RConvention::exact ? "exact" : "prose"; }

RConvention parse_r_convention(const std::string& name) {
  if (name == "exact") return RConvention::exact;
  if (name == "prose") return RConvention::prose;
  throw std::invalid_argument("unknown R convention '" + name + "' (expected exact|prose)");
}

double r_parameter(RConvention c) { return c == RConvention::exact ? r_coefficient(1) / 4.0 : 0.95; }

BaseRates base_rates(const CavityParams& p, const RateOptions& options) {
  p.validate();
  BaseRates b;
  b.R = r_parameter(options.r_convention);
  b.x_zp = std::sqrt(p.hbar / (p.mass * p.omega_mech));
  const double ratio = p.omega_mech / p.omega_opt;
  b.theta = options.theta_low_omega ? b.R * ratio * ratio * b.x_zp / p.length : b.x_zp / p.length;
  b.alpha = (p.omega_opt / p.length) * b.x_zp;
  b.beta = b.theta * b.alpha;
  b.gamma = b.theta * b.beta;
  b.g0 = b.alpha / std::numbers::sqrt2;
  b.beta_closed = p.hbar * p.omega_opt / (p.mass * p.omega_mech * p.length * p.length);
  b.beta_printed = p.hbar / (p.length * p.length * p.mass * p.omega_mech);
  return b;
}

LinearizedRates linearized_rates(const CavityParams& p, const BaseRates& base) {
  p.validate();
  LinearizedRates r;
  const double ratio = p.omega_mech / p.omega_opt;
  r.g3 = base.g0 * p.abar_mag;
  r.g4_plus = 0.5 * base.beta * p.abar_mag;
  r.g4_minus = base.R * ratio * ratio * r.g4_plus;
  r.G4_plus = 2.0 * p.bbar_mag * r.g4_plus * std::cos(p.bbar_phase);
  r.G4_minus = 2.0 * p.bbar_mag * r.g4_minus * std::sin(p.bbar_phase);
  r.J = 2.0 * base.beta * p.abar_mag;
  r.lambda = r.J;
  r.J_mech = 2.0 * r.J * p.bbar_mag;
  r.theta_G = base.theta * r.g3;
  return r;
}

SqueezeParameters squeeze_parameters(const CavityParams& p, double G4p, double G4m, const RateOptions& options) {
  p.validate();
  const std::complex<double> phase = std::polar(1.0, p.abar_phase);
  const std::complex<double> num = G4p - G4m * phase;
  const std::complex<double> den = G4p + G4m * phase;
  if (std::abs(den) <= 1e-14 * (std::abs(G4p) + std::abs(G4m))) throw SingularRatioError("G4+ + G4- e^{i phi} vanishes");
  const std::complex<double> x = num / den;
  SqueezeParameters s;
  s.rho_arctanh = std::atanh(x);
  const double R = r_parameter(options.r_convention);
  s.rho_closed = std::complex<double>(std::log(p.omega_opt / (std::sqrt(R) * p.omega_mech)), -0.5 * p.abar_phase);
  if (x.imag() == 0.0 && std::abs(x.real()) >= 1.0) {
    s.branch_cut = true;
    s.note = "arctanh argument on the real branch cut |x| >= 1";
  }
  return s;
}

double special_case_frequency(double eta, const CavityParams& p, const RateOptions& options) {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
  if (!(p.omega_mech > 0.0)) throw std::invalid_argument("Omega must be > 0");
  return std::sqrt(eta * r_parameter(options.r_convention)) * p.omega_mech;
}

RelativisticRates relativistic_rates(const CavityParams& p, int kmax) {
  p.validate();
  if (kmax < 1) throw std::invalid_argument("kmax must be >= 1");
  RelativisticRates r;
  r.w11 = p.chi0 * std::numbers::pi * p.hbar * p.d_mirror * p.omega_mech /
          (4.0 * p.mass * p.light_speed * p.length * p.length);
  r.w.resize(kmax, kmax);
  for (int k = 1; k <= kmax; ++k)
    for (int j = 1; j <= kmax; ++j) r.w(k - 1, j - 1) = std::sqrt(double(k) * double(j)) * r.w11;
  r.w_over_beta = p.chi0 * std::numbers::pi * p.d_mirror * p.omega_mech * p.omega_mech /
                  (4.0 * p.light_speed * p.omega_opt);
  return r;
}

RateSet compute_rates(const CavityParams& p, int kmax, const RateOptions& options) {
  RateSet s;
  s.params = p;
  s.options = options;
  s.base = base_rates(p, options);
  s.linear = linearized_rates(p, s.base);
  const double ratio = p.omega_mech / p.omega_opt;
  s.squeeze = squeeze_parameters(p, 1.0, s.base.R * ratio * ratio, options);
  s.relativistic = relativistic_rates(p, kmax);
  s.r1 = r_coefficient(1);
  return s;
}

}  // namespace optomech
