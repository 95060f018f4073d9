#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>
#include <Eigen/Dense>

#include "optomech/coefficients.hpp"
#include "optomech/ode.hpp"

namespace optomech {

struct MirrorParams {
  double mass = 1.0;
  double length = 1.0;
  double omega_mech = 1.0;
  double light_speed = 1.0;
  int kmax = 1;

  void validate() const;
  // Instantaneous cavity mode frequency c*pi*k/q.
  double mode_frequency(int k, double q) const;
};

struct ClassicalState {
  double t = 0.0;
  double q = 1.0;
  double qdot = 0.0;
  Eigen::VectorXd Q;
  Eigen::VectorXd Qdot;

  static ClassicalState at_rest(const MirrorParams& params, double q);
};

class InvalidStateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Field mode accelerations with the exact diagonal r_k term.
Eigen::VectorXd field_accel_new(const ClassicalState& state, const CoefficientTable& table,
                                const MirrorParams& params, double qddot);

// Field mode accelerations with the g.g^T double sum evaluated up to
// inner_cutoff intermediate modes (the identity only closes as the cutoff
// grows). inner_cutoff == 0 selects the default 16*kmax.
Eigen::VectorXd field_accel_law(const ClassicalState& state, const CoefficientTable& table,
                                const MirrorParams& params, double qddot, int inner_cutoff = 0);

// Newton's law for the mirror: spring plus radiation pressure at the mirror.
double mirror_accel(const ClassicalState& state, const MirrorParams& params);

// Mirror acceleration from the Euler-Lagrange equation of the truncated
// Lagrangian, with the q-Q acceleration coupling eliminated exactly.
double mirror_accel_lagrangian(const ClassicalState& state, const MirrorParams& params,
                               const CoefficientTable& table);

// Legendre energy q' dL/dq' + sum Q'_k dL/dQ'_k - L of the truncated
// Lagrangian: kinetic + spring + field + (q'^2/2q^2) Q.d.Q - (q'/q) Q'.g.Q.
double energy(const ClassicalState& state, const MirrorParams& params, const CoefficientTable& table);

// Single-mode momentum-coupled Hamiltonian with mirror momentum taken as
// m*q' and field momentum as Q': H = p^2/2m + V + (P^2 + w^2 Q^2)/2
// - r p^2 Q^2 / (8 m^2 q^2). Only mode 1 enters.
double single_mode_hamiltonian(const ClassicalState& state, const MirrorParams& params);

// (Q'_k^2 + w_k^2 Q_k^2) / (2 w_k); adiabatic invariant of mode k (1-based).
double mode_action(const ClassicalState& state, const MirrorParams& params, int k);

enum class FieldModel { new_form, law_form };
enum class MirrorModel { lagrangian, radiation_pressure, prescribed };

std::string to_string(FieldModel model);
std::string to_string(MirrorModel model);
FieldModel parse_field_model(const std::string& name);
MirrorModel parse_mirror_model(const std::string& name);

// Externally imposed mirror trajectory.
struct PrescribedMotion {
  std::function<double(double)> q;
  std::function<double(double)> qdot;
  std::function<double(double)> qddot;
};

// q(t) = l (1 + amplitude * sin(omega t)).
PrescribedMotion sinusoidal_motion(double length, double amplitude, double omega);

struct IntegrateOptions {
  FieldModel field = FieldModel::new_form;
  MirrorModel mirror = MirrorModel::lagrangian;
  PrescribedMotion motion;  // used when mirror == prescribed
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double q_min = 0.0;      // <= 0 selects length / 100
  int inner_cutoff = 0;    // law form only; 0 selects 16 * kmax
  int samples = 201;       // uniformly spaced output samples including both ends
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<ClassicalState> states;
  std::vector<double> energy;
  OdeStatistics statistics;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  bool stopped_at_floor = false;
};

class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(const std::string& what, ClassicalState last_valid)
      : std::runtime_error(what), last_valid_state(std::move(last_valid)) {}
  ClassicalState last_valid_state;
};

TrajectoryRecord integrate(const ClassicalState& initial, const MirrorParams& params,
                           const CoefficientTable& table, double t_end, const IntegrateOptions& options);

// max |E(t) - E(0)| / |E(0)| over the recorded samples.
double relative_energy_drift(const TrajectoryRecord& record);

}  // namespace optomech
