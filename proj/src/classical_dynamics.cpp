#include "optomech/classical_dynamics.hpp"

#include <cmath>
#include <numbers>

namespace optomech {
namespace {

void check_state(const ClassicalState& state, const MirrorParams& params) {
  if (!(state.q > 0.0)) throw InvalidStateError("mirror position must be positive");
  if (state.Q.size() != params.kmax || state.Qdot.size() != params.kmax)
    throw InvalidStateError("field vectors must have kmax entries");
}

void check_table(const CoefficientTable& table, const MirrorParams& params) {
  if (table.kmax() < params.kmax) throw std::invalid_argument("coefficient table smaller than kmax");
}

Eigen::VectorXd squared_frequencies(const MirrorParams& params, double q) {
  Eigen::VectorXd w2(params.kmax);
  for (int k = 1; k <= params.kmax; ++k) {
    const double w = params.mode_frequency(k, q);
    w2(k - 1) = w * w;
  }
  return w2;
}

// sum_{l <= cutoff} g_kl g_jl for k, j <= kmax.
Eigen::MatrixXd law_coupling(int kmax, int cutoff) {
  const int n = std::max(cutoff, kmax);
  Eigen::MatrixXd g(kmax, n);
  for (int k = 1; k <= kmax; ++k)
    for (int l = 1; l <= n; ++l) g(k - 1, l - 1) = l <= cutoff ? g_coefficient(k, l) : 0.0;
  return g * g.transpose();
}

int resolve_cutoff(int inner_cutoff, int kmax) { return inner_cutoff > 0 ? inner_cutoff : 16 * kmax; }

// Field and mirror equations for one truncation. `coupling` is the symmetric
// matrix multiplying (q'^2/2q^2) Q_k Q_j in the Lagrangian: d for the new
// form, the truncated g.g^T for the law form.
struct TruncatedSystem {
  const MirrorParams& params;
  FieldModel field;
  Eigen::MatrixXd g;
  Eigen::MatrixXd h;
  Eigen::VectorXd r;
  Eigen::MatrixXd coupling;

  TruncatedSystem(const MirrorParams& p, const CoefficientTable& table, FieldModel model, int inner_cutoff)
      : params(p), field(model) {
    const int K = p.kmax;
    g = table.g_matrix().topLeftCorner(K, K);
    h = table.h_matrix().topLeftCorner(K, K);
    r = table.r_vector().head(K);
    coupling = model == FieldModel::new_form ? Eigen::MatrixXd(table.d_matrix().topLeftCorner(K, K))
                                             : law_coupling(K, resolve_cutoff(inner_cutoff, K));
  }

  Eigen::VectorXd field_accel(double q, double qdot, double qddot, const Eigen::VectorXd& Q,
                              const Eigen::VectorXd& Qdot) const {
    const double u = qdot / q;
    const Eigen::VectorXd w2 = squared_frequencies(params, q);
    const Eigen::VectorXd gQ = g * Q;
    Eigen::VectorXd acc = -w2.cwiseProduct(Q) + 2.0 * u * (g * Qdot) + (qddot / q) * gQ;
    if (field == FieldModel::new_form) {
      acc += u * u * (r.cwiseProduct(Q) + h * Q - 3.0 * gQ);
    } else {
      acc += u * u * (coupling * Q - gQ);
    }
    return acc;
  }

  double mirror_accel_lagrangian(double q, double qdot, const Eigen::VectorXd& Q, const Eigen::VectorXd& Qdot) const {
    const double m = params.mass;
    const double W = params.omega_mech;
    const Eigen::VectorXd w2 = squared_frequencies(params, q);
    const Eigen::VectorXd gQ = g * Q;
    const Eigen::VectorXd SQ = coupling * Q;
    const double D = Q.dot(SQ);
    const Eigen::VectorXd a0 = field_accel(q, qdot, 0.0, Q, Qdot);
    const double force = -m * W * W * (q - params.length) + w2.dot(Q.cwiseProduct(Q)) / q +
                         qdot * qdot * D / (q * q * q) - 2.0 * qdot * Qdot.dot(SQ) / (q * q) + a0.dot(gQ) / q;
    const double effective_mass = m + (D - gQ.squaredNorm()) / (q * q);
    return force / effective_mass;
  }

  double legendre_energy(double q, double qdot, const Eigen::VectorXd& Q, const Eigen::VectorXd& Qdot) const {
    const double m = params.mass;
    const double W = params.omega_mech;
    const double u = qdot / q;
    const Eigen::VectorXd w2 = squared_frequencies(params, q);
    const double x = q - params.length;
    return 0.5 * m * qdot * qdot + 0.5 * m * W * W * x * x +
           0.5 * (Qdot.squaredNorm() + w2.dot(Q.cwiseProduct(Q))) + 0.5 * u * u * Q.dot(coupling * Q) -
           u * Qdot.dot(g * Q);
  }
};

double newton_mirror_accel(const MirrorParams& params, double q, const Eigen::VectorXd& Q) {
  double alternating = 0.0;
  for (int k = 1; k <= params.kmax; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    alternating += sign * params.mode_frequency(k, q) * Q(k - 1);
  }
  // sum_{k,j} (-1)^{k+j} w_k w_j Q_k Q_j factorizes into a square.
  const double pressure = alternating * alternating / q;
  const double W = params.omega_mech;
  return (-params.mass * W * W * (q - params.length) + pressure) / params.mass;
}

}  // namespace

void MirrorParams::validate() const {
  if (!(mass > 0.0) || !(length > 0.0) || !(omega_mech > 0.0) || !(light_speed > 0.0))
    throw std::invalid_argument("mirror parameters must be strictly positive");
  if (kmax < 1) throw std::invalid_argument("kmax must be >= 1");
}

double MirrorParams::mode_frequency(int k, double q) const { return light_speed * std::numbers::pi * k / q; }

ClassicalState ClassicalState::at_rest(const MirrorParams& params, double q) {
  ClassicalState s;
  s.q = q;
  s.Q = Eigen::VectorXd::Zero(params.kmax);
  s.Qdot = Eigen::VectorXd::Zero(params.kmax);
  return s;
}

Eigen::VectorXd field_accel_new(const ClassicalState& state, const CoefficientTable& table,
                                const MirrorParams& params, double qddot) {
  params.validate();
  check_state(state, params);
  check_table(table, params);
  const TruncatedSystem sys(params, table, FieldModel::new_form, 0);
  return sys.field_accel(state.q, state.qdot, qddot, state.Q, state.Qdot);
}

Eigen::VectorXd field_accel_law(const ClassicalState& state, const CoefficientTable& table,
                                const MirrorParams& params, double qddot, int inner_cutoff) {
  params.validate();
  check_state(state, params);
  check_table(table, params);
  const TruncatedSystem sys(params, table, FieldModel::law_form, inner_cutoff);
  return sys.field_accel(state.q, state.qdot, qddot, state.Q, state.Qdot);
}

double mirror_accel(const ClassicalState& state, const MirrorParams& params) {
  params.validate();
  check_state(state, params);
  return newton_mirror_accel(params, state.q, state.Q);
}

double mirror_accel_lagrangian(const ClassicalState& state, const MirrorParams& params,
                               const CoefficientTable& table) {
  params.validate();
  check_state(state, params);
  check_table(table, params);
  const TruncatedSystem sys(params, table, FieldModel::new_form, 0);
  return sys.mirror_accel_lagrangian(state.q, state.qdot, state.Q, state.Qdot);
}

double energy(const ClassicalState& state, const MirrorParams& params, const CoefficientTable& table) {
  params.validate();
  check_state(state, params);
  check_table(table, params);
  const TruncatedSystem sys(params, table, FieldModel::new_form, 0);
  return sys.legendre_energy(state.q, state.qdot, state.Q, state.Qdot);
}

double single_mode_hamiltonian(const ClassicalState& state, const MirrorParams& params) {
  params.validate();
  check_state(state, params);
  const double m = params.mass;
  const double p = m * state.qdot;
  const double P = state.Qdot(0);
  const double Q = state.Q(0);
  const double w = params.mode_frequency(1, state.q);
  const double x = state.q - params.length;
  const double W = params.omega_mech;
  return p * p / (2.0 * m) + 0.5 * m * W * W * x * x + 0.5 * (P * P + w * w * Q * Q) -
         r_coefficient(1) * p * p * Q * Q / (8.0 * m * m * state.q * state.q);
}

double mode_action(const ClassicalState& state, const MirrorParams& params, int k) {
  check_state(state, params);
  if (k < 1 || k > params.kmax) throw std::out_of_range("mode index out of range");
  const double w = params.mode_frequency(k, state.q);
  const double Q = state.Q(k - 1);
  const double P = state.Qdot(k - 1);
  return (P * P + w * w * Q * Q) / (2.0 * w);
}

std::string to_string(FieldModel model) { return model == FieldModel::new_form ? "new" : "law"; }

std::string to_string(MirrorModel model) {
  switch (model) {
    case MirrorModel::lagrangian: return "lagrangian";
    case MirrorModel::radiation_pressure: return "radiation_pressure";
    case MirrorModel::prescribed: return "prescribed";
  }
  return "unknown";
}

FieldModel parse_field_model(const std::string& name) {
  if (name == "new") return FieldModel::new_form;
  if (name == "law") return FieldModel::law_form;
  throw std::invalid_argument("unknown field variant '" + name + "' (expected new|law)");
}

MirrorModel parse_mirror_model(const std::string& name) {
  if (name == "lagrangian") return MirrorModel::lagrangian;
  if (name == "radiation_pressure") return MirrorModel::radiation_pressure;
  if (name == "prescribed") return MirrorModel::prescribed;
  throw std::invalid_argument("unknown mirror model '" + name + "'");
}

PrescribedMotion sinusoidal_motion(double length, double amplitude, double omega) {
  PrescribedMotion motion;
  motion.q = [=](double t) { return length * (1.0 + amplitude * std::sin(omega * t)); };
  motion.qdot = [=](double t) { return length * amplitude * omega * std::cos(omega * t); };
  motion.qddot = [=](double t) { return -length * amplitude * omega * omega * std::sin(omega * t); };
  return motion;
}

TrajectoryRecord integrate(const ClassicalState& initial, const MirrorParams& params,
                           const CoefficientTable& table, double t_end, const IntegrateOptions& options) {
  params.validate();
  check_state(initial, params);
  check_table(table, params);
  if (!(options.rel_tol > 0.0 && options.rel_tol <= 1e-2) || !(options.abs_tol > 0.0 && options.abs_tol <= 1e-2))
    throw std::invalid_argument("tolerances must lie in (0, 1e-2]");
  if (options.samples < 2) throw std::invalid_argument("need at least two output samples");
  const bool prescribed = options.mirror == MirrorModel::prescribed;
  if (prescribed && !(options.motion.q && options.motion.qdot && options.motion.qddot))
    throw std::invalid_argument("prescribed mirror model needs a motion");

  const int K = params.kmax;
  const TruncatedSystem sys(params, table, options.field, options.inner_cutoff);
  const double q_min = options.q_min > 0.0 ? options.q_min : params.length / 100.0;
  const int offset = prescribed ? 0 : 2;

  auto unpack = [&](double t, const Eigen::VectorXd& y) {
    ClassicalState s;
    s.t = t;
    if (prescribed) {
      s.q = options.motion.q(t);
      s.qdot = options.motion.qdot(t);
    } else {
      s.q = y(0);
      s.qdot = y(1);
    }
    s.Q = y.segment(offset, K);
    s.Qdot = y.segment(offset + K, K);
    return s;
  };

  OdeRhs rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dydt) {
    double q, qdot, qddot;
    const auto Q = y.segment(offset, K);
    const auto Qdot = y.segment(offset + K, K);
    if (prescribed) {
      q = options.motion.q(t);
      qdot = options.motion.qdot(t);
      qddot = options.motion.qddot(t);
    } else {
      q = y(0);
      qdot = y(1);
      qddot = options.mirror == MirrorModel::lagrangian ? sys.mirror_accel_lagrangian(q, qdot, Q, Qdot)
                                                         : newton_mirror_accel(params, q, Q);
      dydt(0) = qdot;
      dydt(1) = qddot;
    }
    dydt.segment(offset, K) = Qdot;
    // Mirror acceleration first; the field equation only needs its value.
    dydt.segment(offset + K, K) = sys.field_accel(q, qdot, qddot, Q, Qdot);
  };

  Eigen::VectorXd y0(offset + 2 * K);
  if (!prescribed) {
    y0(0) = initial.q;
    y0(1) = initial.qdot;
  }
  y0.segment(offset, K) = initial.Q;
  y0.segment(offset + K, K) = initial.Qdot;

  const double t0 = initial.t;
  OdeOptions ode_options;
  ode_options.rel_tol = options.rel_tol;
  ode_options.abs_tol = options.abs_tol;
  Dop853 solver(rhs, t0, y0, t_end, ode_options);

  TrajectoryRecord record;
  record.rel_tol = options.rel_tol;
  record.abs_tol = options.abs_tol;
  auto push = [&](double t, const Eigen::VectorXd& y) {
    ClassicalState s = unpack(t, y);
    record.energy.push_back(sys.legendre_energy(s.q, s.qdot, s.Q, s.Qdot));
    record.times.push_back(t);
    record.states.push_back(std::move(s));
  };

  const int n = options.samples;
  auto sample_time = [&](int i) { return i == n - 1 ? t_end : t0 + (t_end - t0) * double(i) / double(n - 1); };
  push(t0, y0);
  int next = 1;
  const double direction = t_end >= t0 ? 1.0 : -1.0;
  auto q_of = [&](double t, const Eigen::VectorXd& y) { return prescribed ? options.motion.q(t) : y(0); };

  try {
    while (next < n && solver.step()) {
      const double t_new = solver.t();
      if (q_of(t_new, solver.y()) <= q_min) {
        // Bisect the dense output for the floor crossing.
        double lo = solver.t_previous(), hi = t_new;
        for (int it = 0; it < 200 && lo != hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (q_of(mid, solver.interpolate(mid)) <= q_min) hi = mid; else lo = mid;
        }
        while (next < n && direction * (sample_time(next) - hi) < 0.0) {
          const double ts = sample_time(next++);
          push(ts, solver.interpolate(ts));
        }
        push(hi, solver.interpolate(hi));
        record.stopped_at_floor = true;
        break;
      }
      while (next < n && direction * (sample_time(next) - t_new) <= 0.0) {
        const double ts = sample_time(next++);
        push(ts, ts == t_new ? solver.y() : solver.interpolate(ts));
      }
    }
  } catch (const StepSizeUnderflow& e) {
    throw StiffnessError(std::string("integration failed: ") + e.what(), unpack(solver.t(), solver.y()));
  }
  record.statistics = solver.statistics();
  return record;
}

double relative_energy_drift(const TrajectoryRecord& record) {
  if (record.energy.empty()) return 0.0;
  const double e0 = record.energy.front();
  double worst = 0.0;
  for (double e : record.energy) worst = std::max(worst, std::abs(e - e0));
  return e0 != 0.0 ? worst / std::abs(e0) : worst;
}

}  // namespace optomech
