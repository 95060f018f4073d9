#include <doctest.h>

#include <cmath>
#include <numbers>

#include "optomech/classical_dynamics.hpp"

using namespace optomech;

namespace {

const double kPi = std::numbers::pi;

MirrorParams unit_params(int kmax) {
  MirrorParams p;
  p.kmax = kmax;
  return p;
}

// Truncated Lagrangian written out term by term.
double lagrangian(const MirrorParams& p, double q, double qd, const Eigen::VectorXd& Q, const Eigen::VectorXd& Qd) {
  double L = 0.5 * p.mass * qd * qd - 0.5 * p.mass * p.omega_mech * p.omega_mech * (q - p.length) * (q - p.length);
  for (int k = 1; k <= p.kmax; ++k) {
    const double w = p.light_speed * kPi * k / q;
    L += 0.5 * (Qd(k - 1) * Qd(k - 1) - w * w * Q(k - 1) * Q(k - 1));
    for (int j = 1; j <= p.kmax; ++j) {
      L += 0.5 * (qd * qd / (q * q)) * d_coefficient(k, j) * Q(k - 1) * Q(j - 1);
      L -= (qd / q) * Qd(k - 1) * g_coefficient(k, j) * Q(j - 1);
    }
  }
  return L;
}

// d/dt (dL/dq') - dL/dq by nested central differences.
double mirror_el_residual(const MirrorParams& p, const ClassicalState& s, double qdd, const Eigen::VectorXd& Qdd) {
  const double h = 1e-4;
  auto pq = [&](double q, double qd, const Eigen::VectorXd& Q, const Eigen::VectorXd& Qd) {
    return (lagrangian(p, q, qd + h, Q, Qd) - lagrangian(p, q, qd - h, Q, Qd)) / (2 * h);
  };
  auto dq = [&](double q) {
    return (lagrangian(p, q + h, s.qdot, s.Q, s.Qdot) - lagrangian(p, q - h, s.qdot, s.Q, s.Qdot)) / (2 * h);
  };
  double ddt = (pq(s.q + h, s.qdot, s.Q, s.Qdot) - pq(s.q - h, s.qdot, s.Q, s.Qdot)) / (2 * h) * s.qdot +
               (pq(s.q, s.qdot + h, s.Q, s.Qdot) - pq(s.q, s.qdot - h, s.Q, s.Qdot)) / (2 * h) * qdd;
  for (int k = 0; k < p.kmax; ++k) {
    Eigen::VectorXd Qp = s.Q, Qm = s.Q, Qdp = s.Qdot, Qdm = s.Qdot;
    Qp(k) += h;
    Qm(k) -= h;
    Qdp(k) += h;
    Qdm(k) -= h;
    ddt += (pq(s.q, s.qdot, Qp, s.Qdot) - pq(s.q, s.qdot, Qm, s.Qdot)) / (2 * h) * s.Qdot(k);
    ddt += (pq(s.q, s.qdot, s.Q, Qdp) - pq(s.q, s.qdot, s.Q, Qdm)) / (2 * h) * Qdd(k);
  }
  return ddt - dq(s.q);
}

}  // namespace

TEST_CASE("static mirror reduces to harmonic modes") {
  const MirrorParams p = unit_params(3);
  const CoefficientTable t(3);
  ClassicalState s = ClassicalState::at_rest(p, 1.2);
  s.Q << 0.3, -0.1, 0.7;
  s.Qdot << 0.2, 0.5, -0.4;
  const Eigen::VectorXd a = field_accel_new(s, t, p, 0.0);
  const Eigen::VectorXd b = field_accel_law(s, t, p, 0.0);
  for (int k = 1; k <= 3; ++k) {
    const double w = kPi * k / 1.2;
    CHECK(a(k - 1) == doctest::Approx(-w * w * s.Q(k - 1)).epsilon(1e-14));
    CHECK(b(k - 1) == doctest::Approx(-w * w * s.Q(k - 1)).epsilon(1e-14));
  }
}

TEST_CASE("single mode field equation") {
  const MirrorParams p = unit_params(1);
  const CoefficientTable t(1);
  ClassicalState s = ClassicalState::at_rest(p, 1.5);
  s.qdot = 0.3;
  s.Q(0) = 0.8;
  const double w = kPi / 1.5;
  const double expected = -w * w * 0.8 + r_coefficient(1) * std::pow(0.3 / 1.5, 2) * 0.8;
  CHECK(field_accel_new(s, t, p, 0.7)(0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(field_accel_law(s, t, p, 0.7, 1)(0) == doctest::Approx(-w * w * 0.8).epsilon(1e-14));
}

TEST_CASE("two mode hand evaluation") {
  const MirrorParams p = unit_params(2);
  const CoefficientTable t(2);
  ClassicalState s = ClassicalState::at_rest(p, 1.0);
  s.qdot = 1.0;
  s.Q << 1.0, 0.0;
  const Eigen::VectorXd a = field_accel_new(s, t, p, 0.0);
  CHECK(a(1) == doctest::Approx(-52.0 / 9.0).epsilon(1e-14));
  // The law form approaches it as the inner cutoff grows.
  const double dev1 = std::abs(field_accel_law(s, t, p, 0.0, 1000)(1) - a(1));
  const double dev2 = std::abs(field_accel_law(s, t, p, 0.0, 4000)(1) - a(1));
  CHECK(dev1 < 1e-2);
  CHECK(dev2 < dev1 / 3.0);
}

TEST_CASE("Newton mirror") {
  const MirrorParams p = unit_params(1);
  ClassicalState s = ClassicalState::at_rest(p, 1.0);
  CHECK(mirror_accel(s, p) == 0.0);
  s.q = 1.3;
  CHECK(mirror_accel(s, p) == doctest::Approx(-0.3).epsilon(1e-14));
  s.q = 1.0;
  s.Q(0) = 1.0;
  CHECK(mirror_accel(s, p) == doctest::Approx(kPi * kPi).epsilon(1e-14));
  MirrorParams p2 = unit_params(2);
  ClassicalState s2 = ClassicalState::at_rest(p2, 1.1);
  s2.Q << 0.4, -0.3;
  double sum = 0.0;
  for (int k = 1; k <= 2; ++k)
    for (int j = 1; j <= 2; ++j)
      sum += ((k + j) % 2 ? -1.0 : 1.0) * (kPi * k / 1.1) * (kPi * j / 1.1) * s2.Q(k - 1) * s2.Q(j - 1);
  CHECK(mirror_accel(s2, p2) == doctest::Approx(0.1 * -1.0 + sum / 1.1).epsilon(1e-13));
}

TEST_CASE("Lagrangian mirror satisfies the Euler-Lagrange equation") {
  MirrorParams p = unit_params(3);
  p.mass = 2.0;
  p.omega_mech = 1.3;
  const CoefficientTable t(3);
  ClassicalState s = ClassicalState::at_rest(p, 1.1);
  s.qdot = 0.4;
  s.Q << 0.3, -0.2, 0.1;
  s.Qdot << 0.1, 0.25, -0.3;
  const double qdd = mirror_accel_lagrangian(s, p, t);
  const Eigen::VectorXd Qdd = field_accel_new(s, t, p, qdd);
  CHECK(std::abs(mirror_el_residual(p, s, qdd, Qdd)) < 1e-5);
  // A wrong acceleration leaves a visible residual.
  CHECK(std::abs(mirror_el_residual(p, s, qdd + 0.01, field_accel_new(s, t, p, qdd + 0.01))) > 1e-3);
}

TEST_CASE("energy") {
  const MirrorParams p = unit_params(1);
  const CoefficientTable t(1);
  ClassicalState s = ClassicalState::at_rest(p, 1.0);
  s.qdot = 1.0;
  s.Q(0) = 1.0;
  CHECK(energy(s, p, t) == doctest::Approx(7.2047).epsilon(1e-4));
  CHECK(energy(s, p, t) == doctest::Approx(0.5 + kPi * kPi / 2 + r_coefficient(1) / 2).epsilon(1e-14));
  ClassicalState s0 = ClassicalState::at_rest(p, 1.2);
  s0.qdot = 0.5;
  CHECK(energy(s0, p, t) == doctest::Approx(0.5 * 0.25 + 0.5 * 0.04).epsilon(1e-14));
  MirrorParams p3 = unit_params(3);
  const CoefficientTable t3(3);
  ClassicalState s3 = ClassicalState::at_rest(p3, 0.9);
  s3.Q << 0.2, 0.1, -0.1;
  s3.Qdot << 0.3, 0.0, 0.2;
  double field = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double w = kPi * k / 0.9;
    field += 0.5 * (s3.Qdot(k - 1) * s3.Qdot(k - 1) + w * w * s3.Q(k - 1) * s3.Q(k - 1));
  }
  CHECK(energy(s3, p3, t3) == doctest::Approx(0.5 * 0.01 + field).epsilon(1e-14));
}

TEST_CASE("invalid states") {
  const MirrorParams p = unit_params(2);
  const CoefficientTable t(2);
  ClassicalState s = ClassicalState::at_rest(p, 0.0);
  CHECK_THROWS_AS(field_accel_new(s, t, p, 0.0), InvalidStateError);
  CHECK_THROWS_AS(mirror_accel(s, p), InvalidStateError);
  CHECK_THROWS_AS(energy(s, p, t), InvalidStateError);
  s.q = 1.0;
  s.Q.resize(3);
  CHECK_THROWS_AS(field_accel_law(s, t, p, 0.0), InvalidStateError);
  IntegrateOptions o;
  o.rel_tol = 0.5;
  CHECK_THROWS_AS(integrate(ClassicalState::at_rest(p, 1.0), p, t, 1.0, o), std::invalid_argument);
}

TEST_CASE("decoupled mirror is a harmonic oscillator") {
  MirrorParams p = unit_params(2);
  p.omega_mech = 2.0;
  const CoefficientTable t(2);
  ClassicalState s = ClassicalState::at_rest(p, 1.05);
  IntegrateOptions o;
  o.rel_tol = 1e-10;
  o.abs_tol = 1e-12;
  o.samples = 50;
  const TrajectoryRecord rec = integrate(s, p, t, 10.0, o);
  REQUIRE(rec.times.size() == 50);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    if (i > 0) CHECK(rec.times[i] > rec.times[i - 1]);
    CHECK(rec.states[i].q == doctest::Approx(1.0 + 0.05 * std::cos(2.0 * rec.times[i])).epsilon(1e-8));
    CHECK(rec.states[i].Q.norm() == 0.0);
  }
}

TEST_CASE("adiabatic invariant under slow mirror motion") {
  MirrorParams p = unit_params(1);
  p.omega_mech = 0.05;
  const CoefficientTable t(1);
  ClassicalState s = ClassicalState::at_rest(p, 1.0);
  s.Q(0) = 0.1;
  IntegrateOptions o;
  o.mirror = MirrorModel::prescribed;
  o.motion = sinusoidal_motion(1.0, 0.02, p.omega_mech);
  o.samples = 400;
  const double t_end = 10.0 * 2.0 * kPi / p.omega_mech;
  const TrajectoryRecord rec = integrate(s, p, t, t_end, o);
  const double j0 = mode_action(rec.states.front(), p, 1);
  for (const auto& st : rec.states) CHECK(std::abs(mode_action(st, p, 1) / j0 - 1.0) < 0.01);
}

TEST_CASE("time reversal") {
  const MirrorParams p = unit_params(2);
  const CoefficientTable t(2);
  ClassicalState s = ClassicalState::at_rest(p, 1.01);
  s.Q << 0.1, 0.02;
  s.Qdot << 0.05, 0.0;
  IntegrateOptions o;
  o.rel_tol = 1e-10;
  o.abs_tol = 1e-12;
  o.samples = 2;
  const TrajectoryRecord fwd = integrate(s, p, t, 20.0, o);
  ClassicalState back = fwd.states.back();
  back.t = 0.0;
  back.qdot = -back.qdot;
  back.Qdot = -back.Qdot;
  const TrajectoryRecord rev = integrate(back, p, t, 20.0, o);
  const ClassicalState& end = rev.states.back();
  const double tol = 100.0 * o.rel_tol;
  CHECK(std::abs(end.q - s.q) < tol * std::abs(s.q));
  CHECK(std::abs(end.qdot + s.qdot) < tol);
  CHECK((end.Q - s.Q).norm() < tol);
  CHECK((end.Qdot + s.Qdot).norm() < tol);
}

TEST_CASE("floor event stops the run") {
  MirrorParams p = unit_params(1);
  const CoefficientTable t(1);
  ClassicalState s = ClassicalState::at_rest(p, 1.95);
  IntegrateOptions o;
  o.q_min = 0.2;
  const TrajectoryRecord rec = integrate(s, p, t, 10.0, o);
  CHECK(rec.stopped_at_floor);
  CHECK(rec.states.back().q == doctest::Approx(0.2).epsilon(1e-8));
  CHECK(rec.times.back() < 10.0);
  for (std::size_t i = 1; i < rec.times.size(); ++i) CHECK(rec.times[i] > rec.times[i - 1]);
}

TEST_CASE("law form with the Lagrangian mirror conserves its own energy") {
  const MirrorParams p = unit_params(2);
  const CoefficientTable t(2);
  ClassicalState s = ClassicalState::at_rest(p, 1.01);
  s.Q << 0.1, 0.0;
  s.Qdot << 0.05, 0.0;
  IntegrateOptions o;
  o.field = FieldModel::law_form;
  o.rel_tol = 1e-10;
  o.abs_tol = 1e-12;
  const TrajectoryRecord rec = integrate(s, p, t, 30.0, o);
  CHECK(relative_energy_drift(rec) < 1e-8);
}

TEST_CASE("model names") {
  CHECK(parse_field_model("law") == FieldModel::law_form);
  CHECK(to_string(MirrorModel::radiation_pressure) == "radiation_pressure");
  CHECK_THROWS(parse_mirror_model("free"));
}
