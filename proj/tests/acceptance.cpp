#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "optomech/checks.hpp"
#include "optomech/classical_dynamics.hpp"
#include "optomech/coefficients.hpp"
#include "optomech/fock_space.hpp"
#include "optomech/hamiltonians.hpp"
#include "optomech/rates.hpp"
#include "optomech/symmetrize.hpp"

using namespace optomech;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << detail << std::endl;
  if (!pass) ++failures;
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}

double sign(int k, int j) { return (k + j) % 2 == 0 ? 1.0 : -1.0; }

// Closed-form g written out independently of the library.
double g_ref(int k, int j) { return k == j ? 0.0 : 2.0 * sign(k, j) * k * j / (double(j) * j - double(k) * k); }

void series_identity() {
  const auto start = std::chrono::steady_clock::now();
  const long jmax = 10000;
  double worst = 0.0;
  for (int k = 1; k <= 5; ++k) {
    double sum = 0.0;
    for (long j = jmax; j >= 1; --j) sum += std::pow(g_ref(k, static_cast<int>(j)), 2);
    sum += 4.0 * k * k / static_cast<double>(jmax);
    const double target = k * k * std::numbers::pi * std::numbers::pi / 3.0 + 0.25;
    worst = std::max({worst, std::abs(sum - target), verify_g_squared_sum(k, jmax, true)});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(1, "series identity", worst < 1e-4 && secs < 1.0,
         "max residual " + num(worst) + " (< 1e-4), " + num(secs) + " s (< 1 s)");
}

void gram_identity() {
  auto worst = [](long L, bool tail) {
    double w = 0.0;
    for (int k = 1; k <= 20; ++k)
      for (int j = 1; j <= 20; ++j) w = std::max(w, gram_residual(k, j, L, tail));
    return w;
  };
  const double corrected = worst(10000, true);
  const double ratio = worst(1000, false) / worst(10000, false);
  report(2, "Gram identity", corrected < 1e-3 && ratio >= 8.0 && ratio <= 12.0,
         "corrected residual " + num(corrected) + " (< 1e-3), uncorrected 1e3/1e4 ratio " + num(ratio) + " (in [8, 12])");
}

void d_is_sym_h() {
  long mismatches = 0, pairs = 0;
  for (int k = 1; k <= 64; ++k) {
    for (int j = 1; j <= 64; ++j) {
      if (k == j) continue;
      ++pairs;
      const Rational half_sum = Rational(1, 2) * (h_exact(k, j) + h_exact(j, k));
      // 4 (-1)^{k+j} kj (k^2 + j^2) / (k^2 - j^2)^2 from integers.
      const std::int64_t diff = std::int64_t(k) * k - std::int64_t(j) * j;
      const Rational direct(4 * static_cast<std::int64_t>(sign(k, j)) * k * j * (std::int64_t(k) * k + std::int64_t(j) * j),
                            diff * diff);
      if (!(d_exact(k, j) == half_sum) || !(direct == half_sum)) ++mismatches;
    }
  }
  report(3, "d equals sym(h)", mismatches == 0,
         std::to_string(mismatches) + " mismatches over " + std::to_string(pairs) + " pairs");
}

void truncated_dynamics() {
  const double l = 1.0;
  const std::vector<int> cutoffs{4, 8, 16, 32};
  std::vector<double> dev;
  for (int K : cutoffs) {
    MirrorParams mp;
    mp.length = l;
    mp.kmax = K;
    const CoefficientTable table(K);
    ClassicalState s = ClassicalState::at_rest(mp, l);
    s.Q(0) = 1.0;
    IntegrateOptions opt;
    opt.mirror = MirrorModel::prescribed;
    opt.motion = sinusoidal_motion(l, 0.01, mp.omega_mech);
    opt.rel_tol = 1e-10;
    opt.abs_tol = 1e-12;
    opt.samples = 401;
    opt.inner_cutoff = K;
    const double t_end = 4.0 * std::numbers::pi / mp.omega_mech;
    opt.field = FieldModel::new_form;
    const TrajectoryRecord a = integrate(s, mp, table, t_end, opt);
    opt.field = FieldModel::law_form;
    const TrajectoryRecord b = integrate(s, mp, table, t_end, opt);
    double w = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i) w = std::max(w, (a.states[i].Q - b.states[i].Q).cwiseAbs().maxCoeff());
    dev.push_back(w);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < dev.size(); ++i) monotone = monotone && dev[i] < dev[i - 1];

  MirrorParams one;
  one.kmax = 1;
  const CoefficientTable t1(1);
  ClassicalState s = ClassicalState::at_rest(one, 1.2);
  s.qdot = 0.35;
  s.Q(0) = 0.8;
  s.Qdot(0) = 0.1;
  const double qddot = -0.4;
  const double gap = field_accel_new(s, t1, one, qddot)(0) - field_accel_law(s, t1, one, qddot, 1)(0);
  const double expected = (std::numbers::pi * std::numbers::pi / 3.0 + 0.25) * std::pow(s.qdot / s.q, 2) * s.Q(0);
  const double single = std::abs(gap - expected);

  std::string detail = "max field deviation";
  for (std::size_t i = 0; i < dev.size(); ++i) detail += " K=" + std::to_string(cutoffs[i]) + ":" + num(dev[i]);
  detail += ", single-mode gap error " + num(single) + " (<= 1e-10)";
  report(4, "truncated dynamics equivalence", monotone && single <= 1e-10, detail);
}

void energy_conservation() {
  MirrorParams mp;
  mp.kmax = 4;
  const CoefficientTable table(4);
  ClassicalState s = ClassicalState::at_rest(mp, 1.01 * mp.length);
  s.Q(0) = 0.1;
  s.Qdot(0) = 0.05;
  IntegrateOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-12;
  opt.samples = 2001;
  const double t_end = 100.0 * 2.0 * std::numbers::pi / mp.omega_mech;
  const TrajectoryRecord rec = integrate(s, mp, table, t_end, opt);
  const double drift = relative_energy_drift(rec);
  report(5, "energy conservation", drift < 1e-8 && !rec.stopped_at_floor,
         "relative Legendre energy drift " + num(drift) + " over 100 periods (< 1e-8)");
}

void rate_chain() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    CavityParams p;
    p.mass = std::pow(10.0, u(rng));
    p.length = std::pow(10.0, u(rng));
    p.omega_mech = std::pow(10.0, u(rng));
    p.omega_opt = std::pow(10.0, u(rng));
    p.hbar = std::pow(10.0, u(rng));
    const BaseRates b = base_rates(p);
    worst = std::max({worst, ulp_distance(b.beta, b.theta * b.alpha), ulp_distance(b.gamma, b.theta * b.theta * b.alpha)});
  }
  report(6, "rate chain", worst <= 4.0, "max deviation " + num(worst) + " ulp (<= 4)");
}

void squeeze_cross_check() {
  CavityParams p;
  const double R = r_parameter(RConvention::exact);
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    p.omega_opt = p.omega_mech * std::pow(10.0, -2.0 + 0.01 * i);
    const double x = p.omega_mech / p.omega_opt;
    const SqueezeParameters s = squeeze_parameters(p, 1.0, R * x * x);
    worst = std::max(worst, std::abs(s.rho_arctanh - s.rho_closed));
  }
  p.omega_opt = std::sqrt(R) * p.omega_mech;
  const SqueezeParameters z = squeeze_parameters(p, 1.0, R * std::pow(p.omega_mech / p.omega_opt, 2));
  const double at_zero = std::max(std::abs(z.rho_arctanh), std::abs(z.rho_closed));
  report(7, "squeeze cross-check", worst < 1e-10 && at_zero < 1e-12,
         "max |arctanh - closed| " + num(worst) + " (< 1e-10), |rho| at sqrt(R) Omega " + num(at_zero) + " (< 1e-12)");
}

void symmetrization() {
  const ElementaryOperators o = make_operators(make_space(8, 8));
  const ComplexMatrix s = symmetrize({{"P", o.P}, {"P", o.P}, {"x", o.X}});
  const ComplexMatrix three = (o.P * o.P * o.X + o.P * o.X * o.P + o.X * o.P * o.P) / 3.0;
  const double exact = max_abs(s - three);

  const OperatorWord word{{"p", o.Pmech}, {"p", o.Pmech}, {"x", o.X}, {"x", o.X}};
  const std::size_t distinct = distinct_orderings(word).size();
  std::vector<int> idx{0, 1, 2, 3};
  ComplexMatrix naive = ComplexMatrix::Zero(o.X.rows(), o.X.cols());
  int count = 0;
  do {
    naive += word[idx[0]].op * word[idx[1]].op * word[idx[2]].op * word[idx[3]].op;
    ++count;
  } while (std::next_permutation(idx.begin(), idx.end()));
  naive /= double(count);
  const double avg = max_abs(symmetrize(word) - naive);
  report(8, "symmetrization", exact == 0.0 && distinct == 6 && count == 24 && avg <= 1e-13,
         "three-term difference " + num(exact) + " (exact), " + std::to_string(distinct) +
             " distinct orderings, naive average difference " + num(avg) + " (<= 1e-13)");
}

void commutators() {
  const FockSpace s = make_space(16, 16);
  const ElementaryOperators o = make_operators(s);
  const ComplexMatrix eye = ComplexMatrix::Identity(s.dim(), s.dim());
  const double qp = max_abs(interior_block(s, commutator(o.Q, o.P) - std::complex<double>(0.0, 1.0) * eye));
  const ComplexMatrix c = 0.5 * o.b * o.b;
  const double cc = max_abs(interior_block(s, commutator(c, c.adjoint()) - o.m - 0.5 * eye));
  double aa = 0.0;
  for (double rho : {0.1, 1.0, 2.3637}) {
    const ComplexMatrix A = o.adag * std::sinh(rho) + o.a * std::cosh(rho);
    aa = std::max(aa, max_abs(interior_block(s, commutator(A, A.adjoint()) - eye)));
    const BogoliubovPair lib = bogoliubov_pair(rho, s);
    aa = std::max(aa, max_abs(interior_block(s, commutator(lib.A, lib.A.adjoint()) - eye)));
  }
  const double tol = 1e-12;
  report(9, "Fock-space commutators", qp <= tol && cc <= tol && aa <= tol,
         "[Q,P] " + num(qp) + ", [c,c+] " + num(cc) + ", [A,A+] " + num(aa) + " (each <= 1e-12)");
}

void relativistic() {
  CavityParams p;
  p.chi0 = 1.0;
  p.d_mirror = 0.01;
  p.omega_opt = 1.0;
  const FockSpace s = make_space(4, 4, 2);
  HamiltonianOptions o;
  o.relativistic_part = RelativisticPart::first;
  const ComplexMatrix first = build_hamiltonian(HamiltonianVariant::delta_relativistic, p, s, o).data;
  o.relativistic_part = RelativisticPart::second;
  const ComplexMatrix second = build_hamiltonian(HamiltonianVariant::delta_relativistic, p, s, o).data;
  const double half = max_abs(second + 0.5 * first);

  const RelativisticRates w = relativistic_rates(p, 6);
  long mismatches = 0;
  for (int k = 1; k <= 6; ++k)
    for (int j = 1; j <= 6; ++j)
      if (w.w(k - 1, j - 1) != std::sqrt(double(k) * j) * w.w11) ++mismatches;

  p.light_speed = 1e12;
  o.relativistic_part = RelativisticPart::total;
  const double vanish = max_abs(build_hamiltonian(HamiltonianVariant::delta_relativistic, p, make_space(4, 4), o).data);
  report(10, "relativistic structure", half <= 1e-12 && mismatches == 0 && vanish < 1e-12,
         "max |dH2 + dH1/2| " + num(half) + " (<= 1e-12), " + std::to_string(mismatches) +
             " w_kj/w_11 mismatches, max |dH| at c = 1e12 " + num(vanish) + " (< 1e-12)");
}

double mech_diagonal_block(const ComplexMatrix& h, const FockSpace& s) {
  const long od = s.optical_dim();
  double worst = 0.0;
  for (long i = 0; i < s.dim(); ++i)
    for (long j = 0; j < s.dim(); ++j)
      if (i / od == j / od) worst = std::max(worst, std::abs(h(i, j)));
  return worst;
}

void special_case() {
  CavityParams p;
  p.abar_mag = 1.0;
  p.abar_phase = 0.0;
  const FockSpace s = make_space(8, 8);
  HamiltonianOptions o;
  o.eta = 0.5;
  const double mblock = mech_diagonal_block(build_hamiltonian(HamiltonianVariant::H4_special_eta, p, s, o).data, s);

  o.eta = 1e6;
  const ComplexMatrix hs = build_hamiltonian(HamiltonianVariant::H4_special_eta, p, s, o).data;
  CavityParams pl = p;
  pl.omega_opt = special_case_frequency(o.eta, p);
  HamiltonianOptions large;
  large.branch = Branch::omega_large;
  const ComplexMatrix hx = build_hamiltonian(HamiltonianVariant::H4_linear_optical, pl, s, large).data;
  const double dev = max_abs(hs - hx);
  report(11, "special case", mblock <= 1e-12 && dev <= 1e-4,
         "eta = 1/2 m-block " + num(mblock) + " (<= 1e-12), eta = 1e6 max deviation from the x^2 branch " + num(dev) +
             " (<= 1e-4)");
}

void spectrum_comparison() {
  CavityParams p;
  p.length = 100.0;
  p.omega_opt = 10.0;
  const double theta = base_rates(p).theta;
  const GroundStateComparison g = compare_ground_states(p, make_space(8, 8));
  report(12, "spectrum comparison", g.relative_error <= 0.1 && g.exact_shift < 0.0,
         "theta " + num(theta) + ", exact shift " + num(g.exact_shift) + ", first order " + num(g.first_order) +
             ", relative error " + num(g.relative_error) + " (<= 0.1), sign negative");
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void cli_determinism(const std::string& cli) {
  if (cli.empty()) {
    report(13, "CLI determinism", false, "no CLI path given");
    return;
  }
  const auto dir = std::filesystem::temp_directory_path() / ("optomech_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"length": 20.0, "omega_opt": 5.0, "abar_mag": 1.0, "kmax": 3})";
  int rc[2];
  std::string out[2];
  for (int i = 0; i < 2; ++i) {
    const auto file = dir / ("run" + std::to_string(i) + ".json");
    const std::string cmd = "\"" + cli + "\" checks --config \"" + cfg.string() + "\" > \"" + file.string() + "\" 2>/dev/null";
    rc[i] = std::system(cmd.c_str());
    out[i] = slurp(file);
  }
  std::filesystem::remove_all(dir);
  const bool same = !out[0].empty() && out[0] == out[1];
  report(13, "CLI determinism", same && rc[0] == 0 && rc[1] == 0,
         std::string(same ? "identical" : "different") + " output (" + std::to_string(out[0].size()) + " bytes), exit codes " +
             std::to_string(rc[0]) + " " + std::to_string(rc[1]));
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  series_identity();
  gram_identity();
  d_is_sym_h();
  truncated_dynamics();
  energy_conservation();
  rate_chain();
  squeeze_cross_check();
  symmetrization();
  commutators();
  relativistic();
  special_case();
  spectrum_comparison();
  cli_determinism(cli);
  std::cout << (13 - failures) << "/13 criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
