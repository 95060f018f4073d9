#include <doctest.h>

#include <cmath>
#include <complex>

#include "optomech/fock_space.hpp"
#include "optomech/hamiltonians.hpp"
#include "optomech/spectrum.hpp"

using namespace optomech;

namespace {

const std::complex<double> kI(0.0, 1.0);

}  // namespace

TEST_CASE("ladder matrices") {
  const ComplexMatrix a = annihilation(5);
  CHECK(a(0, 1) == 1.0);
  CHECK(a(1, 2) == std::sqrt(2.0));
  CHECK(a(3, 4) == 2.0);
  CHECK(a(1, 0) == 0.0);
}

TEST_CASE("space layout and limits") {
  const FockSpace s = make_space(3, 4);
  CHECK(s.dim() == 12);
  const ElementaryOperators ops = make_operators(s);
  // |n_b = 1, n_a = 2> has index 1 * 4 + 2.
  CHECK(ops.m(6, 6).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ops.n(6, 6).real() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(make_space(1, 4), CutoffError);
  CHECK_THROWS_AS(make_space(100, 100), CutoffError);
  CHECK_THROWS_AS(make_space(4, 4, 3), CutoffError);
  CHECK(make_space(4, 4, 2).dim() == 64);
  CHECK(interior_indices(s, 2).size() == 1 * 2);
}

TEST_CASE("quadrature commutators on the interior block") {
  const FockSpace s = make_space(16, 16);
  const ElementaryOperators ops = make_operators(s);
  const ComplexMatrix eye = ComplexMatrix::Identity(s.dim(), s.dim());
  CHECK(max_abs(interior_block(s, commutator(ops.Q, ops.P) - kI * eye)) < 1e-13);
  CHECK(max_abs(interior_block(s, commutator(ops.X, ops.Pmech) - kI * eye)) < 1e-13);
  CHECK(max_abs(interior_block(s, commutator(ops.a, ops.adag) - eye)) < 1e-14);
  // Truncation spoils the last level.
  CHECK(max_abs(commutator(ops.a, ops.adag) - eye) > 1.0);
  CHECK(max_abs(commutator(ops.b, ops.n)) == 0.0);
}

TEST_CASE("P^2 + Q^2 = 2n + 1") {
  const FockSpace s = make_space(4, 10);
  const ElementaryOperators ops = make_operators(s);
  const ComplexMatrix lhs = ops.P * ops.P + ops.Q * ops.Q;
  const ComplexMatrix rhs = 2.0 * ops.n + ComplexMatrix::Identity(s.dim(), s.dim());
  CHECK(max_abs(interior_block(s, lhs - rhs, 1)) < 1e-14);
}

TEST_CASE("padded polynomials are exact") {
  const PaddedMode m(6);
  const ComplexMatrix x4 = m.compress(m.position() * m.position() * m.position() * m.position());
  // <n|x^4|n> = (6n^2 + 6n + 3)/4
  for (int n = 0; n < 6; ++n) CHECK(x4(n, n).real() == doctest::Approx((6.0 * n * n + 6.0 * n + 3.0) / 4.0).epsilon(1e-14));
  const ComplexMatrix a = annihilation(6);
  const ComplexMatrix q = (a + a.adjoint()) / std::sqrt(2.0);
  const ComplexMatrix naive = q * q * q * q;
  CHECK(std::abs(naive(5, 5) - x4(5, 5)) > 1.0);
}

TEST_CASE("Bogoliubov pair") {
  const FockSpace s = make_space(12, 12);
  const BogoliubovPair p0 = bogoliubov_pair(0.0, s);
  const ElementaryOperators ops = make_operators(s);
  CHECK(max_abs(p0.A - ops.a) == 0.0);
  CHECK(max_abs(p0.B - ops.bdag) == 0.0);
  const ComplexMatrix eye = ComplexMatrix::Identity(s.dim(), s.dim());
  for (double rho : {0.1, 1.0, 2.3637}) {
    const BogoliubovPair p = bogoliubov_pair(rho, s);
    CHECK(max_abs(interior_block(s, commutator(p.A, p.A.adjoint()) - eye)) < 1e-12);
  }
  // Complex rho breaks the unit commutator.
  const BogoliubovPair pc = bogoliubov_pair(std::complex<double>(1.0, -0.5), s);
  CHECK(max_abs(interior_block(s, commutator(pc.A, pc.A.adjoint()) - eye)) > 1e-3);
}

TEST_CASE("squared annihilator") {
  const FockSpace s = make_space(32, 2);
  const SquaredAnnihilator c = squared_annihilator(s);
  CHECK(c.commutator(0, 0).real() == doctest::Approx(0.5).epsilon(1e-15));
  for (int m = 0; m <= 32 - 3; ++m) {
    const long idx = static_cast<long>(m) * 2;
    CHECK(c.commutator(idx, idx).real() == doctest::Approx(m + 0.5).epsilon(1e-14));
  }
  // Truncated coherent state |z>, z = 1, in the optical vacuum.
  const double z = 1.0;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(s.dim());
  double coeff = std::exp(-0.5 * z * z);
  for (int n = 0; n < 32; ++n) {
    psi(2 * n) = coeff;
    coeff *= z / std::sqrt(n + 1.0);
  }
  CHECK((c.c * psi - 0.5 * z * z * psi).norm() < 1e-6);
  CHECK_THROWS_AS(squared_annihilator(make_space(3, 2)), CutoffError);
}

TEST_CASE("spectrum") {
  const FockSpace s = make_space(6, 6);
  CavityParams p;
  p.omega_mech = 1.0;
  p.omega_opt = std::sqrt(2.0);
  const OperatorMatrix h = build_hamiltonian(HamiltonianVariant::H012, p, s);
  const SpectrumResult sp = spectrum(h.data, 5);
  std::vector<double> expect;
  for (int nb = 0; nb < 6; ++nb)
    for (int na = 0; na < 6; ++na) expect.push_back((nb + 0.5) + std::sqrt(2.0) * (na + 0.5));
  std::sort(expect.begin(), expect.end());
  for (int i = 0; i < 5; ++i) CHECK(sp.eigenvalues(i) == doctest::Approx(expect[i]).epsilon(1e-13));
  CHECK(sp.max_residual <= 1e-9 * sp.norm);
  ComplexMatrix bad = h.data;
  bad(0, 1) += 1.0;
  CHECK_THROWS_AS(spectrum(bad), NonHermitianError);
}
