#include "optomech/fock_space.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace optomech {
namespace {

const std::complex<double> kI(0.0, 1.0);

}  // namespace

void FockSpace::validate() const {
  if (n_mech < 2 || n_opt < 2) throw CutoffError("cutoffs must be >= 2");
  if (n_modes_opt < 1 || n_modes_opt > 2) throw CutoffError("only 1 or 2 optical modes are supported");
  if (dim() > cap)
    throw CutoffError("space dimension " + std::to_string(dim()) + " exceeds cap " + std::to_string(cap));
}

long FockSpace::optical_dim() const {
  long d = 1;
  for (int i = 0; i < n_modes_opt; ++i) d *= n_opt;
  return d;
}

long FockSpace::dim() const { return static_cast<long>(n_mech) * optical_dim(); }

FockSpace make_space(int n_mech, int n_opt, int n_modes_opt, long cap) {
  FockSpace s{n_mech, n_opt, n_modes_opt, cap};
  s.validate();
  return s;
}

ComplexMatrix annihilation(int n) {
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix tensor(const FockSpace& space, const ComplexMatrix& mech, const std::vector<ComplexMatrix>& opt) {
  if (static_cast<int>(opt.size()) != space.n_modes_opt) throw std::invalid_argument("one factor per optical mode");
  if (mech.rows() != space.n_mech) throw std::invalid_argument("mechanical factor has wrong size");
  ComplexMatrix out = mech;
  for (const auto& f : opt) {
    if (f.rows() != space.n_opt) throw std::invalid_argument("optical factor has wrong size");
    out = kron(out, f);
  }
  return out;
}

ComplexMatrix embed_mech(const FockSpace& space, const ComplexMatrix& m) {
  std::vector<ComplexMatrix> opt(space.n_modes_opt, ComplexMatrix::Identity(space.n_opt, space.n_opt));
  return tensor(space, m, opt);
}

ComplexMatrix embed_opt(const FockSpace& space, const ComplexMatrix& m, int mode) {
  if (mode < 0 || mode >= space.n_modes_opt) throw std::out_of_range("optical mode index out of range");
  std::vector<ComplexMatrix> opt(space.n_modes_opt, ComplexMatrix::Identity(space.n_opt, space.n_opt));
  opt[mode] = m;
  return tensor(space, ComplexMatrix::Identity(space.n_mech, space.n_mech), opt);
}

ElementaryOperators make_operators(const FockSpace& space) {
  space.validate();
  ElementaryOperators ops;
  ops.space = space;
  const double s = std::numbers::sqrt2;
  const ComplexMatrix am = annihilation(space.n_mech);
  const ComplexMatrix ao = annihilation(space.n_opt);
  ops.identity = ComplexMatrix::Identity(space.dim(), space.dim());
  for (int k = 0; k < space.n_modes_opt; ++k) ops.a_modes.push_back(embed_opt(space, ao, k));
  ops.a = ops.a_modes.front();
  ops.adag = ops.a.adjoint();
  ops.n = ops.adag * ops.a;
  ops.b = embed_mech(space, am);
  ops.bdag = ops.b.adjoint();
  ops.m = ops.bdag * ops.b;
  ops.Q = (ops.adag + ops.a) / s;
  ops.P = kI * (ops.adag - ops.a) / s;
  ops.X = (ops.bdag + ops.b) / s;
  ops.Pmech = kI * (ops.bdag - ops.b) / s;
  return ops;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("commutator of mismatched matrices");
  return a * b - b * a;
}

std::vector<Eigen::Index> interior_indices(const FockSpace& space, int margin) {
  std::vector<Eigen::Index> idx;
  const long od = space.optical_dim();
  for (long i = 0; i < space.dim(); ++i) {
    bool inside = i / od < space.n_mech - margin;
    long rest = i % od;
    for (int k = 0; k < space.n_modes_opt && inside; ++k) {
      inside = rest % space.n_opt < space.n_opt - margin;
      rest /= space.n_opt;
    }
    if (inside) idx.push_back(i);
  }
  return idx;
}

ComplexMatrix interior_block(const FockSpace& space, const ComplexMatrix& m, int margin) {
  if (m.rows() != space.dim() || m.cols() != space.dim()) throw std::invalid_argument("matrix does not match space");
  const auto idx = interior_indices(space, margin);
  return m(idx, idx);
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_defect(const ComplexMatrix& m) { return max_abs(m - m.adjoint()); }

PaddedMode::PaddedMode(int n, int pad) : n_(n), pad_(pad) {
  if (n < 1 || pad < 0) throw std::invalid_argument("invalid padded mode size");
  const double s = std::numbers::sqrt2;
  a_ = annihilation(n + pad);
  adag_ = a_.adjoint();
  number_ = adag_ * a_;
  position_ = (adag_ + a_) / s;
  momentum_ = kI * (adag_ - a_) / s;
}

ComplexMatrix PaddedMode::identity() const { return ComplexMatrix::Identity(n_ + pad_, n_ + pad_); }

ComplexMatrix PaddedMode::compress(const ComplexMatrix& m) const { return m.topLeftCorner(n_, n_); }

}  // namespace optomech
