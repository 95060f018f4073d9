#pragma once

#include <stdexcept>
#include <vector>
#include <Eigen/Dense>

namespace optomech {

using ComplexMatrix = Eigen::MatrixXcd;

class CutoffError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mechanical mode tensored with n_modes_opt optical modes; the mechanical
// index is the slowest-varying one.
struct FockSpace {
  int n_mech = 8;
  int n_opt = 8;
  int n_modes_opt = 1;
  long cap = 4096;

  void validate() const;
  long dim() const;
  long optical_dim() const;
  bool operator==(const FockSpace&) const = default;
};

FockSpace make_space(int n_mech, int n_opt, int n_modes_opt = 1, long cap = 4096);

struct OperatorMatrix {
  FockSpace space;
  ComplexMatrix data;
};

// Single-mode ladder matrices on |0..n-1>.
ComplexMatrix annihilation(int n);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Lift single-subsystem matrices to the full space.
ComplexMatrix embed_mech(const FockSpace& space, const ComplexMatrix& m);
ComplexMatrix embed_opt(const FockSpace& space, const ComplexMatrix& m, int mode = 0);
// Tensor product of one mechanical factor and one factor per optical mode.
ComplexMatrix tensor(const FockSpace& space, const ComplexMatrix& mech, const std::vector<ComplexMatrix>& opt);

struct ElementaryOperators {
  FockSpace space;
  ComplexMatrix identity;
  ComplexMatrix a, adag, n;  // first optical mode
  ComplexMatrix b, bdag, m;  // mechanical
  ComplexMatrix Q, P;        // (a^+ + a)/sqrt2, i(a^+ - a)/sqrt2
  ComplexMatrix X, Pmech;    // (b^+ + b)/sqrt2, i(b^+ - b)/sqrt2
  std::vector<ComplexMatrix> a_modes;
};

ElementaryOperators make_operators(const FockSpace& space);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Rows and columns whose levels are all below (cutoff - margin) in every subsystem.
std::vector<Eigen::Index> interior_indices(const FockSpace& space, int margin = 2);
ComplexMatrix interior_block(const FockSpace& space, const ComplexMatrix& m, int margin = 2);

double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);

// One oscillator on an enlarged basis. Polynomials built here and then
// compressed to the leading n x n block have exact matrix elements, free of
// the corruption that products of truncated ladders show near the cutoff.
class PaddedMode {
 public:
  explicit PaddedMode(int n, int pad = 8);

  int size() const { return n_; }
  int padded_size() const { return n_ + pad_; }
  const ComplexMatrix& a() const { return a_; }
  const ComplexMatrix& adag() const { return adag_; }
  const ComplexMatrix& number() const { return number_; }
  const ComplexMatrix& position() const { return position_; }  // (a^+ + a)/sqrt2
  const ComplexMatrix& momentum() const { return momentum_; }  // i(a^+ - a)/sqrt2
  ComplexMatrix identity() const;
  ComplexMatrix compress(const ComplexMatrix& m) const;

 private:
  int n_;
  int pad_;
  ComplexMatrix a_, adag_, number_, position_, momentum_;
};

}  // namespace optomech
