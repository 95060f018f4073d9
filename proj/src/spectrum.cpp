#include "optomech/spectrum.hpp"

#include <algorithm>

namespace optomech {

SpectrumResult spectrum(const ComplexMatrix& h, int count) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("spectrum needs a nonempty square matrix");
  SpectrumResult out;
  out.norm = max_abs(h);
  if (hermiticity_defect(h) > 1e-10 * out.norm) throw NonHermitianError("matrix is not Hermitian");
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");
  const Eigen::Index n = (count <= 0 || count > h.rows()) ? h.rows() : count;
  out.eigenvalues = solver.eigenvalues().head(n);
  out.eigenvectors = solver.eigenvectors().leftCols(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = (h * out.eigenvectors.col(i) - out.eigenvalues(i) * out.eigenvectors.col(i)).norm();
    out.max_residual = std::max(out.max_residual, r);
  }
  return out;
}

}  // namespace optomech
