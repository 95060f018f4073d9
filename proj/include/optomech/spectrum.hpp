#pragma once

#include <stdexcept>
#include <Eigen/Dense>

#include "optomech/fock_space.hpp"

namespace optomech {

class NonHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;  // ascending
  ComplexMatrix eigenvectors;   // columns
  double max_residual = 0.0;    // max ||H v - lambda v|| over returned pairs
  double norm = 0.0;            // ||H||_max
};

// Lowest `count` eigenpairs (count <= 0 or > dim returns all). Rejects
// matrices with ||H - H^+||_max > 1e-10 ||H||_max.
SpectrumResult spectrum(const ComplexMatrix& h, int count = 0);

}  // namespace optomech
