#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "optomech/fock_space.hpp"

namespace optomech {

inline constexpr int kMaxWordLength = 8;

struct Factor {
  std::string label;
  ComplexMatrix op;
};

// Factors with equal labels must carry equal matrices.
using OperatorWord = std::vector<Factor>;

class CombinatorialLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Distinct orderings of the word's label multiset, in lexicographic label
// order; each entry lists indices into the word. n!/(prod mult!) entries.
std::vector<std::vector<int>> distinct_orderings(const OperatorWord& word);

// Average of the products over all distinct orderings. Equal to the average
// over all n! permutations, and independent of the order of the input word.
ComplexMatrix symmetrize(const OperatorWord& word);
OperatorMatrix symmetrize(const FockSpace& space, const OperatorWord& word);

// Coefficients c_0..c_order of (1 + x)^(-n) = sum c_i x^i; n may be any real.
std::vector<double> expand_inverse_power(double n, int order);

}  // namespace optomech
