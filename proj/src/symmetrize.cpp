#include "optomech/symmetrize.hpp"

#include <algorithm>
#include <numeric>

namespace optomech {
namespace {

void validate_word(const OperatorWord& word) {
  if (word.empty()) throw std::invalid_argument("empty operator word");
  if (word.size() > static_cast<std::size_t>(kMaxWordLength))
    throw CombinatorialLimitError("words longer than 8 factors are not enumerated");
  const auto rows = word.front().op.rows();
  for (const auto& f : word)
    if (f.op.rows() != rows || f.op.cols() != rows) throw std::invalid_argument("word factors differ in dimension");
  for (std::size_t i = 0; i < word.size(); ++i)
    for (std::size_t j = i + 1; j < word.size(); ++j)
      if (word[i].label == word[j].label && word[i].op != word[j].op)
        throw std::invalid_argument("label '" + word[i].label + "' bound to different matrices");
}

}  // namespace

std::vector<std::vector<int>> distinct_orderings(const OperatorWord& word) {
  validate_word(word);
  std::vector<int> order(word.size());
  std::iota(order.begin(), order.end(), 0);
  auto by_label = [&](int x, int y) { return word[x].label < word[y].label; };
  std::stable_sort(order.begin(), order.end(), by_label);
  // Permute label ranks; map each rank sequence back to the first index with that label.
  std::vector<int> rank(word.size());
  std::vector<int> representative;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || word[order[i]].label != word[order[i - 1]].label) representative.push_back(order[i]);
    rank[i] = static_cast<int>(representative.size()) - 1;
  }
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> seq(rank.size());
    for (std::size_t i = 0; i < rank.size(); ++i) seq[i] = representative[rank[i]];
    out.push_back(std::move(seq));
  } while (std::next_permutation(rank.begin(), rank.end()));
  return out;
}

ComplexMatrix symmetrize(const OperatorWord& word) {
  const auto orderings = distinct_orderings(word);
  const auto n = word.front().op.rows();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& seq : orderings) {
    ComplexMatrix product = word[seq[0]].op;
    for (std::size_t i = 1; i < seq.size(); ++i) product = product * word[seq[i]].op;
    sum += product;
  }
  return sum / static_cast<double>(orderings.size());
}

OperatorMatrix symmetrize(const FockSpace& space, const OperatorWord& word) {
  space.validate();
  ComplexMatrix data = symmetrize(word);
  if (data.rows() != space.dim()) throw std::invalid_argument("word does not act on the given space");
  return {space, std::move(data)};
}

std::vector<double> expand_inverse_power(double n, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("expansion order must be 0, 1 or 2");
  std::vector<double> c(order + 1);
  c[0] = 1.0;
  for (int i = 1; i <= order; ++i) c[i] = c[i - 1] * (-n - (i - 1)) / i;
  return c;
}

}  // namespace optomech
