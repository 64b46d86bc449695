#pragma once
// The three strategy forms (ordered POVM, sequential measurements, measured
// POVM with classical post-processing), compilations between them, and the
// distribution of the number of guesses N.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "guesswork/model/ensemble.hpp"

namespace guesswork {

/// Step j (0-based) after outcomes h = (x_1..x_j) applies {M_x^{(j+1|h)}}.
/// Only reachable histories are stored.
struct SequentialStrategy {
  std::size_t alphabet = 0;
  std::size_t dim = 0;
  std::size_t steps = 0;  // K
  std::map<std::vector<int>, std::vector<CMatrix>> operators;

  /// Throws Validation unless each stored family satisfies sum M^dag M = I.
  void validate(double tol = 1e-8) const;
};

struct MeasuredStrategy {
  OutcomePovm povm;
  /// postprocess[i] is p(g | y_i) for the i-th POVM element.
  std::vector<std::vector<std::pair<GuessOrder, double>>> postprocess;

  void validate(std::size_t dim, double tol = 1e-12) const;
};

using Strategy = std::variant<OrderPovm, SequentialStrategy, MeasuredStrategy>;

struct GuessDistribution {
  std::vector<double> p;  // p[k-1] = Pr[N = k], k = 1..K
  double p_inf = 0.0;
};

struct GuessReport {
  GuessDistribution distribution;
  double expected_cost = 0.0;  // +inf when c_inf = inf and p_inf > 0
};

/// p(g | x) for every order with weight; rows indexed by letter.
using JointGuessTable = std::map<GuessOrder, std::vector<double>>;

JointGuessTable joint_guess_table(const CqEnsemble& ens, const Strategy& s);

GuessReport guess_distribution(const CqEnsemble& ens, const Strategy& s, const CostVector& cv);

/// Recursive square-root construction with pseudo-inverses on the support.
/// Throws Numerical if the compiled strategy does not reproduce the POVM to 1e-8.
SequentialStrategy ordered_to_sequential(const OrderPovm& povm, std::size_t alphabet);

/// E_{x_1..x_K} = A^dag A with A = M^{(K|..)} ... M^{(1)}; elements of zero weight are dropped.
OrderPovm sequential_to_ordered(const SequentialStrategy& s);

/// E_g = sum_y p(g|y) E_y.
OrderPovm measured_to_ordered(const MeasuredStrategy& m);

/// Keeps first occurrences and fills the freed positions with unused letters in increasing order.
GuessOrder deduplicated(const GuessOrder& g, std::size_t alphabet);

/// Adds each repeated-entry element onto its deduplicated order.
OrderPovm merge_repeats(const OrderPovm& povm, std::size_t alphabet);

}  // namespace guesswork
