#pragma once
// Classical joint distributions p(x, y) over finite alphabets.

#include <cstddef>
#include <vector>

#include "guesswork/model/ensemble.hpp"

namespace guesswork {

/// Row x, column y. Entries nonnegative and summing to one within `tol`.
class JointDistribution {
 public:
  explicit JointDistribution(std::vector<std::vector<double>> p, double tol = 1e-10);

  /// p(x, y) = p(x) tr(E_y rho_x).
  static JointDistribution from_measurement(const CqEnsemble& ens, const OutcomePovm& povm);

  /// The c-q ensemble with diagonal states rho_x = sum_y p(y|x) |y><y|.
  CqEnsemble to_ensemble(const std::vector<std::string>& letters) const;

  std::size_t x_size() const noexcept { return p_.size(); }
  std::size_t y_size() const noexcept { return p_.empty() ? 0 : p_[0].size(); }
  double operator()(std::size_t x, std::size_t y) const { return p_[x][y]; }
  const std::vector<std::vector<double>>& table() const noexcept { return p_; }

  std::vector<double> marginal_x() const;
  std::vector<double> marginal_y() const;

 private:
  std::vector<std::vector<double>> p_;
};

namespace examples {

/// X uniform over {0, 1, +, -}, Y a standard-basis measurement of the BB84 state.
JointDistribution classical_bb84_table();

}  // namespace examples

}  // namespace guesswork
