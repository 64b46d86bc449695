#include "guesswork/model/joint.hpp"

#include <cmath>

#include "guesswork/error.hpp"
#include "guesswork/linalg/hermitian.hpp"

namespace guesswork {

JointDistribution::JointDistribution(std::vector<std::vector<double>> p, double tol) : p_(std::move(p)) {
  require(!p_.empty() && !p_[0].empty(), "joint distribution: empty table");
  double total = 0.0;
  for (const auto& row : p_) {
    require(row.size() == p_[0].size(), "joint distribution: ragged table");
    for (double v : row) {
      require(std::isfinite(v) && v >= 0.0, "joint distribution: entries must be finite and nonnegative");
      total += v;
    }
  }
  require(std::abs(total - 1.0) <= tol, "joint distribution: entries sum to " + std::to_string(total) + ", not 1");
}

JointDistribution JointDistribution::from_measurement(const CqEnsemble& ens, const OutcomePovm& povm) {
  validate_povm(povm, ens.dim());
  std::vector<std::vector<double>> p(ens.size(), std::vector<double>(povm.size()));
  for (std::size_t x = 0; x < ens.size(); ++x)
    for (std::size_t y = 0; y < povm.size(); ++y)
      p[x][y] = std::max(0.0, ens.prob(x) * linalg::inner(povm.elements[y].op, ens.state(x)));
  return JointDistribution(std::move(p), 1e-7);
}

CqEnsemble JointDistribution::to_ensemble(const std::vector<std::string>& letters) const {
  require(letters.size() == x_size(), "to_ensemble: letter count differs from |X|");
  std::vector<HermitianMatrix> states;
  const auto px = marginal_x();
  for (std::size_t x = 0; x < x_size(); ++x) {
    std::vector<double> d(y_size(), 0.0);
    if (px[x] > 0.0) {
      for (std::size_t y = 0; y < y_size(); ++y) d[y] = p_[x][y] / px[x];
    } else {
      d[0] = 1.0;
    }
    states.push_back(HermitianMatrix::diagonal(d));
  }
  return CqEnsemble(letters, px, std::move(states));
}

std::vector<double> JointDistribution::marginal_x() const {
  std::vector<double> m(x_size(), 0.0);
  for (std::size_t x = 0; x < x_size(); ++x)
    for (double v : p_[x]) m[x] += v;
  return m;
}

std::vector<double> JointDistribution::marginal_y() const {
  std::vector<double> m(y_size(), 0.0);
  for (const auto& row : p_)
    for (std::size_t y = 0; y < row.size(); ++y) m[y] += row[y];
  return m;
}

namespace examples {

JointDistribution classical_bb84_table() {
  return JointDistribution({{0.25, 0.0}, {0.0, 0.25}, {0.125, 0.125}, {0.125, 0.125}});
}

}  // namespace examples

}  // namespace guesswork
