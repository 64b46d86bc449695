#include "guesswork/model/examples.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "guesswork/error.hpp"

namespace guesswork::examples {

namespace {

HermitianMatrix real_qubit(double c, double s) {
  const std::vector<cplx> psi{c, s};
  return HermitianMatrix::projector(psi);
}

}  // namespace

CqEnsemble bb84_family(double phi) {
  std::vector<HermitianMatrix> states{
      real_qubit(1.0, 0.0),
      real_qubit(0.0, 1.0),
      real_qubit(std::cos(phi / 2), std::sin(phi / 2)),
      real_qubit(std::cos(-phi / 2), std::sin(-phi / 2)),
  };
  return CqEnsemble::uniform({"0", "1", "+", "-"}, std::move(states));
}

CqEnsemble bb84() { return bb84_family(std::numbers::pi / 2); }

CqEnsemble classical_bb84() {
  const HermitianMatrix mixed = HermitianMatrix::identity(2) * 0.5;
  return CqEnsemble::uniform({"0", "1", "+", "-"},
                             {real_qubit(1.0, 0.0), real_qubit(0.0, 1.0), mixed, mixed});
}

CqEnsemble trine() {
  std::vector<HermitianMatrix> states;
  for (int k = 1; k <= 3; ++k) {
    const double a = 2 * std::numbers::pi * k / 3;
    states.push_back(real_qubit(std::cos(a), std::sin(a)));
  }
  return CqEnsemble::uniform({"1", "2", "3"}, std::move(states));
}

CqEnsemble random_pure(std::size_t n, std::size_t d, std::uint64_t seed) {
  require(n >= 1 && d >= 1, "random_pure: need n >= 1 and d >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::string> letters;
  std::vector<HermitianMatrix> states;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<cplx> psi(d);
    double norm = 0.0;
    for (auto& z : psi) {
      z = cplx(g(rng), g(rng));
      norm += std::norm(z);
    }
    for (auto& z : psi) z /= std::sqrt(norm);
    letters.push_back("x" + std::to_string(i + 1));
    states.push_back(HermitianMatrix::projector(psi));
  }
  return CqEnsemble::uniform(std::move(letters), std::move(states));
}

CqEnsemble uninformative(std::size_t n, std::size_t d) {
  require(n >= 1 && d >= 1, "uninformative: need n >= 1 and d >= 1");
  std::vector<std::string> letters;
  for (std::size_t i = 0; i < n; ++i) letters.push_back("x" + std::to_string(i + 1));
  const HermitianMatrix mixed = HermitianMatrix::identity(d) * (1.0 / static_cast<double>(d));
  return CqEnsemble::uniform(std::move(letters), std::vector<HermitianMatrix>(n, mixed));
}

}  // namespace guesswork::examples
