#pragma once
// Shared generators for the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "guesswork/linalg/hermitian.hpp"
#include "guesswork/linalg/matrix.hpp"
#include "guesswork/model/ensemble.hpp"

namespace gw_test {

using guesswork::linalg::CMatrix;
using guesswork::linalg::cplx;
using guesswork::linalg::HermitianMatrix;

inline CMatrix random_ginibre(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n);
  for (auto& v : m.entries()) v = cplx(g(rng), g(rng));
  return m;
}

inline HermitianMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  return HermitianMatrix(random_ginibre(n, rng));
}

inline HermitianMatrix random_density(std::size_t n, std::mt19937_64& rng) {
  const CMatrix g = random_ginibre(n, rng);
  HermitianMatrix r(g * g.adjoint());
  return r * (1.0 / r.trace());
}

inline std::vector<cplx> random_pure(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(n);
  double norm = 0.0;
  for (auto& z : v) {
    z = cplx(g(rng), g(rng));
    norm += std::norm(z);
  }
  for (auto& z : v) z /= std::sqrt(norm);
  return v;
}

inline std::vector<double> random_distribution(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (auto& v : p) s += (v = e(rng));
  for (auto& v : p) v /= s;
  return p;
}

inline guesswork::CqEnsemble random_ensemble(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::vector<std::string> letters;
  std::vector<HermitianMatrix> states;
  for (std::size_t i = 0; i < n; ++i) {
    letters.push_back(std::string(1, static_cast<char>('a' + i)));
    states.push_back(random_density(d, rng));
  }
  return guesswork::CqEnsemble(letters, random_distribution(n, rng), states);
}

/// Random real-amplitude pure qubit ensemble with random probabilities.
inline guesswork::CqEnsemble random_real_qubits(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, M_PI);
  std::vector<std::string> letters;
  std::vector<HermitianMatrix> states;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = angle(rng);
    const std::vector<cplx> psi{std::cos(a), std::sin(a)};
    letters.push_back(std::string(1, static_cast<char>('a' + i)));
    states.push_back(HermitianMatrix::projector(psi));
  }
  return guesswork::CqEnsemble(letters, random_distribution(n, rng), states);
}

/// Brute-force upper bound for real qubit ensembles with standard costs:
/// minimum over `points` angles in [0, pi) of the expected number of guesses
/// when measuring {|t><t|, |t_perp><t_perp|} and guessing each outcome's
/// posterior in nonincreasing order.
inline double theta_grid_oracle(const guesswork::CqEnsemble& ens, std::size_t points) {
  const std::size_t n = ens.size();
  std::vector<double> a(n), b(n), c(n), w(n);
  for (std::size_t x = 0; x < n; ++x) {
    const auto& r = ens.state(x);
    a[x] = ens.prob(x) * r(0, 0).real();
    b[x] = ens.prob(x) * r(1, 1).real();
    c[x] = ens.prob(x) * r(0, 1).real();
  }
  double best = 1e300;
  for (std::size_t i = 0; i < points; ++i) {
    const double t = M_PI * static_cast<double>(i) / static_cast<double>(points);
    const double ct = std::cos(t), st = std::sin(t);
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
      const double u = side == 0 ? ct : -st, v = side == 0 ? st : ct;
      for (std::size_t x = 0; x < n; ++x) w[x] = a[x] * u * u + b[x] * v * v + 2 * c[x] * u * v;
      std::sort(w.begin(), w.end(), std::greater<double>());
      for (std::size_t k = 0; k < n; ++k) total += static_cast<double>(k + 1) * w[k];
    }
    best = std::min(best, total);
  }
  return best;
}

/// m POVM elements S^{-1/2} G_i S^{-1/2} from random PSD G_i of the given rank.
inline std::vector<HermitianMatrix> random_povm_ops(std::size_t m, std::size_t d, std::size_t rank,
                                                    std::mt19937_64& rng) {
  std::vector<HermitianMatrix> g;
  HermitianMatrix total(d);
  for (std::size_t i = 0; i < m; ++i) {
    HermitianMatrix gi(d);
    for (std::size_t r = 0; r < rank; ++r) gi += HermitianMatrix::projector(random_pure(d, rng));
    total += gi;
    g.push_back(gi);
  }
  const HermitianMatrix w = guesswork::linalg::sqrt_psd(guesswork::linalg::pinv_psd(total));
  for (auto& gi : g) gi = guesswork::linalg::congruence(w.matrix(), gi);
  g.front() += HermitianMatrix::identity(d) - guesswork::linalg::support_projector(total);
  return g;
}

/// Ordered POVM on `m` distinct random orders of length K.
inline guesswork::OrderPovm random_order_povm(std::size_t n, std::size_t K, std::size_t d, std::size_t m,
                                              std::size_t rank, std::mt19937_64& rng) {
  std::vector<guesswork::GuessOrder> all;
  for (const auto& g : guesswork::enumerate_orders(n, K)) all.push_back(g);
  std::shuffle(all.begin(), all.end(), rng);
  m = std::min(m, all.size());
  const auto ops = random_povm_ops(m, d, rank, rng);
  guesswork::OrderPovm p;
  for (std::size_t i = 0; i < m; ++i) p.elements.push_back({all[i], ops[i]});
  return p;
}

}  // namespace gw_test
