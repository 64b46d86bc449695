#include "guesswork/entropy/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "guesswork/error.hpp"
#include "guesswork/linalg/hermitian.hpp"
#include "guesswork/solver/guesswork.hpp"

namespace guesswork {

namespace {

void check_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha > 0.0 && alpha != 1.0, "Renyi order alpha must lie in (0,1) or (1,inf)");
}

OutcomePovm basis_povm(const CMatrix& u) {
  const std::size_t d = u.dim();
  OutcomePovm p;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<cplx> col(d);
    for (std::size_t i = 0; i < d; ++i) col[i] = u(i, k);
    p.elements.push_back({"b" + std::to_string(k + 1), HermitianMatrix::projector(col)});
  }
  return p;
}

// Columns of a unitary drawn from the eigenvectors of a random Gaussian Hermitian matrix.
CMatrix random_basis(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix a(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = cplx(g(rng), g(rng));
  return linalg::eig(HermitianMatrix(a)).vectors;
}

CMatrix qubit_basis(double theta, double phi) {
  CMatrix u(2);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx e = std::polar(1.0, phi);
  u(0, 0) = c;
  u(1, 0) = e * s;
  u(0, 1) = -s;
  u(1, 1) = e * c;
  return u;
}

// b placed as the diagonal block starting at `off` of an m x m matrix.
HermitianMatrix embed(const HermitianMatrix& b, std::size_t m, std::size_t off) {
  CMatrix out(m);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out(off + i, off + j) = b(i, j);
  return HermitianMatrix(out);
}

double shannon_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double q : p)
    if (q > 0.0) h -= q * std::log2(q);
  return h;
}

}  // namespace

double renyi_conditional_entropy(const JointDistribution& joint, double alpha) {
  check_alpha(alpha);
  double total = 0.0;
  for (std::size_t y = 0; y < joint.y_size(); ++y) {
    double s = 0.0;
    for (std::size_t x = 0; x < joint.x_size(); ++x)
      if (joint(x, y) > 0.0) s += std::pow(joint(x, y), alpha);
    if (s > 0.0) total += std::pow(s, 1.0 / alpha);
  }
  return alpha / (1.0 - alpha) * std::log(total);
}

double renyi_entropy(const std::vector<double>& probs, double alpha) {
  check_alpha(alpha);
  double s = 0.0;
  for (double p : probs)
    if (p > 0.0) s += std::pow(p, alpha);
  return std::log(s) / (1.0 - alpha);
}

BoundReport arikan_bounds(const JointDistribution& joint) {
  BoundReport r;
  r.quantity = "G(X|Y) via exp(H_1/2)";
  r.assumptions = {"K = |X|", "costs c_k = k"};
  const double h = renyi_conditional_entropy(joint, 0.5);
  r.upper = std::exp(h);
  r.lower = r.upper / (1.0 + std::log(static_cast<double>(joint.x_size())));
  r.values["H_1/2"] = h;
  r.values["guesswork"] = classical_conditional_guesswork(joint, CostVector::standard(joint.x_size()));
  return r;
}

double measured_conditional_entropy(const CqEnsemble& ens, const OutcomePovm& povm, double alpha) {
  return renyi_conditional_entropy(JointDistribution::from_measurement(ens, povm), alpha);
}

MeasuredSearch minimize_measured_entropy(const CqEnsemble& ens, double alpha, std::size_t samples,
                                         std::uint64_t seed) {
  check_alpha(alpha);
  const std::size_t d = ens.dim();
  MeasuredSearch best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const CMatrix& u) {
    OutcomePovm p = basis_povm(u);
    const double v = measured_conditional_entropy(ens, p, alpha);
    ++best.evaluated;
    if (v < best.value) {
      best.value = v;
      best.povm = std::move(p);
    }
  };
  consider(CMatrix::identity(d));
  if (d == 2) {
    // Fibonacci points on the sphere; antipodal points give the same basis.
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < samples; ++i) {
      const double z = 1.0 - (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
      consider(qubit_basis(std::acos(z), golden * static_cast<double>(i)));
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) consider(random_basis(d, rng));
  }
  return best;
}

BoundReport sandwiched_h_half(const CqEnsemble& ens, const SandwichedOptions& opt) {
  const std::size_t d = ens.dim(), n = ens.size();
  std::vector<HermitianMatrix> a;
  for (std::size_t x = 0; x < n; ++x) a.push_back(ens.state(x) * ens.prob(x));

  // f(S) = sum_x tr (S A_x S)^{1/2} with S = sqrt(sigma). Alternate the optimal
  // unitaries (polar factors) with the optimal S for fixed unitaries.
  HermitianMatrix s = HermitianMatrix::identity(d) * (1.0 / std::sqrt(static_cast<double>(d)));
  double f = 0.0;
  int it = 0;
  bool converged = false;
  for (; it < opt.max_iter; ++it) {
    CMatrix w(d);
    double fv = 0.0;
    for (const auto& ax : a) {
      const auto e = linalg::eig(congruence(s.matrix(), ax));
      const double cut = 1e-14 * std::max(1e-300, e.values.front());
      for (double v : e.values) fv += v > 0.0 ? std::sqrt(v) : 0.0;
      const HermitianMatrix pinv_root = e.apply([&](double v) { return v > cut ? 1.0 / std::sqrt(v) : 0.0; });
      w += pinv_root.matrix() * s.matrix() * ax.matrix();
    }
    const HermitianMatrix hplus = linalg::psd_project(HermitianMatrix(w));
    const double norm = hplus.frobenius_norm();
    if (norm == 0.0) break;
    const HermitianMatrix next = hplus * (1.0 / norm);
    const double step = linalg::frobenius_distance(next, s);
    const double gain = fv - f;
    s = next;
    f = fv;
    if (it > 0 && step < opt.tol && std::abs(gain) <= opt.tol * std::max(1.0, f)) {
      converged = true;
      break;
    }
  }
  // Value at the final S.
  double fin = 0.0;
  for (const auto& ax : a) fin += linalg::trace_norm(linalg::sqrt_psd(congruence(s.matrix(), ax)));
  f = std::max(f, fin);

  BoundReport r;
  r.quantity = "H~_1/2^up(X|B)";
  const double h = 2.0 * std::log(f);
  r.lower = r.upper = h;
  r.values["fixed_point"] = h;
  r.values["iterations"] = it;
  r.values["converged"] = converged ? 1.0 : 0.0;
  r.values["exp"] = std::exp(h);
  r.sigma = congruence(s.matrix(), HermitianMatrix::identity(d));
  r.assumptions = {"exp(value) lower-bounds lim (1/n) ln G(X^n|B^n) growth"};
  if (opt.sdp_check_limit > 0 && n * d * d <= opt.sdp_check_limit) {
    const double hs = sandwiched_h_half_sdp(ens);
    r.values["sdp"] = hs;
    if (std::abs(hs - h) > opt.sdp_agreement) {
      std::ostringstream msg;
      msg << "sandwiched_h_half: fixed point " << h << " and fidelity SDP " << hs << " disagree";
      throw NumericalError(msg.str(), std::abs(hs - h));
    }
  }
  return r;
}

double sandwiched_h_half_sdp(const CqEnsemble& ens, const sdp::SolverOptions& opt) {
  // With p_x rho_x = L L^dag (L is d x r), F = max Re tr(L K) over [[I_r, K], [K^dag, sigma]] >= 0,
  // which keeps a strictly feasible point even for pure states.
  const std::size_t d = ens.dim(), n = ens.size();
  sdp::ConicProblem p;
  std::vector<std::size_t> ranks;
  for (std::size_t x = 0; x < n; ++x) {
    const auto e = linalg::eig(ens.state(x) * ens.prob(x));
    const double cut = 1e-12 * std::max(1e-300, e.values.front());
    std::size_t r = 0;
    while (r < d && e.values[r] > cut) ++r;
    r = std::max<std::size_t>(r, 1);
    const std::size_t m = r + d;
    CMatrix c(m);
    for (std::size_t k = 0; k < r; ++k) {
      const double root = std::sqrt(std::max(0.0, e.values[k]));
      for (std::size_t i = 0; i < d; ++i) {
        const cplx l = e.vectors(i, k) * root;  // L(i, k)
        c(r + i, k) = -0.5 * l;
        c(k, r + i) = -0.5 * std::conj(l);
      }
    }
    p.add_block(m, sdp::BlockKind::Psd, HermitianMatrix(c));
    ranks.push_back(r);
  }
  const std::size_t sigma = p.add_block(d, sdp::BlockKind::Psd, HermitianMatrix(d));
  const auto basis = linalg::hermitian_basis(d);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t r = ranks[x], m = r + d;
    for (const auto& b : linalg::hermitian_basis(r)) {
      sdp::Constraint top;
      top.rhs = b.trace();
      top.terms.push_back({x, embed(b, m, 0)});
      p.constraints.push_back(std::move(top));
    }
    for (const auto& b : basis) {
      sdp::Constraint bottom;
      bottom.rhs = 0.0;
      bottom.terms.push_back({x, embed(b, m, r)});
      bottom.terms.push_back({sigma, b * -1.0});
      p.constraints.push_back(std::move(bottom));
    }
  }
  sdp::Constraint unit;
  unit.rhs = 1.0;
  unit.terms.push_back({sigma, HermitianMatrix::identity(d)});
  p.constraints.push_back(std::move(unit));
  const auto s = sdp::solve(p, opt);
  if (s.status != sdp::Status::Optimal)
    throw NumericalError("fidelity SDP did not converge: " + sdp::to_string(s.status), s.gap);
  return 2.0 * std::log(-s.primal_objective);
}

BoundReport quantum_one_shot_bounds(const CqEnsemble& ens, std::size_t samples, std::uint64_t seed) {
  SandwichedOptions so;
  so.sdp_check_limit = 0;
  const BoundReport sw = sandwiched_h_half(ens, so);
  const MeasuredSearch m = minimize_measured_entropy(ens, 0.5, samples, seed);
  BoundReport r;
  r.quantity = "G(X|B) one-shot";
  r.assumptions = {"K = |X|", "costs c_k = k", "upper end from a heuristic measurement search"};
  r.lower = std::exp(sw.lower) / (1.0 + std::log(static_cast<double>(ens.size())));
  r.upper = std::exp(m.value);
  r.values["H~_1/2"] = sw.lower;
  r.values["H_1/2 measured (best found)"] = m.value;
  r.sigma = sw.sigma;
  r.povm = m.povm;
  return r;
}

BoundReport asymptotic_bounds(const CqEnsemble& ens, int n, std::size_t samples, std::uint64_t seed) {
  require(n >= 1, "asymptotic_bounds: n must be >= 1");
  SandwichedOptions so;
  so.sdp_check_limit = 0;
  const BoundReport sw = sandwiched_h_half(ens, so);
  const MeasuredSearch one = minimize_measured_entropy(ens, 0.5, samples, seed);
  double upper = one.value;
  if (n > 1) {
    const CqEnsemble many = tensor_power(ens, n);
    const MeasuredSearch m = minimize_measured_entropy(many, 0.5, samples, seed);
    upper = std::min(upper, m.value / n);
  }
  BoundReport r;
  r.quantity = "lim (1/n) ln G(X^n|B^n)";
  r.assumptions = {"n = " + std::to_string(n), "upper end from a heuristic measurement search"};
  r.lower = sw.lower;
  r.upper = upper;
  r.values["n"] = n;
  r.sigma = sw.sigma;
  return r;
}

BoundReport massey_bound(const std::vector<double>& probs) {
  BoundReport r;
  r.quantity = "G(X) Massey";
  r.log_base = "2";
  const double h = shannon_bits(probs);
  r.values["H_bits"] = h;
  const double g = classical_guesswork(probs, CostVector::standard(probs.size())).value;
  r.values["guesswork"] = g;
  r.upper = g;
  if (h < 2.0 - 1e-12) {
    r.applicable = false;
    r.lower = -std::numeric_limits<double>::infinity();
    r.assumptions = {"not applicable: H(X) < 2 bits"};
    return r;
  }
  r.assumptions = {"H(X) >= 2 bits"};
  r.lower = std::exp2(h - 2.0) + 1.0;
  return r;
}

BoundReport pliam_side_info_bound(const JointDistribution& joint) {
  const std::size_t nx = joint.x_size();
  const auto py = joint.marginal_y();
  double dist = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < joint.y_size(); ++y) dist += std::abs(joint(x, y) - py[y] / static_cast<double>(nx));
  BoundReport r;
  r.quantity = "G(X|Y) Pliam";
  r.lower = (static_cast<double>(nx) + 1.0) / 2.0 - static_cast<double>(nx) / 2.0 * dist;
  r.upper = classical_conditional_guesswork(joint, CostVector::standard(nx));
  r.values["l1_distance"] = dist;
  r.values["guesswork"] = r.upper;
  return r;
}

BoundReport certify_key(const CqEnsemble& key, double epsilon) {
  require(std::isfinite(epsilon) && epsilon >= 0.0, "certify_key: epsilon must be >= 0");
  const std::size_t nk = key.size(), d = key.dim();
  HermitianMatrix rho_e(d);
  for (std::size_t k = 0; k < nk; ++k) rho_e.add_scaled(key.prob(k), key.state(k));
  double delta = 0.0;
  for (std::size_t k = 0; k < nk; ++k) {
    HermitianMatrix diff = key.state(k) * key.prob(k);
    diff.add_scaled(-1.0 / static_cast<double>(nk), rho_e);
    delta += linalg::trace_norm(diff);
  }
  delta *= 0.5;
  const double used = std::max(delta, epsilon);
  const double ideal = (static_cast<double>(nk) + 1.0) / 2.0;
  BoundReport r;
  r.quantity = "G(K|E) key certificate";
  r.lower = ideal - static_cast<double>(nk) * used;
  r.upper = ideal;
  r.values["delta"] = delta;
  r.values["epsilon"] = epsilon;
  r.values["distance_used"] = used;
  r.values["robustness_lower"] = r.lower;
  r.values["lipschitz_lower"] = ideal - 2.0 * static_cast<double>(nk) * used;
  r.assumptions = {"K = |K|", "costs c_k = k", "distance = max(actual delta, declared epsilon)"};
  if (epsilon < delta - 1e-12) r.assumptions.push_back("declared epsilon is below the actual distance");
  if (used > 0.0) r.assumptions.push_back("robustness bound is the tighter line");
  return r;
}

}  // namespace guesswork
