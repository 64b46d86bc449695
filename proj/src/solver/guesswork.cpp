#include "guesswork/solver/guesswork.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "guesswork/error.hpp"
#include "guesswork/linalg/hermitian.hpp"

namespace guesswork {

namespace {

void check_model(const CqEnsemble& ens, const CostVector& cv) {
  require(cv.K() >= 1 && cv.K() <= ens.size(), "cost vector length K must satisfy 1 <= K <= |X|");
  if (!cv.finite_model(ens.size()))
    fail(ErrorKind::Restriction,
         "c_inf = inf with K < |X| is outside the supported model: the SDP has a finite value only if some POVM "
         "never leaves a letter of positive probability unguessed; supply a finite c_inf or K = |X|");
}

std::vector<CostOperator> operators_for(const CqEnsemble& ens, const CostVector& cv,
                                        const std::vector<GuessOrder>& orders) {
  require(!orders.empty(), "order set is empty");
  std::vector<CostOperator> ops;
  ops.reserve(orders.size());
  for (const auto& g : orders) {
    require(g.size() == cv.K(), "order length differs from K");
    require(g.distinct(), "orders must have distinct entries");
    ops.push_back(cost_operator(ens, cv, g));
  }
  std::vector<GuessOrder> sorted = orders;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "order set contains duplicates");
  return ops;
}

double margin_over(const std::vector<CostOperator>& ops, const HermitianMatrix& y) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& op : ops) m = std::min(m, linalg::min_eigenvalue(op.matrix - y));
  return m;
}

void fill_common(GuessworkSolution& out, const sdp::ConicSolution& s, const std::vector<CostOperator>& ops,
                 const GuessworkOptions& opt) {
  out.status = s.status;
  out.iterations = s.iterations;
  out.primal_residual = s.primal_residual;
  out.dual_residual = s.dual_residual;
  out.gap = s.gap;
  out.dual_value = out.dual_Y.trace();
  out.certificate_margin = margin_over(ops, out.dual_Y);
  for (const auto& e : out.povm.elements)
    if (e.op.trace() > opt.support_threshold) out.support.push_back(e.label);
}

}  // namespace

std::vector<CostOperator> all_cost_operators(const CqEnsemble& ens, const CostVector& cv, std::size_t max_orders) {
  check_model(ens, cv);
  const auto count = count_orders(ens.size(), cv.K());
  if (!count || *count > max_orders) {
    fail(ErrorKind::SizeCap, "|X^K| = " + (count ? std::to_string(*count) : std::string("> 2^64")) +
                                 " orders exceeds the cap of " + std::to_string(max_orders) +
                                 "; use the active-set upper bound instead");
  }
  std::vector<CostOperator> ops;
  ops.reserve(static_cast<std::size_t>(*count));
  for (const auto& g : enumerate_orders(ens.size(), cv.K())) ops.push_back(cost_operator(ens, cv, g));
  return ops;
}

namespace {

GuessworkSolution primal_over(const CqEnsemble& ens, const std::vector<CostOperator>& ops,
                              const GuessworkOptions& opt) {
  const std::size_t d = ens.dim();
  sdp::ConicProblem p;
  for (const auto& op : ops) p.add_block(d, sdp::BlockKind::Psd, op.matrix);
  const auto basis = linalg::hermitian_basis(d);
  for (const auto& b : basis) {
    sdp::Constraint c;
    c.rhs = b.trace();
    c.terms.reserve(ops.size());
    for (std::size_t k = 0; k < ops.size(); ++k) c.terms.push_back({k, b});
    p.constraints.push_back(std::move(c));
  }
  const auto s = sdp::solve(p, opt.sdp);

  GuessworkSolution out;
  out.dual_Y = HermitianMatrix(d);
  for (std::size_t i = 0; i < basis.size(); ++i) out.dual_Y += basis[i] * s.dual[i];
  // T^{-1/2} E_g T^{-1/2} with T = sum E_g: an exact POVM, and the value is its cost.
  HermitianMatrix total(d);
  for (const auto& e : s.primal) total += e;
  const CMatrix fix = linalg::sqrt_psd(linalg::pinv_psd(total)).matrix();
  out.primal_value = 0.0;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    HermitianMatrix e = congruence(fix, s.primal[k]);
    out.primal_value += linalg::inner(ops[k].matrix, e);
    out.povm.elements.push_back({ops[k].order, std::move(e)});
  }
  out.value = out.primal_value;
  fill_common(out, s, ops, opt);
  return out;
}

GuessworkSolution dual_over(const CqEnsemble& ens, const std::vector<CostOperator>& ops, const GuessworkOptions& opt,
                            const GuessworkSolution* warm) {
  const std::size_t d = ens.dim();
  sdp::ConicProblem p;
  p.add_block(d, sdp::BlockKind::Free, HermitianMatrix::identity(d) * -1.0);
  for (std::size_t k = 0; k < ops.size(); ++k) p.add_block(d, sdp::BlockKind::Psd, HermitianMatrix(d));
  const auto basis = linalg::hermitian_basis(d);
  for (std::size_t k = 0; k < ops.size(); ++k) {
    for (const auto& b : basis) {
      sdp::Constraint c;
      c.rhs = linalg::inner(b, ops[k].matrix);
      c.terms.push_back({0, b});
      c.terms.push_back({k + 1, b});
      p.constraints.push_back(std::move(c));
    }
  }

  sdp::SolverOptions so = opt.sdp;
  sdp::WarmStart ws;
  if (warm != nullptr && warm->dual_Y.dim() == d) {
    std::map<GuessOrder, const HermitianMatrix*> prev;
    for (const auto& e : warm->povm.elements) prev[e.label] = &e.op;
    ws.primal.push_back(warm->dual_Y);
    ws.dual_slack.push_back(HermitianMatrix(d));
    for (const auto& op : ops) {
      ws.primal.push_back(linalg::psd_project(op.matrix - warm->dual_Y));
      const auto it = prev.find(op.order);
      ws.dual_slack.push_back(it == prev.end() ? HermitianMatrix(d) : *it->second);
    }
    so.warm_start = &ws;
  }
  const auto s = sdp::solve(p, so);

  GuessworkSolution out;
  out.dual_Y = s.primal[0];
  out.value = out.dual_Y.trace();
  for (std::size_t k = 0; k < ops.size(); ++k) {
    HermitianMatrix e(d);
    for (std::size_t i = 0; i < basis.size(); ++i) e -= basis[i] * s.dual[k * basis.size() + i];
    out.povm.elements.push_back({ops[k].order, e});
  }
  out.primal_value = -s.dual_objective;
  fill_common(out, s, ops, opt);
  return out;
}

}  // namespace

GuessworkSolution solve_primal(const CqEnsemble& ens, const CostVector& cv, const GuessworkOptions& opt) {
  return primal_over(ens, all_cost_operators(ens, cv, opt.max_orders), opt);
}

GuessworkSolution solve_dual(const CqEnsemble& ens, const CostVector& cv, const GuessworkOptions& opt) {
  return dual_over(ens, all_cost_operators(ens, cv, opt.max_orders), opt, nullptr);
}

GuessworkSolution solve_restricted(const CqEnsemble& ens, const CostVector& cv, const std::vector<GuessOrder>& orders,
                                   const GuessworkOptions& opt) {
  check_model(ens, cv);
  require(orders.size() <= opt.max_orders, "order set exceeds the size cap");
  return primal_over(ens, operators_for(ens, cv, orders), opt);
}

GuessworkSolution solve_dual_restricted(const CqEnsemble& ens, const CostVector& cv,
                                        const std::vector<GuessOrder>& orders, const GuessworkOptions& opt,
                                        const GuessworkSolution* warm) {
  check_model(ens, cv);
  require(orders.size() <= opt.max_orders, "order set exceeds the size cap");
  return dual_over(ens, operators_for(ens, cv, orders), opt, warm);
}

OptimalityReport verify_optimality(const CqEnsemble& ens, const CostVector& cv, const GuessworkSolution& sol,
                                   VerifyMode mode, double tol, std::size_t samples, std::uint64_t seed,
                                   std::size_t max_orders) {
  check_model(ens, cv);
  require(sol.dual_Y.dim() == ens.dim(), "verify_optimality: Y dimension differs from d_B");
  OptimalityReport rep;
  rep.mode = mode;
  rep.tol = tol;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  auto visit = [&](const GuessOrder& g) {
    const double m = linalg::min_eigenvalue(cost_operator(ens, cv, g).matrix - sol.dual_Y);
    ++rep.checked;
    if (m < rep.worst_margin) {
      rep.worst_margin = m;
      rep.witness = g;
    }
  };
  if (mode == VerifyMode::Exhaustive) {
    const auto count = count_orders(ens.size(), cv.K());
    if (!count || *count > max_orders)
      fail(ErrorKind::SizeCap, "exhaustive verification over more than " + std::to_string(max_orders) +
                                   " orders; use sampled mode");
    for (const auto& g : enumerate_orders(ens.size(), cv.K())) visit(g);
  } else {
    std::mt19937_64 rng(seed);
    std::vector<int> perm(ens.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t s = 0; s < samples; ++s) {
      std::shuffle(perm.begin(), perm.end(), rng);
      visit(GuessOrder(std::vector<int>(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cv.K()))));
    }
    for (const auto& g : sol.support) visit(g);
  }
  return rep;
}

namespace {

// Sorted guessing on unnormalized weights: sum_k c_k w(g_k) + c_inf * rest.
ClassicalGuess sorted_guess(const std::vector<double>& w, const CostVector& cv) {
  require(cv.K() >= 1 && cv.K() <= w.size(), "cost vector length K must satisfy 1 <= K <= |X|");
  std::vector<int> idx(w.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return w[a] > w[b]; });
  ClassicalGuess out;
  out.order = GuessOrder(std::vector<int>(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cv.K())));
  double tail = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k < cv.K())
      out.value += cv.cost(k + 1) * w[idx[k]];
    else
      tail += w[idx[k]];
  }
  if (tail > 0.0) {
    if (cv.infinite_tail())
      out.value = std::numeric_limits<double>::infinity();
    else
      out.value += *cv.cost_inf() * tail;
  }
  return out;
}

}  // namespace

ClassicalGuess classical_guesswork(const std::vector<double>& probs, const CostVector& cv) {
  require(!probs.empty(), "classical_guesswork: empty distribution");
  double s = 0.0;
  for (double p : probs) {
    require(std::isfinite(p) && p >= 0.0, "classical_guesswork: probabilities must be nonnegative");
    s += p;
  }
  require(std::abs(s - 1.0) <= 1e-10, "classical_guesswork: probabilities must sum to 1");
  return sorted_guess(probs, cv);
}

double classical_conditional_guesswork(const JointDistribution& joint, const CostVector& cv) {
  double total = 0.0;
  std::vector<double> col(joint.x_size());
  for (std::size_t y = 0; y < joint.y_size(); ++y) {
    for (std::size_t x = 0; x < joint.x_size(); ++x) col[x] = joint(x, y);
    total += sorted_guess(col, cv).value;
  }
  return total;
}

}  // namespace guesswork
