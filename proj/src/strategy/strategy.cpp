#include "guesswork/strategy/strategy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "guesswork/error.hpp"
#include "guesswork/linalg/hermitian.hpp"

namespace guesswork {

namespace {

constexpr double kReachable = 1e-14;

std::size_t order_length(const OrderPovm& povm) {
  require(!povm.elements.empty(), "strategy: POVM has no elements");
  const std::size_t K = povm.elements.front().label.size();
  require(K >= 1, "strategy: orders must be nonempty");
  for (const auto& e : povm.elements) require(e.label.size() == K, "strategy: orders have different lengths");
  return K;
}

void check_letters(const GuessOrder& g, std::size_t alphabet) {
  for (int x : g.entries())
    require(x >= 0 && static_cast<std::size_t>(x) < alphabet, "strategy: order refers to a letter outside the alphabet");
}

std::map<GuessOrder, HermitianMatrix> grouped(const OrderPovm& povm) {
  std::map<GuessOrder, HermitianMatrix> out;
  for (const auto& e : povm.elements) {
    auto it = out.find(e.label);
    if (it == out.end())
      out.emplace(e.label, e.op);
    else
      it->second += e.op;
  }
  return out;
}

JointGuessTable ordered_table(const CqEnsemble& ens, const OrderPovm& povm) {
  JointGuessTable t;
  for (const auto& [g, op] : grouped(povm)) {
    check_letters(g, ens.size());
    std::vector<double> row(ens.size());
    for (std::size_t x = 0; x < ens.size(); ++x) row[x] = linalg::inner(op, ens.state(x));
    t.emplace(g, std::move(row));
  }
  return t;
}

void simulate(const SequentialStrategy& s, const std::vector<int>& h, const HermitianMatrix& sigma, std::size_t x,
              std::size_t nletters, JointGuessTable& t) {
  const auto it = s.operators.find(h);
  if (it == s.operators.end()) return;  // unreachable
  std::vector<int> next = h;
  next.push_back(0);
  for (std::size_t a = 0; a < it->second.size(); ++a) {
    next.back() = static_cast<int>(a);
    const HermitianMatrix child = congruence(it->second[a], sigma);
    const double w = child.trace();
    if (w <= 0.0) continue;
    if (next.size() == s.steps) {
      auto& row = t[GuessOrder::with_repeats(next)];
      row.resize(nletters, 0.0);
      row[x] += w;
    } else {
      simulate(s, next, child, x, nletters, t);
    }
  }
}

JointGuessTable sequential_table(const CqEnsemble& ens, const SequentialStrategy& s) {
  require(s.alphabet == ens.size(), "strategy: sequential alphabet differs from the ensemble");
  require(s.dim == ens.dim(), "strategy: sequential dimension differs from d_B");
  JointGuessTable t;
  for (std::size_t x = 0; x < ens.size(); ++x) simulate(s, {}, ens.state(x), x, ens.size(), t);
  return t;
}

JointGuessTable measured_table(const CqEnsemble& ens, const MeasuredStrategy& m) {
  m.validate(ens.dim());
  JointGuessTable t;
  for (std::size_t i = 0; i < m.povm.size(); ++i) {
    std::vector<double> py(ens.size());
    for (std::size_t x = 0; x < ens.size(); ++x) py[x] = linalg::inner(m.povm.elements[i].op, ens.state(x));
    for (const auto& [g, q] : m.postprocess[i]) {
      check_letters(g, ens.size());
      auto& row = t[g];
      row.resize(ens.size(), 0.0);
      for (std::size_t x = 0; x < ens.size(); ++x) row[x] += q * py[x];
    }
  }
  return t;
}

std::size_t strategy_length(const Strategy& s) {
  if (const auto* o = std::get_if<OrderPovm>(&s)) return order_length(*o);
  if (const auto* q = std::get_if<SequentialStrategy>(&s)) return q->steps;
  const auto& m = std::get<MeasuredStrategy>(s);
  for (const auto& row : m.postprocess)
    if (!row.empty()) return row.front().first.size();
  fail(ErrorKind::Validation, "strategy: measured strategy has no orders");
}

}  // namespace

void SequentialStrategy::validate(double tol) const {
  require(steps >= 1 && alphabet >= 1 && dim >= 1, "sequential strategy: empty shape");
  require(operators.count({}) == 1, "sequential strategy: the first step is missing");
  for (const auto& [h, ops] : operators) {
    require(h.size() < steps, "sequential strategy: history longer than K - 1");
    require(ops.size() == alphabet, "sequential strategy: each step needs one operator per letter");
    HermitianMatrix sum(dim);
    for (const auto& m : ops) {
      require(m.dim() == dim, "sequential strategy: operator dimension differs from d_B");
      sum += gram(m);
    }
    const double err = linalg::frobenius_distance(sum, HermitianMatrix::identity(dim));
    if (err > tol) {
      std::ostringstream msg;
      msg << "sequential strategy: sum M^dag M deviates from identity by " << err << " after history of length "
          << h.size();
      fail(ErrorKind::Validation, msg.str());
    }
  }
}

void MeasuredStrategy::validate(std::size_t dim, double tol) const {
  validate_povm(povm, dim);
  require(postprocess.size() == povm.size(), "measured strategy: one post-processing row per outcome is required");
  std::optional<std::size_t> K;
  for (const auto& row : postprocess) {
    double s = 0.0;
    for (const auto& [g, q] : row) {
      require(std::isfinite(q) && q >= 0.0, "measured strategy: post-processing probabilities must be nonnegative");
      if (!K) K = g.size();
      require(g.size() == *K && *K >= 1, "measured strategy: orders have different lengths");
      s += q;
    }
    require(std::abs(s - 1.0) <= tol, "measured strategy: post-processing row does not sum to 1");
  }
}

JointGuessTable joint_guess_table(const CqEnsemble& ens, const Strategy& s) {
  if (const auto* o = std::get_if<OrderPovm>(&s)) return ordered_table(ens, *o);
  if (const auto* q = std::get_if<SequentialStrategy>(&s)) return sequential_table(ens, *q);
  return measured_table(ens, std::get<MeasuredStrategy>(s));
}

GuessReport guess_distribution(const CqEnsemble& ens, const Strategy& s, const CostVector& cv) {
  const std::size_t K = strategy_length(s);
  require(K == cv.K(), "guess_distribution: strategy order length differs from K");
  GuessReport r;
  r.distribution.p.assign(K, 0.0);
  for (const auto& [g, row] : joint_guess_table(ens, s)) {
    for (std::size_t x = 0; x < ens.size(); ++x) {
      const double w = ens.prob(x) * row[x];
      const auto n = g.guess_count(static_cast<int>(x));
      if (n)
        r.distribution.p[*n - 1] += w;
      else
        r.distribution.p_inf += w;
    }
  }
  for (std::size_t k = 0; k < K; ++k) r.expected_cost += cv.cost(k + 1) * r.distribution.p[k];
  if (r.distribution.p_inf > 1e-12) {
    if (cv.infinite_tail())
      r.expected_cost = std::numeric_limits<double>::infinity();
    else
      r.expected_cost += *cv.cost_inf() * r.distribution.p_inf;
  }
  return r;
}

SequentialStrategy ordered_to_sequential(const OrderPovm& povm, std::size_t alphabet) {
  const std::size_t K = order_length(povm);
  const std::size_t d = povm.elements.front().op.dim();
  validate_povm(povm, d, 1e-8, 1e-7);
  for (const auto& e : povm.elements) check_letters(e.label, alphabet);

  // Partial sums S_h over orders with prefix h.
  std::map<std::vector<int>, HermitianMatrix> partial;
  for (const auto& e : povm.elements) {
    const auto& g = e.label.entries();
    for (std::size_t j = 1; j <= K; ++j) {
      auto [it, fresh] = partial.try_emplace(std::vector<int>(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(j)),
                                             e.op);
      if (!fresh) it->second += e.op;
    }
  }

  SequentialStrategy s;
  s.alphabet = alphabet;
  s.dim = d;
  s.steps = K;
  const HermitianMatrix eye = HermitianMatrix::identity(d);
  // A is the product of the operators applied so far; A^dag A = S_h on the support.
  struct Node {
    std::vector<int> h;
    CMatrix a;
  };
  std::vector<Node> stack{{{}, CMatrix::identity(d)}};
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    const CMatrix pre = node.a * linalg::pinv_psd(gram(node.a)).matrix();  // (A^+)^dag
    std::vector<CMatrix> ops(alphabet, CMatrix(d));
    std::vector<HermitianMatrix> squares(alphabet, HermitianMatrix(d));
    std::vector<const HermitianMatrix*> sums(alphabet, nullptr);
    HermitianMatrix total(d);
    std::vector<int> child = node.h;
    child.push_back(0);
    for (std::size_t x = 0; x < alphabet; ++x) {
      child.back() = static_cast<int>(x);
      const auto it = partial.find(child);
      if (it == partial.end()) continue;
      sums[x] = &it->second;
      squares[x] = congruence(pre, it->second);
      total += squares[x];
    }
    // total equals the projector onto the range of A up to rounding; renormalize so the family is exact.
    const HermitianMatrix fix = linalg::sqrt_psd(linalg::pinv_psd(total));
    // Square roots of rounding-level eigenvalues leak outside the range; the Q sandwich removes that.
    const HermitianMatrix range = linalg::support_projector(total);
    for (std::size_t x = 0; x < alphabet; ++x)
      if (sums[x] != nullptr)
        ops[x] = congruence(range.matrix(), linalg::sqrt_psd(congruence(fix.matrix(), squares[x]))).matrix();
    // Directions outside the range of A are never reached; any completion works.
    ops[0] += (eye - range).matrix();
    if (child.size() < K)
      for (std::size_t x = 0; x < alphabet; ++x) {
        child.back() = static_cast<int>(x);
        if (sums[x] != nullptr && sums[x]->trace() > kReachable) stack.push_back({child, ops[x] * node.a});
      }
    s.operators.emplace(node.h, std::move(ops));
  }

  const auto target = grouped(povm);
  const auto back = grouped(sequential_to_ordered(s));
  double err = 0.0;
  for (const auto& [g, op] : target) {
    const auto it = back.find(g);
    err = std::max(err, it == back.end() ? op.frobenius_norm() : linalg::frobenius_distance(op, it->second));
  }
  for (const auto& [g, op] : back)
    if (!target.count(g)) err = std::max(err, op.frobenius_norm());
  if (err > 1e-8) {
    std::ostringstream msg;
    msg << "ordered_to_sequential: compiled strategy reproduces the POVM only to " << err;
    throw NumericalError(msg.str(), err);
  }
  return s;
}

OrderPovm sequential_to_ordered(const SequentialStrategy& s) {
  s.validate();
  OrderPovm out;
  struct Node {
    std::vector<int> h;
    CMatrix a;
  };
  std::vector<Node> stack{{{}, CMatrix::identity(s.dim)}};
  std::map<GuessOrder, HermitianMatrix> acc;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    const auto it = s.operators.find(node.h);
    if (it == s.operators.end()) continue;
    for (std::size_t x = 0; x < s.alphabet; ++x) {
      std::vector<int> child = node.h;
      child.push_back(static_cast<int>(x));
      CMatrix b = it->second[x] * node.a;
      if (child.size() == s.steps) {
        HermitianMatrix e = gram(b);
        if (e.trace() > 1e-15) acc.emplace(GuessOrder::with_repeats(std::move(child)), std::move(e));
      } else {
        stack.push_back({std::move(child), std::move(b)});
      }
    }
  }
  for (auto& [g, e] : acc) out.elements.push_back({g, std::move(e)});
  return out;
}

OrderPovm measured_to_ordered(const MeasuredStrategy& m) {
  require(!m.povm.elements.empty(), "measured strategy: POVM has no elements");
  const std::size_t d = m.povm.elements.front().op.dim();
  m.validate(d);
  std::map<GuessOrder, HermitianMatrix> acc;
  for (std::size_t i = 0; i < m.povm.size(); ++i)
    for (const auto& [g, q] : m.postprocess[i]) {
      if (q == 0.0) continue;
      auto [it, fresh] = acc.try_emplace(g, d);
      it->second.add_scaled(q, m.povm.elements[i].op);
    }
  OrderPovm out;
  for (auto& [g, e] : acc) out.elements.push_back({g, std::move(e)});
  return out;
}

GuessOrder deduplicated(const GuessOrder& g, std::size_t alphabet) {
  require(g.size() <= alphabet, "deduplicated: order longer than the alphabet");
  check_letters(g, alphabet);
  std::vector<char> used(alphabet, 0);
  std::vector<int> out;
  for (int x : g.entries())
    if (!used[static_cast<std::size_t>(x)]) {
      used[static_cast<std::size_t>(x)] = 1;
      out.push_back(x);
    }
  for (std::size_t x = 0; x < alphabet && out.size() < g.size(); ++x)
    if (!used[x]) out.push_back(static_cast<int>(x));
  return GuessOrder(std::move(out));
}

OrderPovm merge_repeats(const OrderPovm& povm, std::size_t alphabet) {
  std::map<GuessOrder, HermitianMatrix> acc;
  for (const auto& e : povm.elements) {
    auto [it, fresh] = acc.try_emplace(deduplicated(e.label, alphabet), e.op);
    if (!fresh) it->second += e.op;
  }
  OrderPovm out;
  for (auto& [g, op] : acc) out.elements.push_back({g, std::move(op)});
  return out;
}

}  // namespace guesswork
