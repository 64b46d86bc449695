#include "guesswork/model/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "guesswork/error.hpp"
#include "guesswork/linalg/hermitian.hpp"

namespace guesswork {

CqEnsemble::CqEnsemble(std::vector<std::string> letters, std::vector<double> probs,
                       std::vector<HermitianMatrix> states, const EnsembleTolerances& tol)
    : letters_(std::move(letters)), probs_(std::move(probs)), states_(std::move(states)) {
  require(!letters_.empty(), "ensemble: alphabet is empty");
  require(probs_.size() == letters_.size(), "ensemble: probability count does not match alphabet");
  require(states_.size() == letters_.size(), "ensemble: state count does not match alphabet");
  dim_ = states_.front().dim();
  require(dim_ > 0, "ensemble: states have dimension 0");

  double total = 0.0;
  for (std::size_t x = 0; x < letters_.size(); ++x) {
    const auto& name = letters_[x];
    require(index_.emplace(name, x).second, "ensemble: duplicate letter '" + name + "'");
    require(std::isfinite(probs_[x]) && probs_[x] >= 0.0,
            "ensemble: probability of letter '" + name + "' is negative or not finite");
    total += probs_[x];
    require(states_[x].dim() == dim_, "ensemble: state of letter '" + name + "' has mismatched dimension");
    const double tr = states_[x].trace();
    if (std::abs(tr - 1.0) > tol.state_trace) {
      std::ostringstream msg;
      msg << "ensemble: state of letter '" << name << "' has trace " << tr << " (expected 1)";
      fail(ErrorKind::Validation, msg.str());
    }
    const double lmin = linalg::min_eigenvalue(states_[x]);
    if (lmin < -tol.state_psd) {
      std::ostringstream msg;
      msg << "ensemble: state of letter '" << name << "' is not PSD (min eigenvalue " << lmin << ")";
      fail(ErrorKind::Validation, msg.str());
    }
  }
  if (std::abs(total - 1.0) > tol.probability_sum) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "ensemble: probabilities sum to " << total << " (expected 1)";
    fail(ErrorKind::Validation, msg.str());
  }
}

CqEnsemble CqEnsemble::uniform(std::vector<std::string> letters, std::vector<HermitianMatrix> states) {
  const std::size_t n = letters.size();
  require(n > 0, "ensemble: alphabet is empty");
  return CqEnsemble(std::move(letters), std::vector<double>(n, 1.0 / static_cast<double>(n)), std::move(states));
}

std::size_t CqEnsemble::index_of(const std::string& letter) const {
  const auto it = index_.find(letter);
  if (it == index_.end()) fail(ErrorKind::Validation, "unknown letter '" + letter + "'");
  return it->second;
}

HermitianMatrix CqEnsemble::marginal() const {
  HermitianMatrix m(dim_);
  for (std::size_t x = 0; x < size(); ++x) m += weighted_state(x);
  return m;
}

// ---------------------------------------------------------------------------

CostVector::CostVector(std::vector<double> costs, std::optional<double> cost_inf)
    : costs_(std::move(costs)), cost_inf_(cost_inf) {
  require(!costs_.empty(), "cost vector: at least one finite cost is required");
  require(std::isfinite(costs_.front()) && costs_.front() >= 0.0, "cost vector: c_1 must be finite and >= 0");
  for (std::size_t k = 1; k < costs_.size(); ++k) {
    require(std::isfinite(costs_[k]), "cost vector: costs must be finite (use cost_inf for the miss cost)");
    if (costs_[k] < costs_[k - 1]) {
      std::ostringstream msg;
      msg << "cost vector: costs must be nondecreasing (c_" << k + 1 << " = " << costs_[k] << " < c_" << k
          << " = " << costs_[k - 1] << ")";
      fail(ErrorKind::Validation, msg.str());
    }
  }
  if (cost_inf_) {
    require(std::isfinite(*cost_inf_), "cost vector: an infinite cost_inf is expressed by omitting it");
    require(*cost_inf_ >= costs_.back(), "cost vector: cost_inf must be >= c_K");
  }
}

CostVector CostVector::standard(std::size_t n) {
  std::vector<double> c(n);
  std::iota(c.begin(), c.end(), 1.0);
  return CostVector(std::move(c));
}

double CostVector::max_finite_cost() const {
  return cost_inf_ ? std::max(*cost_inf_, costs_.back()) : costs_.back();
}

// ---------------------------------------------------------------------------

GuessOrder::GuessOrder(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) require(e >= 0, "guess order: negative letter index");
  require(distinct(), "guess order: entries must be pairwise distinct");
}

GuessOrder GuessOrder::with_repeats(std::vector<int> entries) {
  for (int e : entries) require(e >= 0, "guess order: negative letter index");
  GuessOrder g;
  g.entries_ = std::move(entries);
  return g;
}

bool GuessOrder::distinct() const {
  std::vector<int> s = entries_;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

std::optional<std::size_t> GuessOrder::guess_count(int x) const {
  for (std::size_t j = 0; j < entries_.size(); ++j)
    if (entries_[j] == x) return j + 1;
  return std::nullopt;
}

std::string GuessOrder::to_string(const std::vector<std::string>& letters) const {
  std::string s = "(";
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (j) s += ",";
    const auto e = static_cast<std::size_t>(entries_[j]);
    s += e < letters.size() ? letters[e] : std::to_string(e);
  }
  return s + ")";
}

std::optional<std::size_t> guess_count(const CqEnsemble& ens, const GuessOrder& order,
                                       const std::string& letter) {
  return order.guess_count(static_cast<int>(ens.index_of(letter)));
}

template <class Label>
void validate_povm(const Povm<Label>& povm, std::size_t dim, double psd_tol, double sum_tol) {
  require(!povm.elements.empty(), "POVM has no elements");
  HermitianMatrix total(dim);
  for (std::size_t i = 0; i < povm.elements.size(); ++i) {
    const auto& op = povm.elements[i].op;
    require(op.dim() == dim, "POVM element has mismatched dimension");
    const double lmin = linalg::min_eigenvalue(op);
    if (lmin < -psd_tol) {
      std::ostringstream msg;
      msg << "POVM element " << i << " is not PSD (min eigenvalue " << lmin << ")";
      fail(ErrorKind::Validation, msg.str());
    }
    total += op;
  }
  const double dev = linalg::frobenius_distance(total, HermitianMatrix::identity(dim));
  if (dev > sum_tol) {
    std::ostringstream msg;
    msg << "POVM elements do not sum to identity (Frobenius deviation " << dev << ")";
    fail(ErrorKind::Validation, msg.str());
  }
}

template void validate_povm(const Povm<GuessOrder>&, std::size_t, double, double);
template void validate_povm(const Povm<std::string>&, std::size_t, double, double);

// ---------------------------------------------------------------------------

std::optional<double> letter_cost(const CostVector& cv, const GuessOrder& order, int x) {
  const auto n = order.guess_count(x);
  if (n) return cv.cost(*n);
  return cv.cost_inf();
}

CostOperator cost_operator(const CqEnsemble& ens, const CostVector& cv, const GuessOrder& order) {
  require(order.size() == cv.K(), "cost operator: order length differs from K");
  for (int e : order.entries())
    require(e < static_cast<int>(ens.size()), "cost operator: order refers to a letter outside the alphabet");
  HermitianMatrix r(ens.dim());
  for (std::size_t x = 0; x < ens.size(); ++x) {
    const auto c = letter_cost(cv, order, static_cast<int>(x));
    if (!c) {
      if (ens.prob(x) == 0.0) continue;  // infinity * 0 = 0
      fail(ErrorKind::Restriction,
           "infinite cost encountered: c_inf = inf with K < |X| (letter '" + ens.letters()[x] +
               "' is outside the order). Such instances have a finite solution only if some POVM "
               "satisfies tr(E_g rho_x) = 0 whenever x is not in g; only K = |X| or finite c_inf is supported");
    }
    if (*c == 0.0 || ens.prob(x) == 0.0) continue;
    r += ens.state(x) * (ens.prob(x) * *c);
  }
  return {order, std::move(r)};
}

std::optional<std::uint64_t> count_orders(std::size_t alphabet_size, std::size_t K) {
  if (K > alphabet_size) return 0;
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < K; ++i) {
    const std::uint64_t f = alphabet_size - i;
    if (n > UINT64_MAX / f) return std::nullopt;
    n *= f;
  }
  return n;
}

OrderRange::OrderRange(std::size_t alphabet_size, std::size_t K) : n_(alphabet_size), k_(K) {
  require(K >= 1 && K <= alphabet_size, "enumerate_orders: requires 1 <= K <= |X|");
}

OrderRange::iterator::iterator(std::size_t n, std::size_t k) : n_(n), done_(false) {
  std::vector<int> first(k);
  std::iota(first.begin(), first.end(), 0);
  current_ = GuessOrder(std::move(first));
}

OrderRange::iterator& OrderRange::iterator::operator++() {
  std::vector<int> e = current_.entries();
  const std::size_t k = e.size();
  std::vector<char> used(n_, 0);
  for (int v : e) used[v] = 1;
  // Rightmost position that can take a larger unused letter; everything to its
  // right is refilled with the smallest unused letters in ascending order.
  for (std::size_t pos = k; pos-- > 0;) {
    used[e[pos]] = 0;
    int next = -1;
    for (int v = e[pos] + 1; v < static_cast<int>(n_); ++v)
      if (!used[v]) {
        next = v;
        break;
      }
    if (next < 0) continue;
    e[pos] = next;
    used[next] = 1;
    std::size_t fill = pos + 1;
    for (int v = 0; v < static_cast<int>(n_) && fill < k; ++v)
      if (!used[v]) {
        e[fill++] = v;
        used[v] = 1;
      }
    current_ = GuessOrder::with_repeats(std::move(e));
    return *this;
  }
  done_ = true;
  return *this;
}

double expected_cost(const CqEnsemble& ens, const CostVector& cv, const OrderPovm& povm) {
  double total = 0.0;
  for (const auto& el : povm.elements) {
    require(el.op.dim() == ens.dim(), "expected_cost: POVM element dimension differs from d_B");
    for (int e : el.label.entries())
      require(e >= 0 && e < static_cast<int>(ens.size()), "expected_cost: POVM label outside the alphabet");
    total += linalg::inner(cost_operator(ens, cv, el.label).matrix, el.op);
  }
  return total;
}

CqEnsemble tensor_power(const CqEnsemble& ens, int n, std::size_t max_letters) {
  require(n >= 1, "tensor_power: n must be >= 1");
  double letters = 1.0;
  for (int i = 0; i < n; ++i) letters *= static_cast<double>(ens.size());
  if (letters > static_cast<double>(max_letters)) {
    std::ostringstream msg;
    msg << "tensor_power: |X|^n = " << letters << " exceeds the cap of " << max_letters << " letters";
    fail(ErrorKind::SizeCap, msg.str());
  }
  std::vector<std::string> names = ens.letters();
  std::vector<double> probs = ens.probs();
  std::vector<HermitianMatrix> states = ens.states();
  for (int i = 1; i < n; ++i) {
    std::vector<std::string> nn;
    std::vector<double> np;
    std::vector<HermitianMatrix> ns;
    for (std::size_t a = 0; a < names.size(); ++a)
      for (std::size_t b = 0; b < ens.size(); ++b) {
        nn.push_back(names[a] + "|" + ens.letters()[b]);
        np.push_back(probs[a] * ens.prob(b));
        ns.push_back(linalg::kron(states[a], ens.state(b)));
      }
    names = std::move(nn);
    probs = std::move(np);
    states = std::move(ns);
  }
  EnsembleTolerances tol;
  tol.probability_sum = 1e-9;
  return CqEnsemble(std::move(names), std::move(probs), std::move(states), tol);
}

double cq_trace_distance(const CqEnsemble& a, const CqEnsemble& b) {
  require(a.size() == b.size() && a.dim() == b.dim(), "cq_trace_distance: ensembles do not share an alphabet");
  double d = 0.0;
  for (std::size_t x = 0; x < a.size(); ++x) d += linalg::trace_norm(a.weighted_state(x) - b.weighted_state(x));
  return d;
}

CqEnsemble mix(const CqEnsemble& a, const CqEnsemble& b, double t) {
  require(a.size() == b.size() && a.dim() == b.dim(), "mix: ensembles do not share an alphabet");
  require(t >= 0.0 && t <= 1.0, "mix: weight must lie in [0, 1]");
  std::vector<double> p(a.size());
  std::vector<HermitianMatrix> s;
  for (std::size_t x = 0; x < a.size(); ++x) {
    p[x] = t * a.prob(x) + (1.0 - t) * b.prob(x);
    if (p[x] > 0.0) {
      s.push_back((a.weighted_state(x) * t + b.weighted_state(x) * (1.0 - t)) * (1.0 / p[x]));
    } else {
      s.push_back(a.state(x));
    }
  }
  return CqEnsemble(a.letters(), std::move(p), std::move(s));
}

CqEnsemble relabel(const CqEnsemble& ens, const std::vector<int>& perm) {
  require(perm.size() == ens.size(), "relabel: permutation size differs from |X|");
  std::vector<std::string> l;
  std::vector<double> p;
  std::vector<HermitianMatrix> s;
  for (int i : perm) {
    require(i >= 0 && i < static_cast<int>(ens.size()), "relabel: index out of range");
    l.push_back(ens.letters()[i]);
    p.push_back(ens.prob(i));
    s.push_back(ens.state(i));
  }
  return CqEnsemble(std::move(l), std::move(p), std::move(s));
}

}  // namespace guesswork
