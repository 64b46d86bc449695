#pragma once
// Problem data for guessing with quantum side information: the c-q
// ensemble, cost vectors, guess orders, POVMs and cost operators.

#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "guesswork/linalg/matrix.hpp"

namespace guesswork {

using linalg::CMatrix;
using linalg::cplx;
using linalg::HermitianMatrix;

struct EnsembleTolerances {
  double probability_sum = 1e-10;
  double state_trace = 1e-8;
  double state_psd = 1e-9;
};

/// rho_XB = sum_x p(x) |x><x| (x) rho_x, kept in factored form.
class CqEnsemble {
 public:
  CqEnsemble(std::vector<std::string> letters, std::vector<double> probs,
             std::vector<HermitianMatrix> states, const EnsembleTolerances& tol = {});

  /// Uniform probabilities.
  static CqEnsemble uniform(std::vector<std::string> letters, std::vector<HermitianMatrix> states);

  std::size_t size() const noexcept { return letters_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& letters() const noexcept { return letters_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const std::vector<HermitianMatrix>& states() const noexcept { return states_; }
  double prob(std::size_t x) const { return probs_[x]; }
  const HermitianMatrix& state(std::size_t x) const { return states_[x]; }

  /// Throws Validation for an unknown letter.
  std::size_t index_of(const std::string& letter) const;

  /// rho_B = sum_x p(x) rho_x.
  HermitianMatrix marginal() const;

  /// p(x) rho_x.
  HermitianMatrix weighted_state(std::size_t x) const { return states_[x] * probs_[x]; }

 private:
  std::vector<std::string> letters_;
  std::vector<double> probs_;
  std::vector<HermitianMatrix> states_;
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Nondecreasing costs c_1..c_K plus the cost c_inf charged when all K
/// guesses miss. An empty `cost_inf` means c_inf = infinity.
class CostVector {
 public:
  CostVector(std::vector<double> costs, std::optional<double> cost_inf = std::nullopt);

  /// c = (1, 2, ..., n).
  static CostVector standard(std::size_t n);

  std::size_t K() const noexcept { return costs_.size(); }
  const std::vector<double>& costs() const noexcept { return costs_; }
  double cost(std::size_t k) const { return costs_.at(k - 1); }  // 1-based
  const std::optional<double>& cost_inf() const noexcept { return cost_inf_; }
  bool infinite_tail() const noexcept { return !cost_inf_.has_value(); }
  double max_finite_cost() const;

  /// True when the finite SDP model applies: K = |X| or c_inf < infinity.
  bool finite_model(std::size_t alphabet_size) const {
    return K() == alphabet_size || cost_inf_.has_value();
  }

  friend bool operator==(const CostVector&, const CostVector&) = default;

 private:
  std::vector<double> costs_;
  std::optional<double> cost_inf_;
};

/// A guessing sequence over letter indices. Orders built with the default
/// constructor are elements of X^K_distinct; `with_repeats` admits the general
/// X^K sequences a sequential strategy can produce.
class GuessOrder {
 public:
  GuessOrder() = default;
  explicit GuessOrder(std::vector<int> entries);
  static GuessOrder with_repeats(std::vector<int> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<int>& entries() const noexcept { return entries_; }
  int operator[](std::size_t i) const { return entries_[i]; }
  bool distinct() const;

  /// N(g, x): 1-based position of the first occurrence of x, or nullopt (infinity).
  std::optional<std::size_t> guess_count(int x) const;

  std::string to_string(const std::vector<std::string>& letters) const;

  friend auto operator<=>(const GuessOrder&, const GuessOrder&) = default;

 private:
  std::vector<int> entries_;
};

/// N(g, x) with the letter given by name; Validation error for unknown letters.
std::optional<std::size_t> guess_count(const CqEnsemble& ens, const GuessOrder& order,
                                       const std::string& letter);

template <class Label>
struct PovmElement {
  Label label;
  HermitianMatrix op;
};

template <class Label>
struct Povm {
  std::vector<PovmElement<Label>> elements;

  std::size_t size() const noexcept { return elements.size(); }
  HermitianMatrix total(std::size_t dim) const {
    HermitianMatrix s(dim);
    for (const auto& e : elements) s += e.op;
    return s;
  }
};

using OrderPovm = Povm<GuessOrder>;
using OutcomePovm = Povm<std::string>;

/// Throws Validation unless every element is PSD to `psd_tol` and the
/// elements sum to identity within `sum_tol` (Frobenius).
template <class Label>
void validate_povm(const Povm<Label>& povm, std::size_t dim, double psd_tol = 1e-9,
                   double sum_tol = 1e-8);

struct CostOperator {
  GuessOrder order;
  HermitianMatrix matrix;
};

/// Per-letter cost c_{N(g,x)}; nullopt when the letter is missed and c_inf is infinite.
std::optional<double> letter_cost(const CostVector& cv, const GuessOrder& order, int x);

/// R_g = sum_x p(x) c_{N(g,x)} rho_x. Throws Restriction when a letter
/// outside the order would be charged c_inf = infinity.
CostOperator cost_operator(const CqEnsemble& ens, const CostVector& cv, const GuessOrder& order);

/// |X|!/(|X|-K)!, or nullopt on overflow of 64 bits.
std::optional<std::uint64_t> count_orders(std::size_t alphabet_size, std::size_t K);

/// Lazy lexicographic enumeration of X^K_distinct.
class OrderRange {
 public:
  OrderRange(std::size_t alphabet_size, std::size_t K);

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = GuessOrder;
    using difference_type = std::ptrdiff_t;
    using pointer = const GuessOrder*;
    using reference = const GuessOrder&;

    iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_ && (a.done_ || a.current_ == b.current_); }

   private:
    friend class OrderRange;
    iterator(std::size_t n, std::size_t k);
    std::size_t n_ = 0;
    GuessOrder current_;
    bool done_ = true;
  };

  iterator begin() const { return iterator(n_, k_); }
  iterator end() const { return iterator(); }

 private:
  std::size_t n_, k_;
};

inline OrderRange enumerate_orders(std::size_t alphabet_size, std::size_t K) {
  return OrderRange(alphabet_size, K);
}

/// sum_g tr(R_g E_g) for a POVM over guess orders.
double expected_cost(const CqEnsemble& ens, const CostVector& cv, const OrderPovm& povm);

/// rho_XB^{(x) n}. Letters of the product alphabet are joined with '|'.
CqEnsemble tensor_power(const CqEnsemble& ens, int n, std::size_t max_letters = 4096);

/// ||rho_XB - sigma_XB||_1 = sum_x ||p(x) rho_x - q(x) sigma_x||_1 (shared alphabet).
double cq_trace_distance(const CqEnsemble& a, const CqEnsemble& b);

/// t rho_XB + (1-t) sigma_XB on a shared alphabet.
CqEnsemble mix(const CqEnsemble& a, const CqEnsemble& b, double t);

/// Reorders letters: new letter i is old letter perm[i].
CqEnsemble relabel(const CqEnsemble& ens, const std::vector<int>& perm);

}  // namespace guesswork
