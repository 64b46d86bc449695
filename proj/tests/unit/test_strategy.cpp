#include <cmath>
#include <random>

#include "doctest.h"
#include "guesswork/error.hpp"
#include "guesswork/linalg/hermitian.hpp"
#include "guesswork/model/examples.hpp"
#include "guesswork/solver/guesswork.hpp"
#include "guesswork/strategy/strategy.hpp"
#include "support.hpp"

using namespace guesswork;
using linalg::cplx;

namespace {

HermitianMatrix real_ket(double c, double s) {
  const std::vector<cplx> psi{c, s};
  return HermitianMatrix::projector(psi);
}

OrderPovm bb84_theta_povm() {
  const double th = 0.5 * std::atan(1.0 / 3.0);
  return {{{GuessOrder({1, 2, 3, 0}), real_ket(std::sin(th), std::cos(th))},
           {GuessOrder({0, 3, 2, 1}), real_ket(std::cos(th), -std::sin(th))}}};
}

double table_distance(const JointGuessTable& a, const JointGuessTable& b) {
  double err = 0.0;
  auto one_side = [&](const JointGuessTable& p, const JointGuessTable& q) {
    for (const auto& [g, row] : p) {
      const auto it = q.find(g);
      for (std::size_t x = 0; x < row.size(); ++x)
        err = std::max(err, std::abs(row[x] - (it == q.end() ? 0.0 : it->second[x])));
    }
  };
  one_side(a, b);
  one_side(b, a);
  return err;
}

double sum_dagger(const std::vector<linalg::CMatrix>& ops, std::size_t d) {
  HermitianMatrix s(d);
  for (const auto& m : ops) s += gram(m);
  return linalg::frobenius_distance(s, HermitianMatrix::identity(d));
}

}  // namespace

TEST_CASE("BB84 projective strategy compiles to a sequential one") {
  const CqEnsemble bb = examples::bb84();
  const OrderPovm p = bb84_theta_povm();
  const SequentialStrategy s = ordered_to_sequential(p, 4);
  s.validate();
  CHECK(s.steps == 4);
  const auto direct = joint_guess_table(bb, p);
  const auto seq = joint_guess_table(bb, s);
  CHECK(table_distance(direct, seq) < 1e-9);
  const auto rep = guess_distribution(bb, s, CostVector::standard(4));
  CHECK(rep.expected_cost == doctest::Approx((10 - std::sqrt(10.0)) / 4).epsilon(1e-12));
}

TEST_CASE("single order with the identity") {
  const CqEnsemble uni = examples::uninformative(4, 2);
  const OrderPovm p{{{GuessOrder({2, 0, 3, 1}), HermitianMatrix::identity(2)}}};
  const SequentialStrategy s = ordered_to_sequential(p, 4);
  const auto& first = s.operators.at({});
  CHECK(linalg::frobenius_distance(first[2], linalg::CMatrix::identity(2)) < 1e-12);
  CHECK(first[0].frobenius_norm() < 1e-12);
  const auto rep = guess_distribution(uni, s, CostVector::standard(4));
  for (double q : rep.distribution.p) CHECK(q == doctest::Approx(0.25));
  CHECK(rep.expected_cost == doctest::Approx(2.5));
  const auto direct = guess_distribution(uni, p, CostVector::standard(4));
  CHECK(direct.expected_cost == doctest::Approx(2.5));
}

TEST_CASE("uniform mixture on two letters gives identity-proportional operators") {
  const OrderPovm p{{{GuessOrder({0, 1}), HermitianMatrix::identity(2) * 0.5},
                     {GuessOrder({1, 0}), HermitianMatrix::identity(2) * 0.5}}};
  const SequentialStrategy s = ordered_to_sequential(p, 2);
  for (const auto& [h, ops] : s.operators)
    for (const auto& m : ops) {
      const cplx c = m(0, 0);
      CHECK(linalg::frobenius_distance(m, linalg::CMatrix::identity(2) * c) < 1e-12);
    }
}

TEST_CASE("sequential_to_ordered") {
  // K = 1: E_x = M_x^dag M_x.
  std::mt19937_64 rng(51);
  SequentialStrategy one;
  one.alphabet = 3;
  one.dim = 2;
  one.steps = 1;
  std::vector<linalg::CMatrix> ops;
  for (const auto& e : gw_test::random_povm_ops(3, 2, 1, rng)) ops.push_back(linalg::sqrt_psd(e).matrix());
  one.operators[{}] = ops;
  const OrderPovm p = sequential_to_ordered(one);
  REQUIRE(p.size() == 3);
  for (std::size_t x = 0; x < 3; ++x)
    CHECK(linalg::frobenius_distance(p.elements[x].op, gram(ops[x])) < 1e-14);

  // A zero operator on the repeated branch kills every order starting (x, x).
  SequentialStrategy two;
  two.alphabet = 2;
  two.dim = 2;
  two.steps = 2;
  const auto first = gw_test::random_povm_ops(2, 2, 1, rng);
  two.operators[{}] = {linalg::sqrt_psd(first[0]).matrix(), linalg::sqrt_psd(first[1]).matrix()};
  two.operators[{0}] = {linalg::CMatrix(2), linalg::CMatrix::identity(2)};
  two.operators[{1}] = {linalg::CMatrix::identity(2), linalg::CMatrix(2)};
  const OrderPovm q = sequential_to_ordered(two);
  validate_povm(q, 2, 1e-12, 1e-12);
  for (const auto& e : q.elements) CHECK(e.label.distinct());

  two.operators[{1}] = {linalg::CMatrix::identity(2), linalg::CMatrix::identity(2)};
  CHECK_THROWS_AS(sequential_to_ordered(two), Error);
}

TEST_CASE("ordered -> sequential -> ordered on random instances") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 2, d = 2 + (trial / 2) % 2;
    const CqEnsemble e = gw_test::random_ensemble(n, d, rng);
    const std::size_t rank = 1 + trial % d;
    const OrderPovm p = gw_test::random_order_povm(n, n, d, 2 + trial % 5, rank, rng);
    const SequentialStrategy s = ordered_to_sequential(p, n);
    for (const auto& [h, ops] : s.operators) CHECK(sum_dagger(ops, d) < 1e-8);
    const auto direct = joint_guess_table(e, p);
    CHECK(table_distance(direct, joint_guess_table(e, s)) < 1e-8);
    CHECK(table_distance(direct, joint_guess_table(e, sequential_to_ordered(s))) < 1e-8);
  }
}

TEST_CASE("compiling the optimal BB84 POVM") {
  const CqEnsemble bb = examples::bb84();
  const auto sol = solve_primal(bb, CostVector::standard(4));
  const auto rep = guess_distribution(bb, sol.povm, CostVector::standard(4));
  CHECK(std::abs(rep.expected_cost - 1.7094305) < 1e-6);
  const SequentialStrategy s = ordered_to_sequential(sol.povm, 4);
  CHECK(std::abs(guess_distribution(bb, s, CostVector::standard(4)).expected_cost - rep.expected_cost) < 1e-8);
}

TEST_CASE("measured strategies") {
  const CqEnsemble cl = examples::classical_bb84();
  // Standard basis; outcome 0 suggests 0 then +,-; outcome 1 suggests 1 then +,-.
  MeasuredStrategy m;
  m.povm = {{{"y0", real_ket(1, 0)}, {"y1", real_ket(0, 1)}}};
  m.postprocess = {{{GuessOrder({0, 2, 3, 1}), 1.0}}, {{GuessOrder({1, 2, 3, 0}), 1.0}}};
  const OrderPovm tilde = measured_to_ordered(m);
  validate_povm(tilde, 2);
  CHECK(tilde.size() == 2);
  CHECK(guess_distribution(cl, m, CostVector::standard(4)).expected_cost == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(expected_cost(cl, CostVector::standard(4), tilde) == doctest::Approx(1.75).epsilon(1e-14));

  // Deterministic post-processing regroups outcomes sharing an order.
  MeasuredStrategy same = m;
  same.postprocess = {{{GuessOrder({3, 2, 1, 0}), 1.0}}, {{GuessOrder({3, 2, 1, 0}), 1.0}}};
  const OrderPovm merged = measured_to_ordered(same);
  REQUIRE(merged.size() == 1);
  CHECK(linalg::frobenius_distance(merged.elements[0].op, HermitianMatrix::identity(2)) < 1e-15);

  // Single outcome with a randomized choice.
  MeasuredStrategy coin;
  coin.povm = {{{"only", HermitianMatrix::identity(2)}}};
  coin.postprocess = {{{GuessOrder({0, 1}), 0.3}, {GuessOrder({1, 0}), 0.7}}};
  const OrderPovm c = measured_to_ordered(coin);
  REQUIRE(c.size() == 2);
  CHECK(linalg::frobenius_distance(c.elements[0].op, HermitianMatrix::identity(2) * 0.3) < 1e-15);
  CHECK(linalg::frobenius_distance(c.elements[1].op, HermitianMatrix::identity(2) * 0.7) < 1e-15);

  MeasuredStrategy bad = coin;
  bad.postprocess = {{{GuessOrder({0, 1}), 0.3}}};
  CHECK_THROWS_AS(bad.validate(2), Error);
}

TEST_CASE("measured -> ordered preserves the joint distribution and cost") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 2, d = 2 + (trial / 2) % 2, outcomes = 2 + trial % 4;
    const CqEnsemble e = gw_test::random_ensemble(n, d, rng);
    MeasuredStrategy m;
    const auto ops = gw_test::random_povm_ops(outcomes, d, 1, rng);
    std::vector<GuessOrder> all;
    for (const auto& g : enumerate_orders(n, n)) all.push_back(g);
    for (std::size_t y = 0; y < outcomes; ++y) {
      m.povm.elements.push_back({"y" + std::to_string(y), ops[y]});
      const auto w = gw_test::random_distribution(all.size(), rng);
      std::vector<std::pair<GuessOrder, double>> row;
      for (std::size_t i = 0; i < all.size(); ++i) row.emplace_back(all[i], w[i]);
      m.postprocess.push_back(row);
    }
    const OrderPovm tilde = measured_to_ordered(m);
    validate_povm(tilde, d);
    CHECK(table_distance(joint_guess_table(e, m), joint_guess_table(e, tilde)) < 1e-12);
    const CostVector cv = CostVector::standard(n);
    const double a = guess_distribution(e, m, cv).expected_cost, b = expected_cost(e, cv, tilde);
    CHECK(std::abs(a - b) <= 1e-12 * static_cast<double>(n * outcomes));
  }
}

TEST_CASE("guess distribution examples") {
  const CqEnsemble uni = examples::uninformative(4, 2);
  const OrderPovm k1{{{GuessOrder({0}), HermitianMatrix::identity(2)}}};
  const auto r = guess_distribution(uni, k1, CostVector({1}));
  CHECK(std::isinf(r.expected_cost));
  CHECK(r.distribution.p_inf == doctest::Approx(0.75));
  CHECK(guess_distribution(uni, k1, CostVector({1}, 5.0)).expected_cost == doctest::Approx(0.25 + 3.75));
  CHECK_THROWS_AS(guess_distribution(uni, k1, CostVector::standard(4)), Error);
}

TEST_CASE("repeated guesses never help") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3;
    const CqEnsemble e = gw_test::random_ensemble(n, 2, rng);
    std::vector<GuessOrder> labels;
    for (int i = 0; i < 4; ++i) {
      std::vector<int> g(n);
      for (auto& x : g) x = static_cast<int>(rng() % n);
      labels.push_back(GuessOrder::with_repeats(g));
    }
    const auto ops = gw_test::random_povm_ops(labels.size(), 2, 1, rng);
    OrderPovm p;
    for (std::size_t i = 0; i < labels.size(); ++i) p.elements.push_back({labels[i], ops[i]});
    const CostVector cv({1, 2, 3}, 4.0);
    const double before = guess_distribution(e, p, cv).expected_cost;
    const OrderPovm merged = merge_repeats(p, n);
    for (const auto& el : merged.elements) CHECK(el.label.distinct());
    CHECK(guess_distribution(e, merged, cv).expected_cost <= before + 1e-12);
  }
  CHECK(deduplicated(GuessOrder::with_repeats({2, 2, 0}), 4) == GuessOrder({2, 0, 1}));
}

TEST_CASE("guesses after the hit do not matter") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 4;
    const CqEnsemble e = gw_test::random_ensemble(n, 2, rng);
    const OrderPovm shortp = gw_test::random_order_povm(n, 3, 2, 5, 1, rng);
    OrderPovm padded;
    for (const auto& el : shortp.elements) padded.elements.push_back({deduplicated(GuessOrder::with_repeats(
        [&] { auto v = el.label.entries(); v.push_back(v.front()); return v; }()), n), el.op});
    const auto a = guess_distribution(e, shortp, CostVector({1, 2, 3}, 4.0));
    const auto b = guess_distribution(e, padded, CostVector::standard(4));
    for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(a.distribution.p[k] - b.distribution.p[k]) < 1e-14);
    CHECK(std::abs(a.distribution.p_inf - b.distribution.p[3]) < 1e-14);
    CHECK(std::abs(a.expected_cost - b.expected_cost) < 1e-12);
  }
}
