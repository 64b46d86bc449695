#pragma once
// Exact guesswork G_c(X|B) through the SDP over guessing orders, its dual,
// restrictions to order subsets, and classical special cases.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "guesswork/model/ensemble.hpp"
#include "guesswork/model/joint.hpp"
#include "guesswork/sdp/conic.hpp"

namespace guesswork {

struct GuessworkOptions {
  sdp::SolverOptions sdp;
  /// Largest number of orders an SDP may carry.
  std::size_t max_orders = 50000;
  /// Orders with tr(E_g) above this are reported as support.
  double support_threshold = 1e-6;
};

struct GuessworkSolution {
  double value = 0.0;
  OrderPovm povm;
  HermitianMatrix dual_Y;
  double primal_value = 0.0;
  double dual_value = 0.0;  // tr(Y)
  double gap = 0.0;         // relative duality gap reported by the solver
  /// min over the orders in the problem of lambda_min(R_g - Y).
  double certificate_margin = 0.0;
  std::vector<GuessOrder> support;
  sdp::Status status = sdp::Status::MaxIterations;
  long iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// All cost operators over X^K_distinct; SizeCap above `max_orders`, Restriction
/// outside the finite model.
std::vector<CostOperator> all_cost_operators(const CqEnsemble& ens, const CostVector& cv,
                                             std::size_t max_orders = 50000);

/// min sum_g tr(R_g E_g) over POVMs on X^K_distinct. The returned POVM is rescaled to sum
/// exactly to I; value is its cost.
GuessworkSolution solve_primal(const CqEnsemble& ens, const CostVector& cv, const GuessworkOptions& opt = {});

/// max tr(Y) subject to Y <= R_g for every order.
GuessworkSolution solve_dual(const CqEnsemble& ens, const CostVector& cv, const GuessworkOptions& opt = {});

/// The primal with POVM outcomes limited to `orders`; an upper bound on G_c.
GuessworkSolution solve_restricted(const CqEnsemble& ens, const CostVector& cv, const std::vector<GuessOrder>& orders,
                                   const GuessworkOptions& opt = {});

/// The dual with constraints only for `orders`; an upper bound on G_c.
/// `warm` (a previous relaxed solution) seeds Y and the matching POVM elements.
GuessworkSolution solve_dual_restricted(const CqEnsemble& ens, const CostVector& cv,
                                        const std::vector<GuessOrder>& orders, const GuessworkOptions& opt = {},
                                        const GuessworkSolution* warm = nullptr);

enum class VerifyMode { Exhaustive, Sampled };

struct OptimalityReport {
  VerifyMode mode = VerifyMode::Exhaustive;
  double tol = 0.0;
  std::size_t checked = 0;
  double worst_margin = 0.0;
  GuessOrder witness;  // order attaining worst_margin
  bool ok() const { return worst_margin >= -tol; }
};

/// Checks lambda_min(R_g - Y) >= -tol. Exhaustive mode enumerates X^K_distinct
/// (SizeCap above `max_orders`); sampled mode draws `samples` uniform orders
/// plus the solution support.
OptimalityReport verify_optimality(const CqEnsemble& ens, const CostVector& cv, const GuessworkSolution& sol,
                                   VerifyMode mode, double tol = 1e-7, std::size_t samples = 1000,
                                   std::uint64_t seed = 1, std::size_t max_orders = 50000);

struct ClassicalGuess {
  double value = 0.0;  // +inf when c_inf = inf and mass is left after K guesses
  GuessOrder order;
};

/// Guess in order of nonincreasing probability (stable: lower index first).
ClassicalGuess classical_guesswork(const std::vector<double>& probs, const CostVector& cv);

/// sum_y p(y) G(X | Y = y).
double classical_conditional_guesswork(const JointDistribution& joint, const CostVector& cv);

struct MisdpDocument {
  std::string text;
  std::size_t outcomes = 0;
  std::size_t psd_blocks = 0;
  std::size_t binary_blocks = 0;
  std::size_t linearization_variables = 0;
  std::size_t inequalities = 0;
  std::size_t equalities = 0;
  bool exact = false;  // M >= d_B^2
};

/// Mixed-integer SDP with M measurement outcomes and permutation matrices.
/// Requires K = |X|.
MisdpDocument export_misdp(const CqEnsemble& ens, const CostVector& cv, std::size_t outcomes);

}  // namespace guesswork
