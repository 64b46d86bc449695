#pragma once
// Upper bounds on G_c by constraint generation on the dual: a working set of
// orders, the relaxed dual over it, and simulated annealing to find the next
// violated constraint.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "guesswork/model/ensemble.hpp"
#include "guesswork/solver/guesswork.hpp"

namespace guesswork {

struct AnnealSchedule {
  double t0 = 1.0;
  double decay = 0.95;
  int steps_per_temperature = 50;
  double t_min = 1e-4;
};

struct ActiveSetConfig {
  std::size_t kappa = 0;  // 0 selects d_B^2
  double t_max = 240.0;   // seconds
  int sa_restarts = 50;
  AnnealSchedule schedule;
  std::uint64_t rng_seed = 1;
  /// An order counts as violated when lambda_min(R_g - Y) < -violation_tol.
  double violation_tol = 1e-7;
  unsigned threads = 0;  // 0: hardware concurrency
  /// After convergence, confirm exhaustively when |X^K| is at most this.
  std::size_t exhaustive_verify_limit = 5040;
  GuessworkOptions solver;
  std::ostream* log = nullptr;

  void validate() const;
};

struct ActiveSetStep {
  std::size_t iteration = 0;
  std::size_t working_set_size = 0;
  double bound = 0.0;
  double elapsed = 0.0;
};

struct ActiveSetResult {
  double upper_bound = 0.0;
  std::vector<GuessOrder> working_set;
  HermitianMatrix dual_Y;
  OrderPovm povm;  // restricted POVM recovered from the relaxed dual
  bool converged_exact = false;
  std::optional<bool> exhaustively_verified;
  std::size_t iterations = 0;
  double elapsed = 0.0;
  std::vector<ActiveSetStep> trace;
};

ActiveSetResult active_set_upper_bound(const CqEnsemble& ens, const CostVector& cv, const ActiveSetConfig& cfg = {});

/// lambda_min(R_g - Y).
double order_energy(const CqEnsemble& ens, const CostVector& cv, const GuessOrder& g, const HermitianMatrix& y);

struct AnnealResult {
  GuessOrder order;
  double energy = 0.0;
};

/// Lowest energy found over cfg.sa_restarts restarts; ties go to the
/// lexicographically smaller order.
AnnealResult anneal_min_energy(const CqEnsemble& ens, const CostVector& cv, const HermitianMatrix& y,
                               const ActiveSetConfig& cfg);

std::optional<GuessOrder> find_violated_order(const CqEnsemble& ens, const CostVector& cv, const HermitianMatrix& y,
                                              const ActiveSetConfig& cfg = {});

enum class Feasibility { Feasible, Inconclusive };

/// Sufficient condition for Y <= R_g over all orders, checking |X|!/(|X|-k)!
/// lower bounds. Requires K = |X| and 1 <= k < |X|.
Feasibility k_subset_feasibility_check(const CqEnsemble& ens, const CostVector& cv, const HermitianMatrix& y,
                                       std::size_t k, double tol = 1e-9);

}  // namespace guesswork
