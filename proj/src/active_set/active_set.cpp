#include "guesswork/active_set/active_set.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "guesswork/error.hpp"
#include "guesswork/linalg/hermitian.hpp"

namespace guesswork {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool better(const AnnealResult& a, const AnnealResult& b) {
  if (a.energy < b.energy - 1e-12) return true;
  if (b.energy < a.energy - 1e-12) return false;
  return a.order < b.order;
}

class Annealer {
 public:
  Annealer(const CqEnsemble& ens, const CostVector& cv, const HermitianMatrix& y)
      : n_(ens.size()), K_(cv.K()), y_(y), cost_(cv.costs()) {
    tail_ = cv.cost_inf().value_or(0.0);
    w_.reserve(n_);
    for (std::size_t x = 0; x < n_; ++x) w_.push_back(ens.state(x) * ens.prob(x));
  }

  AnnealResult run(std::uint64_t seed, const AnnealSchedule& s) const {
    std::mt19937_64 rng(seed);
    std::vector<int> letters(n_);
    std::iota(letters.begin(), letters.end(), 0);
    std::shuffle(letters.begin(), letters.end(), rng);
    std::vector<int> order(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(K_));
    std::vector<int> unused(letters.begin() + static_cast<std::ptrdiff_t>(K_), letters.end());

    HermitianMatrix m = build(order, unused);
    double e = linalg::min_eigenvalue(m);
    AnnealResult best{GuessOrder(order), e};
    const bool can_swap = K_ >= 2, can_replace = !unused.empty();
    if (!can_swap && !can_replace) return best;

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    HermitianMatrix trial = m;
    for (double t = s.t0; t > s.t_min; t *= s.decay) {
      for (int step = 0; step < s.steps_per_temperature; ++step) {
        trial = m;
        std::size_t i = rng() % K_, j = 0;
        const bool replace = can_replace && (!can_swap || (rng() & 1));
        if (replace) {
          j = rng() % unused.size();
          const int a = order[i], b = unused[j];
          trial.add_scaled(cost_[i] - tail_, w_[b]);
          trial.add_scaled(tail_ - cost_[i], w_[a]);
        } else {
          j = rng() % (K_ - 1);
          if (j >= i) ++j;
          const int a = order[i], b = order[j];
          trial.add_scaled(cost_[j] - cost_[i], w_[a]);
          trial.add_scaled(cost_[i] - cost_[j], w_[b]);
        }
        const double e2 = linalg::min_eigenvalue(trial);
        if (e2 <= e || unif(rng) < std::exp((e - e2) / t)) {
          if (replace)
            std::swap(order[i], unused[j]);
          else
            std::swap(order[i], order[j]);
          std::swap(m, trial);
          e = e2;
          const AnnealResult cand{GuessOrder(order), e};
          if (better(cand, best)) best = cand;
        }
      }
      m = build(order, unused);
      e = linalg::min_eigenvalue(m);
    }
    return best;
  }

 private:
  HermitianMatrix build(const std::vector<int>& order, const std::vector<int>& unused) const {
    HermitianMatrix m = y_ * -1.0;
    for (std::size_t k = 0; k < K_; ++k) m.add_scaled(cost_[k], w_[order[k]]);
    for (int x : unused) m.add_scaled(tail_, w_[x]);
    return m;
  }

  std::size_t n_, K_;
  const HermitianMatrix& y_;
  std::vector<double> cost_;
  double tail_ = 0.0;
  std::vector<HermitianMatrix> w_;
};

void check_inputs(const CqEnsemble& ens, const CostVector& cv, const HermitianMatrix& y) {
  require(cv.K() >= 1 && cv.K() <= ens.size(), "cost vector length K must satisfy 1 <= K <= |X|");
  if (!cv.finite_model(ens.size()))
    fail(ErrorKind::Restriction, "c_inf = inf with K < |X|: supply a finite c_inf or K = |X|");
  require(y.dim() == ens.dim(), "Y dimension differs from d_B");
}

}  // namespace

void ActiveSetConfig::validate() const {
  require(kappa >= 1 || kappa == 0, "kappa must be >= 1");
  require(t_max > 0.0, "t_max must be positive");
  require(sa_restarts >= 1, "sa_restarts must be >= 1");
  require(schedule.t0 > 0.0 && schedule.t_min > 0.0, "annealing temperatures must be positive");
  require(schedule.decay > 0.0 && schedule.decay < 1.0, "annealing decay must lie in (0,1)");
  require(schedule.steps_per_temperature >= 1, "steps per temperature must be >= 1");
  require(violation_tol >= 0.0, "violation_tol must be >= 0");
}

double order_energy(const CqEnsemble& ens, const CostVector& cv, const GuessOrder& g, const HermitianMatrix& y) {
  return linalg::min_eigenvalue(cost_operator(ens, cv, g).matrix - y);
}

AnnealResult anneal_min_energy(const CqEnsemble& ens, const CostVector& cv, const HermitianMatrix& y,
                               const ActiveSetConfig& cfg) {
  cfg.validate();
  check_inputs(ens, cv, y);
  const Annealer annealer(ens, cv, y);
  const std::size_t restarts = static_cast<std::size_t>(cfg.sa_restarts);
  std::vector<AnnealResult> found(restarts);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t r = first; r < restarts; r += stride)
      found[r] = annealer.run(splitmix64(cfg.rng_seed ^ splitmix64(r)), cfg.schedule);
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, restarts);
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  AnnealResult best = found.front();
  for (const auto& f : found)
    if (better(f, best)) best = f;
  best.energy = order_energy(ens, cv, best.order, y);
  return best;
}

std::optional<GuessOrder> find_violated_order(const CqEnsemble& ens, const CostVector& cv, const HermitianMatrix& y,
                                              const ActiveSetConfig& cfg) {
  const auto r = anneal_min_energy(ens, cv, y, cfg);
  if (r.energy < -cfg.violation_tol) return r.order;
  return std::nullopt;
}

ActiveSetResult active_set_upper_bound(const CqEnsemble& ens, const CostVector& cv, const ActiveSetConfig& cfg) {
  cfg.validate();
  const std::size_t d = ens.dim();
  check_inputs(ens, cv, HermitianMatrix(d));
  const std::size_t kappa = cfg.kappa ? cfg.kappa : d * d;
  const auto start = Clock::now();

  ActiveSetResult res;
  res.dual_Y = HermitianMatrix::identity(d);
  GuessworkSolution sol;
  bool solved = false;
  while (true) {
    const auto iter_start = Clock::now();
    const AnnealResult a = anneal_min_energy(ens, cv, res.dual_Y, cfg);
    if (solved && a.energy >= -cfg.violation_tol) {
      res.converged_exact = true;
      break;
    }
    if (!solved && seconds_since(start) > cfg.t_max) {
      std::ostringstream msg;
      msg << "active set: time budget of " << cfg.t_max << " s exhausted before the first relaxed solve; "
          << "candidate order " << a.order.to_string(ens.letters()) << " with energy " << a.energy;
      fail(ErrorKind::Budget, msg.str());
    }
    if (std::find(res.working_set.begin(), res.working_set.end(), a.order) != res.working_set.end()) {
      // Only solver inaccuracy can flag an order already imposed.
      if (cfg.log) *cfg.log << "active-set repeat order=" << a.order.to_string(ens.letters()) << '\n';
      break;
    }
    // The first order is imposed even when Y = I is not violated; with an empty set the relaxation is unbounded.
    res.working_set.push_back(a.order);
    sol = solve_dual_restricted(ens, cv, res.working_set, cfg.solver, solved ? &sol : nullptr);
    solved = true;
    res.dual_Y = sol.dual_Y;
    ++res.iterations;
    const ActiveSetStep step{res.iterations, res.working_set.size(), sol.value, seconds_since(start)};
    res.trace.push_back(step);
    if (cfg.log) {
      *cfg.log << "active-set iter=" << step.iteration << " L=" << step.working_set_size << " bound="
               << std::setprecision(12) << step.bound << " elapsed=" << std::setprecision(4) << step.elapsed
               << '\n';
    }
    if (res.working_set.size() >= kappa) break;
    if (step.elapsed + seconds_since(iter_start) > cfg.t_max) break;
  }
  res.upper_bound = sol.value;
  res.povm = sol.povm;
  if (res.converged_exact) {
    const auto count = count_orders(ens.size(), cv.K());
    if (count && *count <= cfg.exhaustive_verify_limit)
      res.exhaustively_verified =
          verify_optimality(ens, cv, sol, VerifyMode::Exhaustive, cfg.violation_tol, 0, 1, *count).ok();
  }
  res.elapsed = seconds_since(start);
  return res;
}

Feasibility k_subset_feasibility_check(const CqEnsemble& ens, const CostVector& cv, const HermitianMatrix& y,
                                       std::size_t k, double tol) {
  const std::size_t n = ens.size();
  require(cv.K() == n, "k-subset check requires K = |X|");
  require(k >= 1 && k < n, "k-subset check requires 1 <= k < |X|");
  require(y.dim() == ens.dim(), "Y dimension differs from d_B");
  // Letters guessed last cost at least c_{n}, c_{n-1}, ...; every other letter at least c_1.
  HermitianMatrix all(ens.dim());
  for (std::size_t x = 0; x < n; ++x) all.add_scaled(ens.prob(x) * cv.cost(1), ens.state(x));
  all -= y;
  for (const auto& tuple : enumerate_orders(n, k)) {
    HermitianMatrix b = all;
    for (std::size_t i = 0; i < k; ++i) {
      const auto x = static_cast<std::size_t>(tuple.entries()[i]);
      b.add_scaled(ens.prob(x) * (cv.cost(n - i) - cv.cost(1)), ens.state(x));
    }
    if (linalg::min_eigenvalue(b) < -tol) return Feasibility::Inconclusive;
  }
  return Feasibility::Feasible;
}

}  // namespace guesswork
