// Acceptance criteria 1-10. One PASS/FAIL line per criterion; exit status is
// the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "guesswork/active_set/active_set.hpp"
#include "guesswork/entropy/entropy.hpp"
#include "guesswork/io/cli.hpp"
#include "guesswork/io/document.hpp"
#include "guesswork/model/examples.hpp"
#include "guesswork/model/joint.hpp"
#include "guesswork/solver/guesswork.hpp"
#include "guesswork/strategy/strategy.hpp"
#include "support.hpp"

using namespace guesswork;
using nlohmann::json;

namespace {

constexpr double kTol = 1e-8;  // solver tolerance used throughout

// Tolerances pinned by the criteria.
constexpr double kExactTol = 1e-6;         // 1, 2
constexpr double kDualTol = 2e-6;          // 1
constexpr double kRuntimeLimit = 10.0;     // 1, seconds
constexpr double kClassicalTol = 1e-9;     // 3 (table), 3 (trine measured)
constexpr double kSymmetryTol = 1e-5;      // 4
constexpr double kActiveExactTol = 1e-5;   // 5
constexpr double kActiveSlack = 1e-7;      // 5
constexpr double kRoundTripTol = 1e-8;     // 6
constexpr double kMeasuredTol = 1e-12;     // 6, times K |Y|
constexpr double kGapFactor = 2.0;         // 7, times tol
constexpr double kMarginTol = 1e-6;        // 7
constexpr double kPropertySlack = 5 * kTol;  // 9
constexpr double kBudget = 240.0;          // 10, seconds

const std::string kFixtures = GUESSWORK_FIXTURE_DIR;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GuessworkOptions options() {
  GuessworkOptions o;
  o.sdp.tol = kTol;
  return o;
}

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.10g", v);
  return b;
}

double relative_gap(double p, double d) { return std::abs(p - d) / (1.0 + std::abs(p) + std::abs(d)); }

// Instances solved by criteria 1-6; criterion 7 audits all of them.
struct Solved {
  std::string name;
  CqEnsemble ens;
  CostVector cv;
  GuessworkSolution primal;
  double dual_trace;
};
std::vector<Solved> g_solved;

void record(const std::string& name, const CqEnsemble& ens, const CostVector& cv, const GuessworkSolution& primal) {
  const auto dual = solve_dual(ens, cv, options());
  g_solved.push_back({name, ens, cv, primal, dual.dual_value});
}

CqEnsemble random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 3 + seed % 2;
  const std::size_t d = seed % 3 == 2 ? 3 : 2;
  return gw_test::random_ensemble(n, d, rng);
}

Outcome criterion1() {
  Outcome o;
  const double expected = (10.0 - std::sqrt(10.0)) / 4.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = io::run_command({"solve", kFixtures + "/bb84.json", "--json", "--no-write"}, out, err);
  const double elapsed = seconds_since(t0);
  o.check(code == 0, "solve exited " + std::to_string(code) + ": " + err.str());
  if (code != 0) return o;
  const double value = json::parse(out.str())["solution"]["value"].get<double>();
  const io::Problem p = io::parse_instance(io::read_file(kFixtures + "/bb84.json"));
  const auto dual = solve_dual(p.ensemble, p.costs, options());
  o.check(std::abs(value - expected) <= kExactTol, "value " + fmt(value));
  o.check(std::abs(dual.dual_value - expected) <= kDualTol, "dual " + fmt(dual.dual_value));
  o.check(elapsed < kRuntimeLimit, "runtime " + fmt(elapsed) + " s");
  record("bb84", p.ensemble, p.costs, solve_primal(p.ensemble, p.costs, options()));
  if (o.pass)
    o.detail << "G=" << fmt(value) << " dual=" << fmt(dual.dual_value) << " exact=" << fmt(expected) << " in "
             << fmt(elapsed) << " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double expected = 2.0 - 1.0 / std::sqrt(3.0);
  const io::Problem p = io::parse_instance(io::read_file(kFixtures + "/trine.json"));
  const auto sol = solve_primal(p.ensemble, p.costs, options());
  o.check(std::abs(sol.value - expected) <= kExactTol, "value " + fmt(sol.value));
  record("trine", p.ensemble, p.costs, sol);
  if (o.pass) o.detail << "G=" << fmt(sol.value) << " exact=" << fmt(expected);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const double table = classical_conditional_guesswork(examples::classical_bb84_table(), CostVector::standard(4));
  o.check(std::abs(table - 1.75) <= kClassicalTol, "classical table " + fmt(table));
  for (double phi : {0.0, std::numbers::pi}) {
    const CqEnsemble e = examples::bb84_family(phi);
    const auto sol = solve_primal(e, CostVector::standard(4), options());
    o.check(std::abs(sol.value - 1.75) <= kExactTol, "phi=" + fmt(phi) + " gives " + fmt(sol.value));
    record("bb84-family(" + fmt(phi) + ")", e, CostVector::standard(4), sol);
  }
  // Trine measured in the standard basis, then guessed by posterior.
  const CqEnsemble trine = examples::trine();
  MeasuredStrategy m;
  for (std::size_t y = 0; y < 2; ++y) {
    std::vector<double> e(2, 0.0);
    e[y] = 1.0;
    m.povm.elements.push_back({std::to_string(y), HermitianMatrix::diagonal(e)});
    std::vector<int> order{0, 1, 2};
    std::vector<double> post(3);
    for (std::size_t x = 0; x < 3; ++x) post[x] = trine.prob(x) * trine.state(x)(y, y).real();
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return post[a] > post[b] + 1e-12; });
    m.postprocess.push_back({{GuessOrder(order), 1.0}});
  }
  const double measured = expected_cost(trine, CostVector::standard(3), measured_to_ordered(m));
  o.check(std::abs(measured - 1.5) <= kClassicalTol, "trine standard basis " + fmt(measured));
  if (o.pass) o.detail << "table=" << fmt(table) << " endpoints=1.75 trine-measured=" << fmt(measured);
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::ostringstream out, err;
  const int code = io::run_command({"sweep", "--family", "bb84", "--points", "64", "--json"}, out, err);
  o.check(code == 0, "sweep exited " + std::to_string(code));
  if (code != 0) return o;
  const json j = json::parse(out.str());
  const auto phi = j["phi"].get<std::vector<double>>();
  const auto g = j["guesswork"].get<std::vector<double>>();
  const std::size_t n = g.size();
  o.check(n == 64, "grid size " + std::to_string(n));
  double nearest = 1e9;
  for (double p : phi) nearest = std::min(nearest, std::abs(p - std::numbers::pi / 2));
  const std::size_t argmin = j["argmin"].get<std::size_t>();
  o.check(std::abs(std::abs(phi[argmin] - std::numbers::pi / 2) - nearest) < 1e-12,
          "minimum at phi=" + fmt(phi[argmin]));
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) asym = std::max(asym, std::abs(g[i] - g[n - 1 - i]));
  o.check(asym <= kSymmetryTol, "mirror deviation " + fmt(asym));
  if (o.pass)
    o.detail << "min G=" << fmt(g[argmin]) << " at phi=" << fmt(phi[argmin]) << ", mirror deviation " << fmt(asym)
             << ", endpoints " << fmt(g.front()) << "/" << fmt(g.back());
  return o;
}

Outcome criterion5() {
  Outcome o;
  ActiveSetConfig cfg;
  cfg.solver = options();
  cfg.rng_seed = 1;
  const double bb = active_set_upper_bound(examples::bb84(), CostVector::standard(4), cfg).upper_bound;
  const double tr = active_set_upper_bound(examples::trine(), CostVector::standard(3), cfg).upper_bound;
  const double bb_exact = (10.0 - std::sqrt(10.0)) / 4.0, tr_exact = 2.0 - 1.0 / std::sqrt(3.0);
  o.check(std::abs(bb - bb_exact) <= kActiveExactTol, "bb84 bound " + fmt(bb));
  o.check(std::abs(tr - tr_exact) <= kActiveExactTol, "trine bound " + fmt(tr));
  double worst = 1e9;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const CqEnsemble e = random_instance(seed);
    const CostVector cv = CostVector::standard(e.size());
    const auto exact = solve_primal(e, cv, options());
    record("random-" + std::to_string(seed), e, cv, exact);
    const double ub = active_set_upper_bound(e, cv, cfg).upper_bound;
    worst = std::min(worst, ub - exact.value);
    o.check(ub >= exact.value - kActiveSlack, "seed " + std::to_string(seed) + " bound " + fmt(ub) + " < exact " +
                                                  fmt(exact.value));
  }
  if (o.pass) o.detail << "bb84=" << fmt(bb) << " trine=" << fmt(tr) << ", min(ub-exact) over 50 seeds " << fmt(worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(606);
  double worst_rt = 0.0, worst_measured = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 2, d = 2 + (trial / 2) % 2;
    const CqEnsemble e = gw_test::random_ensemble(n, d, rng);
    const CostVector cv = CostVector::standard(n);
    const auto sol = solve_primal(e, cv, options());
    if (trial < 10) record("roundtrip-" + std::to_string(trial), e, cv, sol);
    const OrderPovm back = sequential_to_ordered(ordered_to_sequential(sol.povm, n));
    const JointGuessTable a = joint_guess_table(e, Strategy{sol.povm});
    const JointGuessTable b = joint_guess_table(e, Strategy{back});
    double dev = 0.0;
    for (const auto& [g, row] : a)
      for (std::size_t x = 0; x < n; ++x) dev = std::max(dev, std::abs(row[x] - (b.count(g) ? b.at(g)[x] : 0.0)));
    for (const auto& [g, row] : b)
      if (!a.count(g))
        for (double v : row) dev = std::max(dev, std::abs(v));
    worst_rt = std::max(worst_rt, dev);
    o.check(dev <= kRoundTripTol, "trial " + std::to_string(trial) + " deviation " + fmt(dev));

    // Measured strategy with random post-processing.
    const std::size_t ny = 2 + trial % 3;
    MeasuredStrategy m;
    const auto ops = gw_test::random_povm_ops(ny, d, 1 + trial % 2, rng);
    std::vector<GuessOrder> all(enumerate_orders(n, n).begin(), enumerate_orders(n, n).end());
    for (std::size_t y = 0; y < ny; ++y) {
      m.povm.elements.push_back({"y" + std::to_string(y), ops[y]});
      const auto w = gw_test::random_distribution(all.size(), rng);
      std::vector<std::pair<GuessOrder, double>> pp;
      for (std::size_t k = 0; k < all.size(); ++k) pp.push_back({all[k], w[k]});
      m.postprocess.push_back(pp);
    }
    double direct = 0.0;
    for (std::size_t y = 0; y < ny; ++y)
      for (const auto& [g, w] : m.postprocess[y])
        for (std::size_t x = 0; x < n; ++x)
          direct += w * e.prob(x) * inner(ops[y], e.state(x)) * *letter_cost(cv, g, static_cast<int>(x));
    const double via = expected_cost(e, cv, measured_to_ordered(m));
    const double diff = std::abs(direct - via);
    worst_measured = std::max(worst_measured, diff);
    o.check(diff <= kMeasuredTol * static_cast<double>(cv.K() * ny),
            "measured trial " + std::to_string(trial) + " differs by " + fmt(diff));
  }
  if (o.pass)
    o.detail << "max ordered round-trip deviation " << fmt(worst_rt) << ", max measured cost difference "
             << fmt(worst_measured);
  return o;
}

Outcome criterion7() {
  Outcome o;
  double worst_gap = 0.0, worst_margin = 1e9;
  std::size_t verified = 0;
  for (const auto& s : g_solved) {
    const double internal = s.primal.gap;
    const double cross = relative_gap(s.primal.value, s.dual_trace);
    worst_gap = std::max({worst_gap, internal, cross});
    o.check(internal <= kGapFactor * kTol, s.name + " solver gap " + fmt(internal));
    o.check(cross <= kGapFactor * kTol, s.name + " primal/dual gap " + fmt(cross));
    const auto count = count_orders(s.ens.size(), s.cv.K());
    if (count && *count <= 720) {
      const auto rep = verify_optimality(s.ens, s.cv, s.primal, VerifyMode::Exhaustive, kMarginTol);
      worst_margin = std::min(worst_margin, rep.worst_margin);
      o.check(rep.worst_margin >= -kMarginTol, s.name + " margin " + fmt(rep.worst_margin));
      ++verified;
    }
  }
  if (o.pass)
    o.detail << g_solved.size() << " instances, max relative gap " << fmt(worst_gap) << ", " << verified
             << " verified exhaustively, worst margin " << fmt(worst_margin);
  return o;
}

Outcome criterion8() {
  Outcome o;
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nx = 2 + trial % 5, ny = 1 + trial % 4;
    const auto flat = gw_test::random_distribution(nx * ny, rng);
    std::vector<std::vector<double>> t(nx, std::vector<double>(ny));
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) t[x][y] = flat[x * ny + y];
    const JointDistribution j(t);
    const auto b = arikan_bounds(j);
    const double g = classical_conditional_guesswork(j, CostVector::standard(nx));
    o.check(b.lower <= g + 1e-12 && g <= b.upper + 1e-12, "joint " + std::to_string(trial) + " not bracketed");
  }
  const CqEnsemble bb = examples::bb84();
  const double h = sandwiched_h_half(bb).lower;
  double slack = 1e9;
  for (int k = 0; k < 20; ++k) {
    OutcomePovm p;
    const auto ops = gw_test::random_povm_ops(2 + k % 4, 2, 1 + k % 2, rng);
    for (std::size_t i = 0; i < ops.size(); ++i) p.elements.push_back({"y" + std::to_string(i), ops[i]});
    const double measured = std::exp(measured_conditional_entropy(bb, p, 0.5));
    slack = std::min(slack, measured - std::exp(h));
    o.check(std::exp(h) <= measured + 1e-9, "POVM " + std::to_string(k) + " below exp(H~)");
  }
  if (o.pass) o.detail << "100 joints bracketed; exp(H~)=" << fmt(std::exp(h)) << ", min measured slack " << fmt(slack);
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(909);
  auto exact = [](const CqEnsemble& e) { return solve_primal(e, CostVector::standard(e.size()), options()).value; };
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3, d = 2 + trial % 2;
    const CqEnsemble a = gw_test::random_ensemble(n, d, rng);
    const CqEnsemble b0 = gw_test::random_ensemble(n, d, rng);
    const CqEnsemble b(a.letters(), b0.probs(), b0.states());
    const double t = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const double ga = exact(a), gb = exact(b);
    const CqEnsemble mixed = mix(a, b, t);
    const double gm = exact(mixed);
    o.check(gm >= t * ga + (1 - t) * gb - kPropertySlack, "concavity trial " + std::to_string(trial));
    const double kappa = static_cast<double>(n);  // c_K
    o.check(std::abs(ga - gm) <= kappa * cq_trace_distance(a, mixed) + kPropertySlack,
            "Lipschitz trial " + std::to_string(trial));
  }
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nx = 2 + trial % 6, ny = 1 + trial % 3;
    const auto flat = gw_test::random_distribution(nx * ny, rng);
    std::vector<std::vector<double>> t(nx, std::vector<double>(ny));
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) t[x][y] = flat[x * ny + y];
    const JointDistribution j(t);
    const double g = classical_conditional_guesswork(j, CostVector::standard(nx));
    o.check(pliam_side_info_bound(j).lower <= g + 1e-12, "Pliam exceeds exact on joint " + std::to_string(trial));
    const auto px = gw_test::random_distribution(4 + trial % 20, rng);
    const auto massey = massey_bound(px);
    const double gx = classical_guesswork(px, CostVector::standard(px.size())).value;
    if (massey.applicable) o.check(massey.lower <= gx + 1e-12, "Massey exceeds exact on trial " + std::to_string(trial));
  }
  const CqEnsemble ideal = examples::uninformative(4, 2);
  const double key = certify_key(ideal, 0.0).lower;
  o.check(std::abs(key - 2.5) <= 1e-12, "ideal key " + fmt(key));
  for (double delta : {1e-6, 1e-3, 0.05, 0.2}) {
    const auto r = certify_key(ideal, delta);
    o.check(r.values.at("robustness_lower") > r.values.at("lipschitz_lower"), "robustness line at delta=" + fmt(delta));
  }
  if (o.pass) o.detail << "100 concavity + 100 Lipschitz trials, Pliam/Massey below exact, ideal key " << fmt(key);
  return o;
}

Outcome criterion10() {
  Outcome o;
  const CqEnsemble t2 = tensor_power(examples::trine(), 2);
  const CostVector cv = CostVector::standard(t2.size());
  ActiveSetConfig cfg;
  cfg.solver = options();
  cfg.t_max = kBudget;
  cfg.rng_seed = 1;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = active_set_upper_bound(t2, cv, cfg);
  const double elapsed = seconds_since(t0);
  o.check(std::isfinite(r.upper_bound), "bound not finite");
  const double lower = quantum_one_shot_bounds(t2, 256).lower;
  o.check(r.upper_bound >= lower, "bound " + fmt(r.upper_bound) + " below entropic lower " + fmt(lower));
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    o.check(r.trace[i].bound <= r.trace[i - 1].bound + 1e-9, "trace not monotone at step " + std::to_string(i));
  // The budget is enforced between iterations; allow one iteration of overrun.
  o.check(elapsed <= kBudget * 1.25, "elapsed " + fmt(elapsed) + " s");
  if (o.pass)
    o.detail << "upper bound " << fmt(r.upper_bound) << " (entropic lower " << fmt(lower) << "), " << r.iterations
             << " iterations, |L|=" << r.working_set.size() << ", " << fmt(elapsed) << " s";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                      criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail.str() << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures;
}
