#include "guesswork/io/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "guesswork/active_set/active_set.hpp"
#include "guesswork/entropy/entropy.hpp"
#include "guesswork/io/document.hpp"
#include "guesswork/model/examples.hpp"
#include "guesswork/model/joint.hpp"
#include "guesswork/solver/guesswork.hpp"
#include "guesswork/strategy/strategy.hpp"

namespace guesswork::io {

using nlohmann::json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation:
    case ErrorKind::Restriction:
      return kExitValidation;
    case ErrorKind::Numerical:
      return kExitNumerical;
    case ErrorKind::SizeCap:
    case ErrorKind::Budget:
      return kExitSizeCap;
  }
  return kExitInternal;
}

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct Common {
  bool json = false;
  double tol = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  std::string output;
};

struct Loaded {
  std::string label;
  Problem problem;
};

Loaded load(const std::string& path) {
  InstanceDocument doc = parse_document(read_file(path));
  std::string label = doc.name.value_or(std::filesystem::path(path).stem().string());
  return {std::move(label), to_problem(doc)};
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(9) << v;
  return s.str();
}

void row(std::ostream& out, const std::string& key, const std::string& value) {
  out << std::left << std::setw(22) << key << value << '\n';
}

GuessworkOptions solver_options(const Common& c) {
  GuessworkOptions o;
  o.sdp.tol = c.tol;
  return o;
}

json stamp(const std::string& command, const Common& c) {
  return {{"command", command}, {"tol", c.tol}, {"seed", c.seed}};
}

json bound_json(const BoundReport& r) {
  json j{{"quantity", r.quantity}, {"lower", r.lower},         {"upper", r.upper},
         {"log_base", r.log_base}, {"applicable", r.applicable}, {"assumptions", r.assumptions},
         {"values", r.values}};
  return j;
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void add_common(CLI::App* sc, Common& c, bool with_output = true) {
  sc->add_flag("--json", c.json, "Machine-readable output");
  sc->add_option("--tol", c.tol, "Solver tolerance")->check(CLI::PositiveNumber);
  sc->add_option("--seed", c.seed, "Seed for all randomness (default 1)");
  if (with_output) sc->add_option("-o,--output", c.output, "Write the result document to this file");
}

int cmd_solve(const std::string& path, const std::string& verify, std::size_t samples, double verify_tol, bool no_write,
              const Common& c, std::ostream& out) {
  const Loaded in = load(path);
  const auto& [ens, cv] = in.problem;
  const auto sol = solve_primal(ens, cv, solver_options(c));
  json j = stamp("solve", c);
  j["instance"] = in.label;
  j["solution"] = solution_json(ens, sol);
  std::optional<OptimalityReport> rep;
  if (verify != "none") {
    rep = verify_optimality(ens, cv, sol, verify == "exhaustive" ? VerifyMode::Exhaustive : VerifyMode::Sampled,
                            verify_tol, samples, c.seed);
    j["verify"] = {{"mode", verify},
                   {"checked", rep->checked},
                   {"worst_margin", rep->worst_margin},
                   {"witness", order_json(rep->witness, ens.letters())},
                   {"tol", rep->tol},
                   {"ok", rep->ok()}};
  }
  std::string target = c.output;
  if (target.empty() && !no_write) target = std::filesystem::path(path).stem().string() + ".solution.json";
  if (!target.empty()) write_file(target, j.dump(2) + "\n");

  if (c.json) {
    emit_json(out, j);
  } else {
    row(out, "instance", in.label);
    row(out, "guesswork", num(sol.value));
    row(out, "dual tr(Y)", num(sol.dual_value));
    row(out, "relative gap", num(sol.gap));
    row(out, "status", sdp::to_string(sol.status) + " (" + std::to_string(sol.iterations) + " iterations)");
    row(out, "support", std::to_string(sol.support.size()) + " orders");
    for (const auto& g : sol.support) row(out, "", g.to_string(ens.letters()));
    if (rep)
      row(out, "verify", verify + ", " + std::to_string(rep->checked) + " orders, worst margin " +
                             num(rep->worst_margin) + (rep->ok() ? " ok" : " FAILED"));
    if (!target.empty()) row(out, "written", target);
  }
  return rep && !rep->ok() ? kExitNumerical : kExitOk;
}

int cmd_dual(const std::string& path, const Common& c, std::ostream& out) {
  const Loaded in = load(path);
  const auto& [ens, cv] = in.problem;
  const auto sol = solve_dual(ens, cv, solver_options(c));
  json j = stamp("dual", c);
  j["instance"] = in.label;
  j["solution"] = solution_json(ens, sol);
  if (!c.output.empty()) write_file(c.output, j.dump(2) + "\n");
  if (c.json) {
    emit_json(out, j);
  } else {
    row(out, "instance", in.label);
    row(out, "tr(Y)", num(sol.dual_value));
    row(out, "primal value", num(sol.primal_value));
    row(out, "certificate margin", num(sol.certificate_margin));
    row(out, "status", sdp::to_string(sol.status) + " (" + std::to_string(sol.iterations) + " iterations)");
  }
  return kExitOk;
}

int cmd_bound(const std::string& path, ActiveSetConfig cfg, bool verbose, const Common& c, std::ostream& out,
              std::ostream& err) {
  const Loaded in = load(path);
  const auto& [ens, cv] = in.problem;
  cfg.rng_seed = c.seed;
  cfg.solver = solver_options(c);
  if (verbose) cfg.log = &err;
  const auto r = active_set_upper_bound(ens, cv, cfg);
  json trace = json::array();
  for (const auto& s : r.trace)
    trace.push_back({{"iteration", s.iteration}, {"working_set", s.working_set_size}, {"bound", s.bound},
                     {"elapsed", s.elapsed}});
  json ws = json::array();
  for (const auto& g : r.working_set) ws.push_back(order_json(g, ens.letters()));
  json j = stamp("bound", c);
  j["instance"] = in.label;
  j["upper_bound"] = r.upper_bound;
  j["converged_exact"] = r.converged_exact;
  j["exhaustively_verified"] = r.exhaustively_verified ? json(*r.exhaustively_verified) : json(nullptr);
  j["iterations"] = r.iterations;
  j["elapsed"] = r.elapsed;
  j["kappa"] = cfg.kappa ? cfg.kappa : ens.dim() * ens.dim();
  j["t_max"] = cfg.t_max;
  j["working_set"] = ws;
  j["trace"] = trace;
  if (!c.output.empty()) write_file(c.output, j.dump(2) + "\n");
  if (c.json) {
    emit_json(out, j);
    return kExitOk;
  }
  row(out, "instance", in.label);
  row(out, "upper bound", num(r.upper_bound));
  row(out, "working set", std::to_string(r.working_set.size()) + " orders");
  row(out, "converged", r.converged_exact ? "yes" : "no");
  row(out, "verified", r.exhaustively_verified ? (*r.exhaustively_verified ? "exhaustive ok" : "exhaustive FAILED")
                                               : "not checked");
  row(out, "elapsed [s]", num(r.elapsed));
  out << "\n  iter   |L|   bound        elapsed\n";
  for (const auto& s : r.trace)
    out << "  " << std::setw(4) << s.iteration << "  " << std::setw(4) << s.working_set_size << "   "
        << std::setw(12) << num(s.bound) << " " << num(s.elapsed) << '\n';
  return kExitOk;
}

bool diagonal(const CqEnsemble& ens) {
  for (const auto& s : ens.states())
    for (std::size_t i = 0; i < s.dim(); ++i)
      for (std::size_t k = 0; k < s.dim(); ++k)
        if (i != k && std::abs(s(i, k)) > 1e-14) return false;
  return true;
}

int cmd_entropic(const std::string& path, std::size_t samples, int copies, const Common& c, std::ostream& out) {
  const Loaded in = load(path);
  const auto& ens = in.problem.ensemble;
  std::vector<BoundReport> reports;
  std::vector<std::string> notes;
  reports.push_back(quantum_one_shot_bounds(ens, samples, c.seed));
  for (int n = 1; n <= copies; ++n) {
    try {
      BoundReport a = asymptotic_bounds(ens, n, samples, c.seed);
      a.quantity += " (n=" + std::to_string(n) + ")";
      reports.push_back(std::move(a));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SizeCap) throw;
      notes.push_back("n=" + std::to_string(n) + " skipped: " + e.what());
    }
  }
  reports.push_back(massey_bound(ens.probs()));
  if (diagonal(ens)) {
    OutcomePovm z;
    for (std::size_t i = 0; i < ens.dim(); ++i) {
      std::vector<double> e(ens.dim(), 0.0);
      e[i] = 1.0;
      z.elements.push_back({std::to_string(i), HermitianMatrix::diagonal(e)});
    }
    const JointDistribution joint = JointDistribution::from_measurement(ens, z);
    reports.push_back(arikan_bounds(joint));
    reports.push_back(pliam_side_info_bound(joint));
  } else {
    notes.push_back("classical Arikan/Pliam bounds need diagonal states; skipped");
  }
  json j = stamp("entropic", c);
  j["instance"] = in.label;
  j["samples"] = samples;
  j["reports"] = json::array();
  for (const auto& r : reports) j["reports"].push_back(bound_json(r));
  j["notes"] = notes;
  if (!c.output.empty()) write_file(c.output, j.dump(2) + "\n");
  if (c.json) {
    emit_json(out, j);
    return kExitOk;
  }
  row(out, "instance", in.label);
  out << '\n' << std::left << std::setw(40) << "quantity" << std::setw(14) << "lower" << std::setw(14) << "upper"
      << "log\n";
  for (const auto& r : reports) {
    out << std::setw(40) << r.quantity << std::setw(14) << (r.applicable ? num(r.lower) : "n/a") << std::setw(14)
        << num(r.upper) << r.log_base << '\n';
  }
  for (const auto& n : notes) out << "note: " << n << '\n';
  return kExitOk;
}

int cmd_certify(const std::string& path, double epsilon, const Common& c, std::ostream& out) {
  const Loaded in = load(path);
  const auto r = certify_key(in.problem.ensemble, epsilon);
  json j = stamp("certify-key", c);
  j["instance"] = in.label;
  j["epsilon"] = epsilon;
  j["report"] = bound_json(r);
  if (!c.output.empty()) write_file(c.output, j.dump(2) + "\n");
  if (c.json) {
    emit_json(out, j);
    return kExitOk;
  }
  row(out, "instance", in.label);
  row(out, "lower bound", num(r.lower));
  row(out, "upper bound", num(r.upper));
  for (const auto& [k, v] : r.values) row(out, k, num(v));
  for (const auto& a : r.assumptions) row(out, "assumption", a);
  return kExitOk;
}

json distribution_json(const GuessReport& g) {
  return {{"p", g.distribution.p},
          {"p_inf", g.distribution.p_inf},
          {"expected_cost", std::isfinite(g.expected_cost) ? json(g.expected_cost) : json("inf")}};
}

void print_distribution(std::ostream& out, const std::string& title, const GuessReport& g) {
  out << title << '\n';
  for (std::size_t k = 0; k < g.distribution.p.size(); ++k)
    out << "  Pr[N=" << k + 1 << "] = " << num(g.distribution.p[k]) << '\n';
  if (g.distribution.p_inf > 1e-12) out << "  Pr[N=inf] = " << num(g.distribution.p_inf) << '\n';
  out << "  expected cost = " << num(g.expected_cost) << '\n';
}

int cmd_strategy(const std::string& path, bool reconstruct, const std::string& replay, const Common& c,
                 std::ostream& out) {
  const Loaded in = load(path);
  const auto& [ens, cv] = in.problem;
  json j = stamp("strategy", c);
  j["instance"] = in.label;
  if (!replay.empty()) {
    json doc;
    try {
      doc = json::parse(read_file(replay));
    } catch (const json::parse_error& e) {
      fail(ErrorKind::Validation, std::string("strategy: ") + e.what());
    }
    const Strategy s = strategy_from_json(doc, ens);
    const GuessReport g = guess_distribution(ens, s, cv);
    j["replay"] = distribution_json(g);
    if (c.json)
      emit_json(out, j);
    else
      print_distribution(out, "replayed " + replay, g);
    return kExitOk;
  }

  const auto sol = solve_primal(ens, cv, solver_options(c));
  const GuessReport ordered = guess_distribution(ens, Strategy{sol.povm}, cv);
  j["ordered"] = distribution_json(ordered);
  Strategy emitted = sol.povm;
  double deviation = 0.0;
  std::optional<GuessReport> sequential;
  if (reconstruct) {
    const SequentialStrategy seq = ordered_to_sequential(sol.povm, ens.size());
    const JointGuessTable a = joint_guess_table(ens, Strategy{sol.povm});
    const JointGuessTable b = joint_guess_table(ens, Strategy{sequential_to_ordered(seq)});
    for (const auto& [g, row_a] : a) {
      const auto it = b.find(g);
      for (std::size_t x = 0; x < row_a.size(); ++x)
        deviation = std::max(deviation, std::abs(row_a[x] - (it == b.end() ? 0.0 : it->second[x])));
    }
    for (const auto& [g, row_b] : b)
      if (!a.count(g))
        for (double v : row_b) deviation = std::max(deviation, std::abs(v));
    sequential = guess_distribution(ens, Strategy{seq}, cv);
    j["sequential"] = distribution_json(*sequential);
    j["round_trip_deviation"] = deviation;
    emitted = seq;
  }
  j["strategy"] = strategy_json(ens, emitted);
  if (!c.output.empty()) write_file(c.output, j["strategy"].dump(2) + "\n");
  if (c.json) {
    emit_json(out, j);
    return kExitOk;
  }
  row(out, "instance", in.label);
  row(out, "guesswork", num(sol.value));
  print_distribution(out, "ordered strategy", ordered);
  if (sequential) {
    print_distribution(out, "sequential strategy", *sequential);
    row(out, "nodes", std::to_string(std::get<SequentialStrategy>(emitted).operators.size()));
    row(out, "round-trip deviation", num(deviation));
  }
  if (!c.output.empty()) row(out, "written", c.output);
  return kExitOk;
}

int cmd_sweep(const std::string& family, std::size_t points, double from, double to, const Common& c,
              std::ostream& out) {
  require(family == "bb84", "sweep: unknown family '" + family + "' (supported: bb84)");
  require(points >= 2, "sweep: need at least 2 points");
  std::vector<double> phi(points), value(points);
  for (std::size_t i = 0; i < points; ++i) {
    phi[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
    value[i] = solve_primal(examples::bb84_family(phi[i]), CostVector::standard(4), solver_options(c)).value;
  }
  const std::size_t argmin = static_cast<std::size_t>(std::min_element(value.begin(), value.end()) - value.begin());
  double asym = 0.0;
  for (std::size_t i = 0; i < points; ++i) asym = std::max(asym, std::abs(value[i] - value[points - 1 - i]));
  json j = stamp("sweep", c);
  j["family"] = family;
  j["phi"] = phi;
  j["guesswork"] = value;
  j["argmin"] = argmin;
  j["max_mirror_deviation"] = asym;
  if (!c.output.empty()) write_file(c.output, j.dump(2) + "\n");
  if (c.json) {
    emit_json(out, j);
    return kExitOk;
  }
  out << "   i   phi          G(X|B)\n";
  for (std::size_t i = 0; i < points; ++i)
    out << std::right << std::setw(4) << i << "   " << std::left << std::setw(12) << num(phi[i]) << " "
        << num(value[i]) << (i == argmin ? "  <- min" : "") << '\n';
  row(out, "mirror deviation", num(asym));
  return kExitOk;
}

int cmd_misdp(const std::string& path, std::size_t outcomes, const Common& c, std::ostream& out) {
  const Loaded in = load(path);
  const auto doc = export_misdp(in.problem.ensemble, in.problem.costs, outcomes);
  if (!c.output.empty()) write_file(c.output, doc.text);
  if (c.json) {
    json j = stamp("export-misdp", c);
    j["instance"] = in.label;
    j["outcomes"] = doc.outcomes;
    j["psd_blocks"] = doc.psd_blocks;
    j["binary_blocks"] = doc.binary_blocks;
    j["linearization_variables"] = doc.linearization_variables;
    j["inequalities"] = doc.inequalities;
    j["equalities"] = doc.equalities;
    j["exact"] = doc.exact;
    if (c.output.empty()) j["text"] = doc.text;
    emit_json(out, j);
  } else if (c.output.empty()) {
    out << doc.text;
  } else {
    row(out, "outcomes", std::to_string(doc.outcomes) + (doc.exact ? " (exact)" : " (restriction)"));
    row(out, "written", c.output);
  }
  return kExitOk;
}

int cmd_gen(const std::string& name, const ExampleParams& p, const Common& c, std::ostream& out) {
  const std::string text = serialize(generate_example(name, p));
  if (!c.output.empty()) {
    write_file(c.output, text);
    if (c.json) emit_json(out, json{{"command", "gen"}, {"seed", c.seed}, {"tol", c.tol}, {"written", c.output}});
  } else {
    out << text;
  }
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Guesswork with quantum side information"};
  app.name("guesswork");
  app.require_subcommand(1);
  Common c;
  std::string instance;

  auto* solve = app.add_subcommand("solve", "Exact guesswork by the primal SDP");
  std::string verify = "none";
  std::size_t samples = 1000;
  double verify_tol = 1e-6;
  bool no_write = false;
  solve->add_option("instance", instance)->required();
  solve->add_option("--verify", verify, "Optimality check")->check(CLI::IsMember({"none", "exhaustive", "sampled"}));
  solve->add_option("--samples", samples, "Orders drawn by --verify sampled");
  solve->add_option("--verify-tol", verify_tol, "Allowed negative margin");
  solve->add_flag("--no-write", no_write, "Do not write <instance>.solution.json");
  add_common(solve, c);

  auto* dual = app.add_subcommand("dual", "Dual SDP certificate");
  dual->add_option("instance", instance)->required();
  add_common(dual, c);

  auto* bound = app.add_subcommand("bound", "Active-set upper bound");
  ActiveSetConfig cfg;
  bool verbose = false;
  bound->add_option("instance", instance)->required();
  bound->add_option("--kappa", cfg.kappa, "Working-set cap (0: d_B^2)");
  bound->add_option("--tmax", cfg.t_max, "Time budget in seconds");
  bound->add_option("--restarts", cfg.sa_restarts, "Annealing restarts");
  bound->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
  bound->add_flag("-v,--verbose", verbose, "Log iterations to stderr");
  add_common(bound, c);

  auto* entropic = app.add_subcommand("entropic", "Entropic lower and upper bounds");
  std::size_t search = 4096;
  int copies = 2;
  entropic->add_option("instance", instance)->required();
  entropic->add_option("--samples", search, "Measurements tried by the measured-entropy search");
  entropic->add_option("--copies", copies, "Largest n for the rate sandwich")->check(CLI::Range(1, 3));
  add_common(entropic, c);

  auto* certify = app.add_subcommand("certify-key", "Guesswork certificate for an imperfect key");
  double epsilon = 0.0;
  certify->add_option("instance", instance)->required();
  certify->add_option("--epsilon", epsilon, "Declared trace-distance promise")->check(CLI::Range(0.0, 1.0));
  add_common(certify, c);

  auto* strategy = app.add_subcommand("strategy", "Optimal strategy and its sequential compilation");
  bool reconstruct = false;
  std::string replay;
  strategy->add_option("instance", instance)->required();
  strategy->add_flag("--reconstruct-sequential", reconstruct, "Compile the ordered POVM into sequential measurements");
  strategy->add_option("--replay", replay, "Evaluate a stored strategy document instead of solving");
  add_common(strategy, c);

  auto* sweep = app.add_subcommand("sweep", "Guesswork along a family of instances");
  std::string family = "bb84";
  std::size_t points = 64;
  double from = 0.0, to = std::numbers::pi;
  sweep->add_option("--family", family, "Instance family");
  sweep->add_option("--points,--phi-grid", points, "Grid points");
  sweep->add_option("--from", from, "First phi");
  sweep->add_option("--to", to, "Last phi");
  add_common(sweep, c);

  auto* misdp = app.add_subcommand("export-misdp", "Write the mixed-integer SDP");
  std::size_t outcomes = 0;
  misdp->add_option("instance", instance)->required();
  misdp->add_option("--outcomes", outcomes, "Measurement outcomes M")->required()->check(CLI::PositiveNumber);
  add_common(misdp, c);

  auto* gen = app.add_subcommand("gen", "Generate an example instance");
  std::string name;
  ExampleParams params;
  gen->add_option("name", name)->required()->check(CLI::IsMember(example_names()));
  gen->add_option("--phi", params.phi, "Angle for bb84-family");
  gen->add_option("--n", params.n, "Letters for random and ideal examples");
  gen->add_option("--inner", params.inner, "Inner example for tensor2");
  add_common(gen, c);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return kExitValidation;
  }

  try {
    params.seed = c.seed;
    if (solve->parsed()) return cmd_solve(instance, verify, samples, verify_tol, no_write, c, out);
    if (dual->parsed()) return cmd_dual(instance, c, out);
    if (bound->parsed()) return cmd_bound(instance, cfg, verbose, c, out, err);
    if (entropic->parsed()) return cmd_entropic(instance, search, copies, c, out);
    if (certify->parsed()) return cmd_certify(instance, epsilon, c, out);
    if (strategy->parsed()) return cmd_strategy(instance, reconstruct, replay, c, out);
    if (sweep->parsed()) return cmd_sweep(family, points, from, to, c, out);
    if (misdp->parsed()) return cmd_misdp(instance, outcomes, c, out);
    if (gen->parsed()) return cmd_gen(name, params, c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace guesswork::io
