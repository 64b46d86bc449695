#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "guesswork/io/cli.hpp"
#include "guesswork/io/document.hpp"
#include "guesswork/model/examples.hpp"
#include "guesswork/solver/guesswork.hpp"

using namespace guesswork;
using namespace guesswork::io;
using nlohmann::json;

namespace {

const std::string kFixtures = GUESSWORK_FIXTURE_DIR;

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("gw_io_" + name)).string();
}

std::string error_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
    return e.what();
  }
  return "";
}

const char* kHead = R"({"schema": "guesswork-instance/1", "letters": ["a", "b"],)";

}  // namespace

TEST_CASE("fixtures parse") {
  const Problem bb = parse_instance(read_file(fixture("bb84.json")));
  CHECK(bb.ensemble.size() == 4);
  CHECK(bb.ensemble.dim() == 2);
  CHECK(bb.costs == CostVector::standard(4));
  CHECK(frobenius_distance(bb.ensemble.state(2), examples::bb84().state(2)) < 1e-15);
  const Problem ideal = parse_instance(read_file(fixture("ideal4.json")));
  CHECK(ideal.ensemble.size() == 4);
}

TEST_CASE("round trip is bit exact") {
  for (const auto& entry : std::filesystem::directory_iterator(kFixtures)) {
    CAPTURE(entry.path().string());
    const std::string text = read_file(entry.path().string());
    const InstanceDocument doc = parse_document(text);
    const std::string again = serialize(doc);
    CHECK(parse_document(again) == doc);
    CHECK(again == text);
  }
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    InstanceDocument doc = generate_example("random-qutrits", {.n = 3, .seed = rng()});
    doc.costs = std::vector<double>{u(rng) + 1.0, 2.5, 3.0};
    doc.cost_inf = 7.0 + u(rng);
    doc.K = 3;
    CHECK(parse_document(serialize(doc)) == doc);
  }
}

TEST_CASE("defaults") {
  const std::string text = std::string(kHead) + R"("states": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]})";
  const Problem p = parse_instance(text);
  CHECK(p.ensemble.probs() == std::vector<double>{0.5, 0.5});
  CHECK(p.costs == CostVector::standard(2));
  const Problem k = parse_instance(std::string(kHead) + R"("K": 1, "cost_inf": 4, "states": [[[1]], [[1]]]})");
  CHECK(k.costs.K() == 1);
  CHECK(k.costs.cost_inf() == 4.0);
  CHECK(parse_instance(std::string(kHead) + R"("costs": [1, 3], "states": [[[1]], [[1]]]})").costs.cost(2) == 3.0);
}

TEST_CASE("validation errors point at the problem") {
  CHECK(error_of(std::string(kHead) + R"("states": [[[0.9]], [[1]]]})").find("letter 'a' has trace 0.9") !=
        std::string::npos);
  CHECK(error_of(std::string(kHead) + "\n\"states\": [[[1.0x]], [[1]]]}").find("line 2") != std::string::npos);
  CHECK(error_of(std::string(kHead) + R"("states": [[[[1, "one"]]], [[1]]]})").find("states[0][0][0][1]") !=
        std::string::npos);
  CHECK(error_of(std::string(kHead) + R"("states": [[[1]], [[1, 0], [0, 0]]]})").find("dimension") !=
        std::string::npos);
  CHECK(error_of(std::string(kHead) + R"("states": [[[1.5, 0], [0, -0.5]], [[1, 0], [0, 0]]]})").find("not PSD") !=
        std::string::npos);
  CHECK(error_of(std::string(kHead) + R"("probabilities": [0.5, 0.6], "states": [[[1]], [[1]]]})")
            .find("probabilities sum") != std::string::npos);
  CHECK(error_of(std::string(kHead) + R"("costs": [2, 1], "states": [[[1]], [[1]]]})").find("nondecreasing") !=
        std::string::npos);
  CHECK(error_of(std::string(kHead) + R"("states": [[[0.5, [0, 1]], [0.1, 0.5]], [[1, 0], [0, 0]]]})")
            .find("not Hermitian") != std::string::npos);
  CHECK(error_of(std::string(kHead) + R"("colour": 1, "states": [[[1]], [[1]]]})").find("colour") !=
        std::string::npos);
  CHECK(error_of(R"({"schema": "guesswork-instance/2", "letters": [], "states": []})").find("schema") !=
        std::string::npos);
}

TEST_CASE("generators") {
  const Problem half = to_problem(generate_example("bb84-family", {.phi = std::numbers::pi / 2}));
  const CqEnsemble bb = examples::bb84();
  for (std::size_t x = 0; x < 4; ++x) CHECK(frobenius_distance(half.ensemble.state(x), bb.state(x)) < 1e-15);
  const Problem zero = to_problem(generate_example("bb84-family", {.phi = 0.0}));
  CHECK(solve_primal(zero.ensemble, zero.costs).value == doctest::Approx(1.75).epsilon(1e-7));

  const Problem trine = to_problem(generate_example("trine"));
  for (std::size_t k = 0; k < 3; ++k) {
    const double a = 2 * std::numbers::pi * static_cast<double>(k + 1) / 3;
    CHECK(trine.ensemble.state(k)(0, 0).real() == doctest::Approx(std::cos(a) * std::cos(a)));
    CHECK(trine.ensemble.state(k)(0, 1).real() == doctest::Approx(std::cos(a) * std::sin(a)));
  }

  CHECK(generate_example("random-qubits", {.n = 5, .seed = 9}) == generate_example("random-qubits", {.n = 5, .seed = 9}));
  CHECK_FALSE(generate_example("random-qubits", {.n = 5, .seed = 9}) ==
              generate_example("random-qubits", {.n = 5, .seed = 10}));
  CHECK(to_problem(generate_example("tensor2", {.inner = "trine"})).ensemble.size() == 9);
  CHECK_THROWS_AS(generate_example("nope"), Error);

  // Haar moments: E|<0|psi>|^2 = 1/d and E|<0|psi>|^4 = 2/(d(d+1)).
  for (std::size_t d : {2u, 3u}) {
    const auto doc = generate_example(d == 2 ? "random-qubits" : "random-qutrits", {.n = 4000, .seed = 5});
    double m1 = 0.0, m2 = 0.0;
    for (const auto& s : doc.states) {
      m1 += s(0, 0).real();
      m2 += s(0, 0).real() * s(0, 0).real();
    }
    m1 /= 4000;
    m2 /= 4000;
    CHECK(std::abs(m1 - 1.0 / static_cast<double>(d)) < 0.02);
    CHECK(std::abs(m2 - 2.0 / static_cast<double>(d * (d + 1))) < 0.02);
  }
}

TEST_CASE("strategy documents replay") {
  const CqEnsemble trine = examples::trine();
  const auto sol = solve_primal(trine, CostVector::standard(3));
  const Strategy back = strategy_from_json(json::parse(strategy_json(trine, sol.povm).dump()), trine);
  CHECK(guess_distribution(trine, back, CostVector::standard(3)).expected_cost ==
        doctest::Approx(sol.value).epsilon(1e-12));
  const SequentialStrategy seq = ordered_to_sequential(sol.povm, 3);
  const Strategy back_seq = strategy_from_json(json::parse(strategy_json(trine, seq).dump()), trine);
  REQUIRE(std::holds_alternative<SequentialStrategy>(back_seq));
  CHECK(std::get<SequentialStrategy>(back_seq).operators == seq.operators);
  CHECK_THROWS_AS(strategy_from_json(json{{"schema", kStrategySchema}}, trine), Error);
}

TEST_CASE("solve command") {
  const auto r = run({"solve", fixture("bb84.json"), "--json", "--no-write", "--verify", "exhaustive"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["solution"]["value"].get<double>() == doctest::Approx((10 - std::sqrt(10.0)) / 4).epsilon(1e-7));
  CHECK(j["verify"]["ok"].get<bool>());
  CHECK(j["tol"].get<double>() == 1e-8);
  CHECK(j["seed"].get<std::uint64_t>() == 1);

  const std::string out = temp_path("bb84.solution.json");
  const auto h = run({"solve", fixture("bb84.json"), "-o", out});
  CHECK(h.code == 0);
  CHECK(h.out.find("1.70943058") != std::string::npos);
  CHECK(json::parse(read_file(out))["solution"]["value"].get<double>() == doctest::Approx(1.7094305849579));
}

TEST_CASE("sweep command") {
  const auto r = run({"sweep", "--family", "bb84", "--points", "64", "--json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  const auto g = j["guesswork"].get<std::vector<double>>();
  REQUIRE(g.size() == 64);
  CHECK(g.front() == doctest::Approx(1.75).epsilon(1e-7));
  CHECK(g.back() == doctest::Approx(1.75).epsilon(1e-7));
  const auto argmin = j["argmin"].get<std::size_t>();
  CHECK((argmin == 31 || argmin == 32));
  CHECK(j["max_mirror_deviation"].get<double>() < 1e-5);
}

TEST_CASE("certify-key command") {
  const auto r = run({"certify-key", fixture("ideal4.json"), "--epsilon", "0", "--json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["report"]["lower"].get<double>() == doctest::Approx(2.5));
}

TEST_CASE("every subcommand has json output with tol and seed") {
  const std::string gen_out = temp_path("gen.json");
  const std::vector<std::vector<std::string>> cmds{
      {"solve", fixture("trine.json"), "--no-write"},
      {"dual", fixture("trine.json")},
      {"bound", fixture("trine.json"), "--tmax", "30"},
      {"entropic", fixture("trine.json"), "--samples", "64", "--copies", "1"},
      {"certify-key", fixture("ideal4.json")},
      {"strategy", fixture("trine.json"), "--reconstruct-sequential"},
      {"sweep", "--points", "3"},
      {"export-misdp", fixture("trine.json"), "--outcomes", "2"},
      {"gen", "trine", "-o", gen_out}};
  for (auto args : cmds) {
    CAPTURE(args[0]);
    args.push_back("--json");
    args.push_back("--seed");
    args.push_back("3");
    const auto r = run(args);
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.contains("tol"));
    CHECK(j["seed"].get<std::uint64_t>() == 3);
  }
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ErrorKind::Validation) == 2);
  CHECK(exit_code(ErrorKind::Restriction) == 2);
  CHECK(exit_code(ErrorKind::Numerical) == 3);
  CHECK(exit_code(ErrorKind::SizeCap) == 4);
  CHECK(exit_code(ErrorKind::Budget) == 4);

  CHECK(run({"solve", fixture("missing.json")}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"export-misdp", fixture("trine.json")}).code == 2);
  CHECK(run({"--help"}).code == 0);

  const std::string big = temp_path("big.json");
  write_file(big, serialize(generate_example("tensor2", {.n = 4, .seed = 2, .inner = "random-qutrits"})));
  const auto r = run({"solve", big, "--no-write"});
  CHECK(r.code == 4);
  CHECK(r.err.find("active-set") != std::string::npos);
}
