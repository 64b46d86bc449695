#include "guesswork/io/document.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "guesswork/error.hpp"
#include "guesswork/model/examples.hpp"

namespace guesswork::io {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  fail(ErrorKind::Validation, "instance: " + where + ": " + what);
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where, "expected a number, got " + j.dump());
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where, "number is not finite");
  return v;
}

std::vector<double> numbers_at(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

cplx complex_at(const json& j, const std::string& where) {
  if (j.is_number()) return {number_at(j, where), 0.0};
  if (!j.is_array() || j.size() != 2) bad(where, "expected [re, im]");
  return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

GuessOrder order_from_json(const json& j, const CqEnsemble& ens, const std::string& where, bool repeats) {
  if (!j.is_array()) bad(where, "expected an array of letters");
  std::vector<int> e;
  for (const auto& l : j) {
    if (!l.is_string()) bad(where, "letters must be strings");
    e.push_back(static_cast<int>(ens.index_of(l.get<std::string>())));
  }
  return repeats ? GuessOrder::with_repeats(std::move(e)) : GuessOrder(std::move(e));
}

std::vector<int> history_from_json(const json& j, const CqEnsemble& ens, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of letters");
  std::vector<int> h;
  for (const auto& l : j) {
    if (!l.is_string()) bad(where, "letters must be strings");
    h.push_back(static_cast<int>(ens.index_of(l.get<std::string>())));
  }
  return h;
}

json letters_json(const std::vector<int>& h, const std::vector<std::string>& letters) {
  json a = json::array();
  for (int x : h) a.push_back(letters[static_cast<std::size_t>(x)]);
  return a;
}

}  // namespace

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) bad(where, "expected a nonempty array of rows");
  const std::size_t n = j.size();
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != n) bad(w, "expected a row of " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = complex_at(j[i][k], w + "[" + std::to_string(k) + "]");
  }
  return m;
}

json order_json(const GuessOrder& g, const std::vector<std::string>& letters) {
  return letters_json(g.entries(), letters);
}

InstanceDocument parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    const auto p = msg.find("] ");
    if (p != std::string::npos) msg = msg.substr(p + 2);
    fail(ErrorKind::Validation, "instance: " + msg);
  }
  if (!j.is_object()) bad("$", "expected an object");
  static const char* known[] = {"schema", "name", "letters", "probabilities", "states", "costs", "cost_inf", "K"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) bad(key, "unknown field");
  }

  InstanceDocument d;
  if (!j.contains("schema") || !j["schema"].is_string()) bad("schema", "missing schema string");
  d.schema = j["schema"].get<std::string>();
  if (d.schema != kInstanceSchema) bad("schema", "unsupported schema '" + d.schema + "' (expected " + kInstanceSchema + ")");
  if (j.contains("name")) {
    if (!j["name"].is_string()) bad("name", "expected a string");
    d.name = j["name"].get<std::string>();
  }
  if (!j.contains("letters") || !j["letters"].is_array()) bad("letters", "missing array");
  for (std::size_t i = 0; i < j["letters"].size(); ++i) {
    const auto& l = j["letters"][i];
    if (!l.is_string()) bad("letters[" + std::to_string(i) + "]", "expected a string");
    d.letters.push_back(l.get<std::string>());
  }
  if (j.contains("probabilities")) {
    d.probabilities = numbers_at(j["probabilities"], "probabilities");
    if (d.probabilities->size() != d.letters.size()) bad("probabilities", "length differs from letters");
  }
  if (!j.contains("states") || !j["states"].is_array()) bad("states", "missing array");
  if (j["states"].size() != d.letters.size()) bad("states", "length differs from letters");
  for (std::size_t x = 0; x < j["states"].size(); ++x) {
    const std::string w = "states[" + std::to_string(x) + "]";
    CMatrix m = matrix_from_json(j["states"][x], w);
    const double scale = std::max(1.0, m.frobenius_norm());
    for (std::size_t a = 0; a < m.dim(); ++a)
      for (std::size_t b = 0; b <= a; ++b)
        if (std::abs(m(a, b) - std::conj(m(b, a))) > 1e-12 * scale)
          bad(w, "state of letter '" + d.letters[x] + "' is not Hermitian");
    d.states.push_back(std::move(m));
  }
  if (j.contains("costs")) d.costs = numbers_at(j["costs"], "costs");
  if (j.contains("cost_inf") && !j["cost_inf"].is_null()) d.cost_inf = number_at(j["cost_inf"], "cost_inf");
  if (j.contains("K")) {
    if (!j["K"].is_number_unsigned()) bad("K", "expected a positive integer");
    d.K = j["K"].get<std::size_t>();
  }
  return d;
}

std::string serialize(const InstanceDocument& d) {
  // One field per line, states one per line; numbers in shortest round-trip form.
  std::ostringstream o;
  o << "{\n  \"schema\": " << json(d.schema).dump();
  if (d.name) o << ",\n  \"name\": " << json(*d.name).dump();
  o << ",\n  \"letters\": " << json(d.letters).dump();
  if (d.probabilities) o << ",\n  \"probabilities\": " << json(*d.probabilities).dump();
  o << ",\n  \"states\": [";
  for (std::size_t x = 0; x < d.states.size(); ++x) o << (x ? ",\n    " : "\n    ") << matrix_json(d.states[x]).dump();
  o << "\n  ]";
  if (d.costs) o << ",\n  \"costs\": " << json(*d.costs).dump();
  if (d.cost_inf) o << ",\n  \"cost_inf\": " << json(*d.cost_inf).dump();
  if (d.K) o << ",\n  \"K\": " << *d.K;
  o << "\n}\n";
  return o.str();
}

Problem to_problem(const InstanceDocument& d) {
  const std::size_t n = d.letters.size();
  std::vector<HermitianMatrix> states;
  for (const auto& s : d.states) states.emplace_back(s);
  CqEnsemble ens = d.probabilities ? CqEnsemble(d.letters, *d.probabilities, std::move(states))
                                   : CqEnsemble::uniform(d.letters, std::move(states));
  std::vector<double> costs;
  if (d.costs) {
    costs = *d.costs;
    if (d.K && *d.K != costs.size()) bad("K", "differs from the number of costs");
  } else {
    const std::size_t K = d.K.value_or(n);
    for (std::size_t k = 1; k <= K; ++k) costs.push_back(static_cast<double>(k));
  }
  if (costs.size() > n) bad("costs", "more costs than letters");
  try {
    CostVector cv(std::move(costs), d.cost_inf);
    return {std::move(ens), std::move(cv)};
  } catch (const Error& e) {
    bad("costs", e.what());
  }
}

Problem parse_instance(const std::string& text) { return to_problem(parse_document(text)); }

InstanceDocument to_document(const CqEnsemble& ens, const std::optional<CostVector>& cv, std::optional<std::string> name) {
  InstanceDocument d;
  d.name = std::move(name);
  d.letters = ens.letters();
  d.probabilities = ens.probs();
  for (const auto& s : ens.states()) d.states.push_back(s.matrix());
  if (cv) {
    d.costs = cv->costs();
    d.cost_inf = cv->cost_inf();
  }
  return d;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Validation, "cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Validation, "cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> example_names() {
  return {"bb84", "bb84-family", "trine", "random-qubits", "random-qutrits", "tensor2", "classical-bb84", "ideal"};
}

InstanceDocument generate_example(const std::string& name, const ExampleParams& p) {
  std::ostringstream tag;
  tag.precision(17);
  if (name == "bb84") return to_document(examples::bb84(), std::nullopt, "bb84");
  if (name == "bb84-family") {
    tag << "bb84-family(phi=" << p.phi << ")";
    return to_document(examples::bb84_family(p.phi), std::nullopt, tag.str());
  }
  if (name == "trine") return to_document(examples::trine(), std::nullopt, "trine");
  if (name == "classical-bb84") return to_document(examples::classical_bb84(), std::nullopt, "classical-bb84");
  if (name == "ideal") {
    tag << "ideal(n=" << p.n << ")";
    return to_document(examples::uninformative(p.n, 2), std::nullopt, tag.str());
  }
  if (name == "random-qubits" || name == "random-qutrits") {
    const std::size_t d = name == "random-qubits" ? 2 : 3;
    tag << name << "(n=" << p.n << ",seed=" << p.seed << ")";
    return to_document(examples::random_pure(p.n, d, p.seed), std::nullopt, tag.str());
  }
  if (name == "tensor2") {
    require(p.inner != "tensor2", "generate_example: tensor2 cannot nest itself");
    const InstanceDocument inner = generate_example(p.inner, p);
    const Problem q = to_problem(inner);
    return to_document(tensor_power(q.ensemble, 2), std::nullopt, "tensor2(" + inner.name.value_or(p.inner) + ")");
  }
  fail(ErrorKind::Validation, "generate_example: unknown example '" + name + "'");
}

json solution_json(const CqEnsemble& ens, const GuessworkSolution& sol) {
  json povm = json::array();
  for (const auto& e : sol.povm.elements) {
    povm.push_back({{"order", order_json(e.label, ens.letters())},
                    {"weight", e.op.trace()},
                    {"operator", matrix_json(e.op.matrix())}});
  }
  json support = json::array();
  for (const auto& g : sol.support) support.push_back(order_json(g, ens.letters()));
  return {{"schema", kSolutionSchema},
          {"value", sol.value},
          {"primal_value", sol.primal_value},
          {"dual_value", sol.dual_value},
          {"gap", sol.gap},
          {"certificate_margin", sol.certificate_margin},
          {"status", sdp::to_string(sol.status)},
          {"iterations", sol.iterations},
          {"primal_residual", sol.primal_residual},
          {"dual_residual", sol.dual_residual},
          {"support", support},
          {"dual_Y", matrix_json(sol.dual_Y.matrix())},
          {"povm", povm}};
}

json strategy_json(const CqEnsemble& ens, const Strategy& s) {
  json out{{"schema", kStrategySchema}, {"letters", ens.letters()}, {"dim", ens.dim()}};
  auto ordered = [&](const OrderPovm& p) {
    out["kind"] = "ordered";
    json el = json::array();
    for (const auto& e : p.elements)
      el.push_back({{"order", order_json(e.label, ens.letters())}, {"operator", matrix_json(e.op.matrix())}});
    out["elements"] = el;
  };
  if (const auto* p = std::get_if<OrderPovm>(&s)) {
    ordered(*p);
  } else if (const auto* m = std::get_if<MeasuredStrategy>(&s)) {
    ordered(measured_to_ordered(*m));
  } else {
    const auto& q = std::get<SequentialStrategy>(s);
    out["kind"] = "sequential";
    out["steps"] = q.steps;
    json nodes = json::array();
    for (const auto& [h, ops] : q.operators) {
      json mats = json::array();
      for (const auto& m : ops) mats.push_back(matrix_json(m));
      nodes.push_back({{"history", letters_json(h, ens.letters())}, {"operators", mats}});
    }
    out["nodes"] = nodes;
  }
  return out;
}

namespace {

Strategy strategy_from_json_unchecked(const json& j, const CqEnsemble& ens) {
  if (!j.is_object() || j.value("schema", "") != kStrategySchema) bad("schema", std::string("expected ") + kStrategySchema);
  if (j.value("letters", json::array()) != json(ens.letters())) bad("letters", "strategy alphabet differs from the instance");
  const std::string kind = j.value("kind", "");
  if (kind == "ordered") {
    OrderPovm p;
    const json& el = j.at("elements");
    for (std::size_t i = 0; i < el.size(); ++i) {
      const std::string w = "elements[" + std::to_string(i) + "]";
      p.elements.push_back({order_from_json(el[i].at("order"), ens, w + ".order", true),
                            HermitianMatrix(matrix_from_json(el[i].at("operator"), w + ".operator"))});
    }
    validate_povm(p, ens.dim());
    return p;
  }
  if (kind == "sequential") {
    SequentialStrategy s;
    s.alphabet = ens.size();
    s.dim = ens.dim();
    s.steps = j.at("steps").get<std::size_t>();
    const json& nodes = j.at("nodes");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string w = "nodes[" + std::to_string(i) + "]";
      std::vector<CMatrix> ops;
      const json& mats = nodes[i].at("operators");
      for (std::size_t k = 0; k < mats.size(); ++k)
        ops.push_back(matrix_from_json(mats[k], w + ".operators[" + std::to_string(k) + "]"));
      s.operators.emplace(history_from_json(nodes[i].at("history"), ens, w + ".history"), std::move(ops));
    }
    s.validate();
    return s;
  }
  bad("kind", "expected 'ordered' or 'sequential'");
}

}  // namespace

Strategy strategy_from_json(const json& j, const CqEnsemble& ens) {
  try {
    return strategy_from_json_unchecked(j, ens);
  } catch (const json::exception& e) {
    fail(ErrorKind::Validation, std::string("strategy: ") + e.what());
  }
}

}  // namespace guesswork::io
