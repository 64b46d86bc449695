#pragma once
// JSON documents: problem instances, solutions and strategies.
// Complex entries are [re, im] pairs; matrices are arrays of rows.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "guesswork/model/ensemble.hpp"
#include "guesswork/solver/guesswork.hpp"
#include "guesswork/strategy/strategy.hpp"

namespace guesswork::io {

inline constexpr const char* kInstanceSchema = "guesswork-instance/1";
inline constexpr const char* kSolutionSchema = "guesswork-solution/1";
inline constexpr const char* kStrategySchema = "guesswork-strategy/1";

struct InstanceDocument {
  std::string schema = kInstanceSchema;
  std::optional<std::string> name;
  std::vector<std::string> letters;
  std::optional<std::vector<double>> probabilities;  // uniform if absent
  std::vector<CMatrix> states;
  std::optional<std::vector<double>> costs;  // (1..K) if absent
  std::optional<double> cost_inf;            // absent: infinite
  std::optional<std::size_t> K;              // |X| if absent

  friend bool operator==(const InstanceDocument&, const InstanceDocument&) = default;
};

struct Problem {
  CqEnsemble ensemble;
  CostVector costs;
};

/// Validation errors carry the line for syntax errors and the field path otherwise.
InstanceDocument parse_document(const std::string& text);
std::string serialize(const InstanceDocument& doc);

Problem to_problem(const InstanceDocument& doc);
Problem parse_instance(const std::string& text);

InstanceDocument to_document(const CqEnsemble& ens, const std::optional<CostVector>& cv = std::nullopt,
                             std::optional<std::string> name = std::nullopt);

/// Reads the whole file; Validation error if it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

struct ExampleParams {
  double phi = 1.5707963267948966;
  std::size_t n = 4;
  std::uint64_t seed = 1;
  std::string inner = "bb84";  // for tensor2
};

/// bb84 | bb84-family | trine | random-qubits | random-qutrits | tensor2 |
/// classical-bb84 | ideal (n letters, maximally mixed qubit).
InstanceDocument generate_example(const std::string& name, const ExampleParams& params = {});
std::vector<std::string> example_names();

nlohmann::json matrix_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json order_json(const GuessOrder& g, const std::vector<std::string>& letters);

nlohmann::json solution_json(const CqEnsemble& ens, const GuessworkSolution& sol);

/// Ordered or sequential strategies; measured strategies are stored as their ordered compilation.
nlohmann::json strategy_json(const CqEnsemble& ens, const Strategy& s);
Strategy strategy_from_json(const nlohmann::json& j, const CqEnsemble& ens);

}  // namespace guesswork::io
