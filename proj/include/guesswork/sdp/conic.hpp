#pragma once
// Small dense SDPs in standard primal form
//
//   minimize    sum_b tr(C_b X_b)
//   subject to  sum_b tr(A_ib X_b) = b_i,   X_b PSD (or free Hermitian)
//
// with dual
//
//   maximize    b^T y
//   subject to  C_b - sum_i y_i A_ib  in the dual cone of block b.
//
// Solved by ADMM: alternating the exact projection onto the affine set
// {A x = b} (cached factorization of the constraint Gram matrix) with the
// projection onto the product of PSD cones, with safeguarded Anderson
// acceleration of the iteration.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "guesswork/linalg/matrix.hpp"

namespace guesswork::sdp {

using linalg::HermitianMatrix;

enum class BlockKind { Psd, Free };

struct Block {
  std::size_t dim = 0;
  BlockKind kind = BlockKind::Psd;
};

struct ConstraintTerm {
  std::size_t block = 0;
  HermitianMatrix coeff;
};

struct Constraint {
  std::vector<ConstraintTerm> terms;
  double rhs = 0.0;
};

struct ConicProblem {
  std::vector<Block> blocks;
  std::vector<HermitianMatrix> objective;  // one C_b per block
  std::vector<Constraint> constraints;

  std::size_t add_block(std::size_t dim, BlockKind kind, HermitianMatrix cost);
  /// Throws Validation on mismatched dimensions or out-of-range block indices.
  void validate() const;
  /// sum_b dim_b^2 (real degrees of freedom).
  std::size_t variable_count() const;
};

enum class Status { Optimal, MaxIterations, InfeasibleSuspected };

std::string to_string(Status s);

struct ConicSolution {
  std::vector<HermitianMatrix> primal;  // X_b, PSD blocks exactly PSD
  std::vector<double> dual;             // y_i
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  // Normalized: |Ax-b|/(1+|b|), |C - A^T y - S|/(1+|C|), |p-d|/(1+|p|+|d|).
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  long iterations = 0;
  Status status = Status::MaxIterations;

  double value() const { return primal_objective; }
};

/// Initial iterate. Either part may be empty.
struct WarmStart {
  std::vector<HermitianMatrix> primal;      // X_b
  std::vector<HermitianMatrix> dual_slack;  // S_b = C_b - sum_i y_i A_ib
};

struct SolverOptions {
  double tol = 1e-8;
  long max_iter = 200000;
  std::size_t max_variables = std::size_t{1} << 22;
  double rho = 1.0;
  double relaxation = 1.6;
  bool adaptive_rho = true;
  /// Anderson acceleration history length on the ADMM fixed-point map; 0 disables.
  std::size_t anderson_memory = 10;
  int check_every = 10;
  /// Asserts weak duality (with residual corrections) at every check.
  bool debug_checks = false;
  /// Constraint counts above this use preconditioned CG instead of a dense
  /// Cholesky factor of the Gram matrix.
  std::size_t dense_gram_limit = 2000;
  const WarmStart* warm_start = nullptr;
};

/// Throws SizeCap when variable_count() exceeds options.max_variables.
ConicSolution solve(const ConicProblem& p, const SolverOptions& options = {});

struct Violation {
  enum class Kind { PrimalPsd, Equality, DualSlackPsd, DualFreeBlock, Gap };
  Kind kind;
  std::size_t index;  // block or constraint
  double amount;
  std::string message;
};

struct CertificateReport {
  std::vector<Violation> violations;
  double worst_primal_eigenvalue = 0.0;  // over PSD blocks
  double worst_dual_eigenvalue = 0.0;    // of the dual slacks
  double max_equality_residual = 0.0;
  double max_free_dual_residual = 0.0;
  double gap = 0.0;

  bool ok() const { return violations.empty(); }
};

/// Recomputes feasibility and the gap of `s` from scratch. Eigenvalue and
/// equality thresholds scale as tol * (1 + magnitude of the data involved).
CertificateReport check_certificate(const ConicProblem& p, const ConicSolution& s, double tol = 1e-6);

/// Plain-text dump for cross-checking against external solvers. Sections
/// BLOCKS, OBJECTIVE, CONSTRAINTS; matrices row-major as "re im" pairs.
void write_problem_text(const ConicProblem& p, std::ostream& out);

}  // namespace guesswork::sdp
