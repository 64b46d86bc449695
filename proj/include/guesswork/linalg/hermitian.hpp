#pragma once
// Spectral operations on small dense Hermitian matrices.

#include <vector>

#include "guesswork/linalg/matrix.hpp"

namespace guesswork::linalg {

/// Eigenvalues in nonincreasing order; eigenvectors stored as the columns
/// of `vectors`.
struct EigenDecomposition {
  std::vector<double> values;
  CMatrix vectors;

  HermitianMatrix reconstruct() const;
  /// U f(diag) U^H for a real function applied to each eigenvalue.
  template <class F>
  HermitianMatrix apply(F&& f) const;
};

/// Cyclic complex Jacobi. Deterministic for a given input. Throws
/// NumericalError (carrying the off-diagonal residual) after the sweep cap.
EigenDecomposition eig(const HermitianMatrix& m);

double min_eigenvalue(const HermitianMatrix& m);
double max_abs_eigenvalue(const HermitianMatrix& m);

/// Frobenius-nearest PSD matrix: negative eigenvalues clipped to zero.
HermitianMatrix psd_project(const HermitianMatrix& m);

/// Positive semi-definite square root. Eigenvalues in [-1e-8, 0) are clipped;
/// anything more negative raises ErrorKind::Validation ("not PSD").
HermitianMatrix sqrt_psd(const HermitianMatrix& m);

/// Pseudo-inverse of a PSD matrix: eigenvalues >= cutoff are inverted, the
/// rest zeroed. A negative cutoff selects the default 1e-10 * lambda_max.
HermitianMatrix pinv_psd(const HermitianMatrix& m, double cutoff = -1.0);

/// Orthogonal projector onto the eigenspace with eigenvalues >= cutoff
/// (same default rule as pinv_psd).
HermitianMatrix support_projector(const HermitianMatrix& m, double cutoff = -1.0);

/// Sum of absolute eigenvalues.
double trace_norm(const HermitianMatrix& m);

/// tr|sqrt(rho) sqrt(sigma)| for PSD rho, sigma.
double fidelity(const HermitianMatrix& rho, const HermitianMatrix& sigma);

/// True when every eigenvalue is >= -tol * max(1, max|eigenvalue|).
bool is_psd(const HermitianMatrix& m, double tol = 1e-10);

// ---------------------------------------------------------------------------

template <class F>
HermitianMatrix EigenDecomposition::apply(F&& f) const {
  const std::size_t n = values.size();
  CMatrix out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(values[k]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vik = vectors(i, k) * w;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(vectors(j, k));
    }
  }
  return HermitianMatrix(out);
}

}  // namespace guesswork::linalg
