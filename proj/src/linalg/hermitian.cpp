#include "guesswork/linalg/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "guesswork/error.hpp"

namespace guesswork::linalg {
namespace {

constexpr int kMaxSweeps = 64;

double off_diagonal_sq(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = i + 1; j < a.dim(); ++j) s += std::norm(a(i, j));
  return 2.0 * s;
}

double default_cutoff(const std::vector<double>& values) {
  double lmax = 0.0;
  for (double v : values) lmax = std::max(lmax, std::abs(v));
  return 1e-10 * lmax;
}

}  // namespace

HermitianMatrix EigenDecomposition::reconstruct() const {
  return apply([](double v) { return v; });
}

namespace {

// Cyclic complex Jacobi; diagonalizes `a` in place and accumulates rotations into `v` if given.
void jacobi(CMatrix& a, CMatrix* v) {
  const std::size_t n = a.dim();
  const double scale = std::max(a.frobenius_norm(), 1e-300);
  const double target = 1e-30 * scale * scale;
  double off = off_diagonal_sq(a);
  int sweep = 0;
  for (; sweep < kMaxSweeps && off > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real(), aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // V acts on columns p, q: V[:,p] = c e_p - s e^{-i phi} e_q,
        // V[:,q] = s e_p + c e^{-i phi} e_q. A <- V^H A V, vectors <- vectors V.
        const cplx sp = s * std::conj(phase);
        const cplx cp = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sp * akq;
          a(k, q) = s * akp + cp * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - std::conj(sp) * aqk;
          a(q, k) = s * apk + std::conj(cp) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        if (v == nullptr) continue;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = (*v)(k, p), vkq = (*v)(k, q);
          (*v)(k, p) = c * vkp - sp * vkq;
          (*v)(k, q) = s * vkp + cp * vkq;
        }
      }
    }
    off = off_diagonal_sq(a);
  }
  if (off > target && off > 1e-28 * scale * scale) {
    std::ostringstream msg;
    msg << "eig: Jacobi did not converge after " << kMaxSweeps << " sweeps (off-diagonal norm "
        << std::sqrt(off) << ")";
    throw NumericalError(msg.str(), std::sqrt(off));
  }
}

}  // namespace

EigenDecomposition eig(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  CMatrix a = m.matrix();
  CMatrix v = CMatrix::identity(n);
  jacobi(a, &v);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = CMatrix(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

double min_eigenvalue(const HermitianMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) return 0.0;
  if (n == 1) return m(0, 0).real();
  if (n == 2) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    return 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
  }
  CMatrix a = m.matrix();
  jacobi(a, nullptr);
  double lo = a(0, 0).real();
  for (std::size_t k = 1; k < n; ++k) lo = std::min(lo, a(k, k).real());
  return lo;
}

double max_abs_eigenvalue(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  const auto values = eig(m).values;
  return std::max(std::abs(values.front()), std::abs(values.back()));
}

HermitianMatrix psd_project(const HermitianMatrix& m) {
  return eig(m).apply([](double v) { return v > 0.0 ? v : 0.0; });
}

HermitianMatrix sqrt_psd(const HermitianMatrix& m) {
  const auto e = eig(m);
  if (!e.values.empty() && e.values.back() < -1e-8) {
    std::ostringstream msg;
    msg << "sqrt_psd: matrix is not PSD (min eigenvalue " << e.values.back() << ")";
    fail(ErrorKind::Validation, msg.str());
  }
  return e.apply([](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
}

HermitianMatrix pinv_psd(const HermitianMatrix& m, double cutoff) {
  const auto e = eig(m);
  const double cut = cutoff < 0.0 ? default_cutoff(e.values) : cutoff;
  return e.apply([cut](double v) { return (v >= cut && v > 0.0) ? 1.0 / v : 0.0; });
}

HermitianMatrix support_projector(const HermitianMatrix& m, double cutoff) {
  const auto e = eig(m);
  const double cut = cutoff < 0.0 ? default_cutoff(e.values) : cutoff;
  return e.apply([cut](double v) { return (v >= cut && v > 0.0) ? 1.0 : 0.0; });
}

double trace_norm(const HermitianMatrix& m) {
  if (m.dim() == 0) return 0.0;
  double s = 0.0;
  for (double v : eig(m).values) s += std::abs(v);
  return s;
}

double fidelity(const HermitianMatrix& rho, const HermitianMatrix& sigma) {
  require(rho.dim() == sigma.dim(), "fidelity: dimension mismatch");
  require(rho.trace() <= 1.0 + 1e-8 && sigma.trace() <= 1.0 + 1e-8,
          "fidelity: trace exceeds 1");
  if (sigma.dim() > 0 && min_eigenvalue(sigma) < -1e-8) fail(ErrorKind::Validation, "fidelity: sigma is not PSD");
  const HermitianMatrix sr = sqrt_psd(rho);
  // |sqrt(rho) sqrt(sigma)|_1 = tr sqrt(sqrt(rho) sigma sqrt(rho)).
  const HermitianMatrix inner_op = congruence(sr.matrix(), sigma);
  double f = 0.0;
  for (double v : eig(inner_op).values) f += v > 0.0 ? std::sqrt(v) : 0.0;
  return f;
}

bool is_psd(const HermitianMatrix& m, double tol) {
  if (m.dim() == 0) return true;
  const auto values = eig(m).values;
  const double scale = std::max({1.0, std::abs(values.front()), std::abs(values.back())});
  return values.back() >= -tol * scale;
}

}  // namespace guesswork::linalg
