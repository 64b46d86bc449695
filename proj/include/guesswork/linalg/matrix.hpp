#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace guesswork::linalg {

using cplx = std::complex<double>;

/// Dense square complex matrix, row-major.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(std::size_t n) : n_(n), a_(n * n) {}
  CMatrix(std::size_t n, std::vector<cplx> entries);

  static CMatrix identity(std::size_t n);
  static CMatrix zero(std::size_t n) { return CMatrix(n); }

  std::size_t dim() const noexcept { return n_; }
  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::span<cplx> entries() noexcept { return a_; }
  std::span<const cplx> entries() const noexcept { return a_; }

  CMatrix adjoint() const;
  cplx trace() const;
  double frobenius_norm() const;

  CMatrix& operator+=(const CMatrix& o);
  CMatrix& operator-=(const CMatrix& o);
  CMatrix& operator*=(cplx s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<cplx> a_;
};

/// Complex Hermitian matrix. Construction stores (A + A^H)/2, so the
/// invariant a(i,j) == conj(a(j,i)) holds exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t n) : m_(n) {}
  explicit HermitianMatrix(const CMatrix& a);

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix zero(std::size_t n) { return HermitianMatrix(n); }
  static HermitianMatrix diagonal(std::span<const double> d);
  /// |psi><psi| (psi is not normalized).
  static HermitianMatrix projector(std::span<const cplx> psi);

  std::size_t dim() const noexcept { return m_.dim(); }
  const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const CMatrix& matrix() const noexcept { return m_; }
  std::span<const cplx> entries() const noexcept { return m_.entries(); }

  double trace() const;
  double frobenius_norm() const { return m_.frobenius_norm(); }

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);
  HermitianMatrix& add_scaled(double s, const HermitianMatrix& o);  // this += s * o

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix a, Trusted) : m_(std::move(a)) {}
  friend HermitianMatrix congruence(const CMatrix& a, const HermitianMatrix& h);
  friend HermitianMatrix gram(const CMatrix& a);
  friend std::vector<HermitianMatrix> hermitian_basis(std::size_t d);

  CMatrix m_;
};

/// Re tr(A B) for Hermitian A, B (the Hilbert-Schmidt inner product).
double inner(const HermitianMatrix& a, const HermitianMatrix& b);

/// A H A^H.
HermitianMatrix congruence(const CMatrix& a, const HermitianMatrix& h);

/// A^H A.
HermitianMatrix gram(const CMatrix& a);

CMatrix kron(const CMatrix& a, const CMatrix& b);
HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

/// Orthonormal basis (Hilbert-Schmidt) of the d^2-dimensional real space of
/// d x d Hermitian matrices: E_kk, (E_kl + E_lk)/sqrt2, i(E_lk - E_kl)/sqrt2.
std::vector<HermitianMatrix> hermitian_basis(std::size_t d);

double frobenius_distance(const CMatrix& a, const CMatrix& b);
inline double frobenius_distance(const HermitianMatrix& a, const HermitianMatrix& b) {
  return frobenius_distance(a.matrix(), b.matrix());
}

}  // namespace guesswork::linalg
