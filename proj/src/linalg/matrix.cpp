#include "guesswork/linalg/matrix.hpp"

#include <cmath>

#include "guesswork/error.hpp"
#include "guesswork/simd/kernels.hpp"

namespace guesswork::linalg {

CMatrix::CMatrix(std::size_t n, std::vector<cplx> entries) : n_(n), a_(std::move(entries)) {
  require(a_.size() == n * n, "CMatrix: entry count does not match dimension");
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix r(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx CMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const { return std::sqrt(simd::norm_sq(simd::as_reals(entries()))); }

CMatrix& CMatrix::operator+=(const CMatrix& o) {
  require(o.n_ == n_, "CMatrix: dimension mismatch");
  simd::axpy(1.0, simd::as_reals(o.entries()), simd::as_reals(entries()));
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
  require(o.n_ == n_, "CMatrix: dimension mismatch");
  simd::axpy(-1.0, simd::as_reals(o.entries()), simd::as_reals(entries()));
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& v : a_) v *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  require(a.n_ == b.n_, "CMatrix: dimension mismatch");
  const std::size_t n = a.n_;
  CMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

HermitianMatrix::HermitianMatrix(const CMatrix& a) : m_(a.dim()) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i) {
    m_(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) { return HermitianMatrix(CMatrix::identity(n), Trusted{}); }

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::projector(std::span<const cplx> psi) {
  CMatrix m(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) m(i, j) = psi[i] * std::conj(psi[j]);
  return HermitianMatrix(m);
}

double HermitianMatrix::trace() const { return m_.trace().real(); }

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::add_scaled(double s, const HermitianMatrix& o) {
  require(o.dim() == dim(), "HermitianMatrix: dimension mismatch");
  simd::axpy(s, simd::as_reals(o.m_.entries()), simd::as_reals(m_.entries()));
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

double inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  require(a.dim() == b.dim(), "inner: dimension mismatch");
  // For Hermitian A, Re tr(A B) = sum_ij Re(conj(a_ij) b_ij).
  return simd::dot(simd::as_reals(a.entries()), simd::as_reals(b.entries()));
}

HermitianMatrix congruence(const CMatrix& a, const HermitianMatrix& h) {
  return HermitianMatrix(a * h.matrix() * a.adjoint());
}

HermitianMatrix gram(const CMatrix& a) { return HermitianMatrix(a.adjoint() * a); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  CMatrix c(n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) c(i * nb + k, j * nb + l) = a(i, j) * b(k, l);
  return c;
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  return HermitianMatrix(kron(a.matrix(), b.matrix()));
}

std::vector<HermitianMatrix> hermitian_basis(std::size_t d) {
  const double r = 1.0 / std::sqrt(2.0);
  std::vector<HermitianMatrix> out;
  out.reserve(d * d);
  for (std::size_t k = 0; k < d; ++k) {
    CMatrix e(d);
    e(k, k) = 1.0;
    out.emplace_back(HermitianMatrix(e, HermitianMatrix::Trusted{}));
  }
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = k + 1; l < d; ++l) {
      CMatrix re(d), im(d);
      re(k, l) = re(l, k) = r;
      im(k, l) = cplx(0.0, -r);
      im(l, k) = cplx(0.0, r);
      out.emplace_back(HermitianMatrix(re, HermitianMatrix::Trusted{}));
      out.emplace_back(HermitianMatrix(im, HermitianMatrix::Trusted{}));
    }
  return out;
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) { return (a - b).frobenius_norm(); }

}  // namespace guesswork::linalg
