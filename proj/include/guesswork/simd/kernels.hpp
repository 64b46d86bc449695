#pragma once
// Dense double-precision vector kernels used by the conic solver and the
// Hermitian kernel. Complex arrays are processed through their interleaved
// (re, im) double view, so Re tr(A^H B) is a plain real dot product.
//
// Each kernel has a portable scalar reference and an AVX2+FMA variant. The
// variant is chosen once at startup from CPUID; GUESSWORK_SIMD=scalar forces
// the reference path.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace guesswork::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  Backend backend;
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y[i] = alpha * x[i] + beta * y[i]
  void (*axpby)(double alpha, const double* x, double beta, double* y, std::size_t n);
  // out[i] = a[i] - b[i]
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

/// Returns nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();

bool cpu_supports_avx2();

/// The table selected for this process.
const KernelTable& active();

/// Override the process-wide selection (tests and benchmarking only).
void force_backend(Backend b);

std::string_view backend_name(Backend b);

// Convenience wrappers over the active table.

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), y.size());
}

inline void axpby(double alpha, std::span<const double> x, double beta, std::span<double> y) {
  active().axpby(alpha, x.data(), beta, y.data(), y.size());
}

inline void sub(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  active().sub(a.data(), b.data(), out.data(), out.size());
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

inline std::span<const double> as_reals(std::span<const std::complex<double>> z) {
  return {reinterpret_cast<const double*>(z.data()), 2 * z.size()};
}

inline std::span<double> as_reals(std::span<std::complex<double>> z) {
  return {reinterpret_cast<double*>(z.data()), 2 * z.size()};
}

}  // namespace guesswork::simd
