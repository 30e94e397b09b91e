#pragma once

#include <cstddef>

// Dense vector kernels used by the simplex engine. A scalar reference
// implementation always exists; an AVX2 variant is selected at runtime
// when the CPU supports it (override with set_backend or ESBID_KERNELS).
namespace esbid::kern {

enum class Backend { Scalar, Avx2 };

Backend active_backend();
void set_backend(Backend b);
// Re-runs auto-detection (honours the ESBID_KERNELS env var).
void reset_backend();
bool backend_available(Backend b);
const char* backend_name(Backend b);

// y += a * x
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double abs_max(const double* x, std::size_t n);

// Reference kernels, used directly by the equivalence tests.
namespace scalar {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double abs_max(const double* x, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
// Compiled with -mavx2 in its own TU; call only if backend_available(Avx2).
namespace avx2 {
void axpy(double a, const double* x, double* y, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
double abs_max(const double* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace esbid::kern
