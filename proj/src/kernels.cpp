#include "esbid/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace esbid::kern {

namespace scalar {

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double abs_max(const double* x, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::fabs(x[i]);
    if (v > m) m = v;
  }
  return m;
}

}  // namespace scalar

namespace {

struct Vtable {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  double (*abs_max)(const double*, std::size_t);
};

constexpr Vtable kScalarVt{scalar::axpy, scalar::dot, scalar::scale,
                           scalar::abs_max};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Vtable kAvx2Vt{avx2::axpy, avx2::dot, avx2::scale, avx2::abs_max};
bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") != 0; }
#else
bool cpu_has_avx2() { return false; }
#endif

Backend g_backend = Backend::Scalar;
const Vtable* g_vt = &kScalarVt;
bool g_initialized = false;

void apply(Backend b) {
  g_backend = b;
#if defined(__x86_64__) || defined(_M_X64)
  g_vt = (b == Backend::Avx2) ? &kAvx2Vt : &kScalarVt;
#else
  g_vt = &kScalarVt;
#endif
}

void autodetect() {
  Backend b = cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
  if (const char* env = std::getenv("ESBID_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) b = Backend::Scalar;
    else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) b = Backend::Avx2;
  }
  apply(b);
  g_initialized = true;
}

void ensure_init() {
  if (!g_initialized) autodetect();
}

}  // namespace

Backend active_backend() {
  ensure_init();
  return g_backend;
}

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !backend_available(Backend::Avx2)) b = Backend::Scalar;
  apply(b);
  g_initialized = true;
}

void reset_backend() { autodetect(); }

bool backend_available(Backend b) {
  if (b == Backend::Scalar) return true;
  return cpu_has_avx2();
}

const char* backend_name(Backend b) {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  ensure_init();
  g_vt->axpy(a, x, y, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  ensure_init();
  return g_vt->dot(x, y, n);
}

void scale(double a, double* x, std::size_t n) {
  ensure_init();
  g_vt->scale(a, x, n);
}

double abs_max(const double* x, std::size_t n) {
  ensure_init();
  return g_vt->abs_max(x, n);
}

}  // namespace esbid::kern
