#include "sua/kernels.hpp"

#include <cmath>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sua::kernels {

namespace {
int g_threads = 1;
constexpr size_t kGrain = 2048;  // below this, threading costs more than it saves

inline int64_t centered(uint64_t v, uint32_t mod_bits) {
  if (mod_bits == 64) return static_cast<int64_t>(v);
  const uint64_t half = uint64_t(1) << (mod_bits - 1);
  if (v < half) return static_cast<int64_t>(v);
  return static_cast<int64_t>(v) - static_cast<int64_t>(uint64_t(1) << mod_bits);
}

inline uint64_t encode_one(double x, uint32_t frac_bits, uint64_t mask) {
  const int64_t q = std::llround(std::ldexp(x, static_cast<int>(frac_bits)));
  return static_cast<uint64_t>(q) & mask;
}
}  // namespace

void set_threads(int n) { g_threads = n < 1 ? 1 : n; }
int threads() { return g_threads; }

namespace serial {

void vadd_mod(uint64_t* acc, const uint64_t* x, size_t n, uint64_t mask) {
  for (size_t i = 0; i < n; ++i) acc[i] = (acc[i] + x[i]) & mask;
}

void vsub_mod(uint64_t* acc, const uint64_t* x, size_t n, uint64_t mask) {
  for (size_t i = 0; i < n; ++i) acc[i] = (acc[i] - x[i]) & mask;
}

size_t encode_vec(const double* x, uint64_t* out, size_t n, uint32_t frac_bits,
                  uint64_t mask, double bound) {
  for (size_t i = 0; i < n; ++i) {
    if (!(std::fabs(x[i]) <= bound)) return i;  // also catches NaN
    out[i] = encode_one(x[i], frac_bits, mask);
  }
  return SIZE_MAX;
}

void decode_vec(const uint64_t* v, double* out, size_t n, uint32_t frac_bits,
                uint32_t mod_bits) {
  for (size_t i = 0; i < n; ++i) {
    out[i] = std::ldexp(static_cast<double>(centered(v[i], mod_bits)),
                        -static_cast<int>(frac_bits));
  }
}

void dense_forward(const double* x, const double* w, const double* b, double* z,
                   size_t rows, size_t in_dim, size_t out_dim) {
  for (size_t r = 0; r < rows; ++r) {
    const double* xr = x + r * in_dim;
    double* zr = z + r * out_dim;
    for (size_t j = 0; j < out_dim; ++j) zr[j] = b[j];
    for (size_t i = 0; i < in_dim; ++i) {
      const double xi = xr[i];
      const double* wi = w + i * out_dim;
      for (size_t j = 0; j < out_dim; ++j) zr[j] += xi * wi[j];
    }
  }
}

void dense_grad(const double* a, const double* delta, double* gw, double* gb,
                size_t rows, size_t in_dim, size_t out_dim) {
  for (size_t i = 0; i < in_dim; ++i) {
    double* gwi = gw + i * out_dim;
    for (size_t j = 0; j < out_dim; ++j) gwi[j] = 0.0;
    for (size_t r = 0; r < rows; ++r) {
      const double ai = a[r * in_dim + i];
      const double* dr = delta + r * out_dim;
      for (size_t j = 0; j < out_dim; ++j) gwi[j] += ai * dr[j];
    }
  }
  for (size_t j = 0; j < out_dim; ++j) {
    double s = 0.0;
    for (size_t r = 0; r < rows; ++r) s += delta[r * out_dim + j];
    gb[j] = s;
  }
}

void dense_backprop(const double* delta, const double* w, double* dx,
                    size_t rows, size_t in_dim, size_t out_dim) {
  for (size_t r = 0; r < rows; ++r) {
    const double* dr = delta + r * out_dim;
    double* dxr = dx + r * in_dim;
    for (size_t i = 0; i < in_dim; ++i) {
      const double* wi = w + i * out_dim;
      double s = 0.0;
      for (size_t j = 0; j < out_dim; ++j) s += dr[j] * wi[j];
      dxr[i] = s;
    }
  }
}

void axpy(double* w, const double* g, double alpha, size_t n) {
  for (size_t i = 0; i < n; ++i) w[i] += alpha * g[i];
}

}  // namespace serial

namespace par {

void vadd_mod(uint64_t* acc, const uint64_t* x, size_t n, uint64_t mask) {
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1 && n > kGrain)
  for (size_t i = 0; i < n; ++i) acc[i] = (acc[i] + x[i]) & mask;
}

void vsub_mod(uint64_t* acc, const uint64_t* x, size_t n, uint64_t mask) {
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1 && n > kGrain)
  for (size_t i = 0; i < n; ++i) acc[i] = (acc[i] - x[i]) & mask;
}

size_t encode_vec(const double* x, uint64_t* out, size_t n, uint32_t frac_bits,
                  uint64_t mask, double bound) {
  size_t bad = SIZE_MAX;
#pragma omp parallel for reduction(min : bad) num_threads(g_threads) \
    if (g_threads > 1 && n > kGrain)
  for (size_t i = 0; i < n; ++i) {
    if (!(std::fabs(x[i]) <= bound)) {
      if (i < bad) bad = i;
    } else {
      out[i] = encode_one(x[i], frac_bits, mask);
    }
  }
  return bad;
}

void decode_vec(const uint64_t* v, double* out, size_t n, uint32_t frac_bits,
                uint32_t mod_bits) {
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1 && n > kGrain)
  for (size_t i = 0; i < n; ++i) {
    out[i] = std::ldexp(static_cast<double>(centered(v[i], mod_bits)),
                        -static_cast<int>(frac_bits));
  }
}

void dense_forward(const double* x, const double* w, const double* b, double* z,
                   size_t rows, size_t in_dim, size_t out_dim) {
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1 && rows > 1)
  for (size_t r = 0; r < rows; ++r) {
    const double* xr = x + r * in_dim;
    double* zr = z + r * out_dim;
    for (size_t j = 0; j < out_dim; ++j) zr[j] = b[j];
    for (size_t i = 0; i < in_dim; ++i) {
      const double xi = xr[i];
      const double* wi = w + i * out_dim;
      for (size_t j = 0; j < out_dim; ++j) zr[j] += xi * wi[j];
    }
  }
}

void dense_grad(const double* a, const double* delta, double* gw, double* gb,
                size_t rows, size_t in_dim, size_t out_dim) {
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1 && in_dim > 8)
  for (size_t i = 0; i < in_dim; ++i) {
    double* gwi = gw + i * out_dim;
    for (size_t j = 0; j < out_dim; ++j) gwi[j] = 0.0;
    for (size_t r = 0; r < rows; ++r) {
      const double ai = a[r * in_dim + i];
      const double* dr = delta + r * out_dim;
      for (size_t j = 0; j < out_dim; ++j) gwi[j] += ai * dr[j];
    }
  }
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1 && out_dim > 8)
  for (size_t j = 0; j < out_dim; ++j) {
    double s = 0.0;
    for (size_t r = 0; r < rows; ++r) s += delta[r * out_dim + j];
    gb[j] = s;
  }
}

void dense_backprop(const double* delta, const double* w, double* dx,
                    size_t rows, size_t in_dim, size_t out_dim) {
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1 && rows > 1)
  for (size_t r = 0; r < rows; ++r) {
    const double* dr = delta + r * out_dim;
    double* dxr = dx + r * in_dim;
    for (size_t i = 0; i < in_dim; ++i) {
      const double* wi = w + i * out_dim;
      double s = 0.0;
      for (size_t j = 0; j < out_dim; ++j) s += dr[j] * wi[j];
      dxr[i] = s;
    }
  }
}

void axpy(double* w, const double* g, double alpha, size_t n) {
#pragma omp parallel for num_threads(g_threads) if (g_threads > 1 && n > kGrain)
  for (size_t i = 0; i < n; ++i) w[i] += alpha * g[i];
}

}  // namespace par

}  // namespace sua::kernels
