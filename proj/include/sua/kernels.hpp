#pragma once

#include <cstddef>
#include <cstdint>

namespace sua::kernels {

// Hot inner loops, each in two variants: `serial` is the reference kept for
// testing, `par` carries the OpenMP pragmas. Both iterate outputs in the same
// order, so results are bit-identical regardless of thread count.

namespace serial {

void vadd_mod(uint64_t* acc, const uint64_t* x, size_t n, uint64_t mask);
void vsub_mod(uint64_t* acc, const uint64_t* x, size_t n, uint64_t mask);

// Returns the index of the first out-of-range input, or SIZE_MAX when all
// encode. `out` is valid only on success.
size_t encode_vec(const double* x, uint64_t* out, size_t n, uint32_t frac_bits,
                  uint64_t mask, double bound);
void decode_vec(const uint64_t* v, double* out, size_t n, uint32_t frac_bits,
                uint32_t mod_bits);

// z[r][j] = sum_i x[r][i] * w[i][j] + b[j], row-major.
void dense_forward(const double* x, const double* w, const double* b, double* z,
                   size_t rows, size_t in_dim, size_t out_dim);
// gw[i][j] = sum_r a[r][i] * delta[r][j]; gb[j] = sum_r delta[r][j].
void dense_grad(const double* a, const double* delta, double* gw, double* gb,
                size_t rows, size_t in_dim, size_t out_dim);
// dx[r][i] = sum_j delta[r][j] * w[i][j].
void dense_backprop(const double* delta, const double* w, double* dx,
                    size_t rows, size_t in_dim, size_t out_dim);

void axpy(double* w, const double* g, double alpha, size_t n);  // w += alpha*g

}  // namespace serial

namespace par {

void vadd_mod(uint64_t* acc, const uint64_t* x, size_t n, uint64_t mask);
void vsub_mod(uint64_t* acc, const uint64_t* x, size_t n, uint64_t mask);
size_t encode_vec(const double* x, uint64_t* out, size_t n, uint32_t frac_bits,
                  uint64_t mask, double bound);
void decode_vec(const uint64_t* v, double* out, size_t n, uint32_t frac_bits,
                uint32_t mod_bits);
void dense_forward(const double* x, const double* w, const double* b, double* z,
                   size_t rows, size_t in_dim, size_t out_dim);
void dense_grad(const double* a, const double* delta, double* gw, double* gb,
                size_t rows, size_t in_dim, size_t out_dim);
void dense_backprop(const double* delta, const double* w, double* dx,
                    size_t rows, size_t in_dim, size_t out_dim);
void axpy(double* w, const double* g, double alpha, size_t n);

}  // namespace par

// Library-wide thread budget; 1 (the default) pins every kernel to one thread.
void set_threads(int n);
int threads();

}  // namespace sua::kernels
