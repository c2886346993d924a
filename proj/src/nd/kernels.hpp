#pragma once

#include <cstddef>

#include "sememe/nd/tensor.hpp"

// Dense row-major kernels. Loop orders are fixed so results are bitwise
// reproducible for identical inputs.
namespace sememe::nd::kernels {

// c[m,n] = a[m,k] * b[k,n]   (c is overwritten)
void matmul(const Real* a, const Real* b, Real* c, std::size_t m, std::size_t k, std::size_t n);
// ga[m,k] += g[m,n] * b[k,n]^T
void matmul_grad_a(const Real* g, const Real* b, Real* ga, std::size_t m, std::size_t k, std::size_t n);
// gb[k,n] += a[m,k]^T * g[m,n]
void matmul_grad_b(const Real* a, const Real* g, Real* gb, std::size_t m, std::size_t k, std::size_t n);

Real dot(const Real* x, const Real* y, std::size_t n);
// y += alpha * x
void axpy(Real alpha, const Real* x, Real* y, std::size_t n);

}  // namespace sememe::nd::kernels
